#pragma once

#include <exception>

namespace ptc::harness {

// Process exit codes of the command line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitUnexpected = 1,
  kExitConfig = 2,
  kExitIngestion = 3,
  kExitDivergence = 4,
  kExitTraining = 5,
};

// Maps an error escaping a command to its exit code. Invalid parameters count
// as configuration errors; solver and stability failures as divergence.
int exit_code_for(const std::exception& e);

}  // namespace ptc::harness
