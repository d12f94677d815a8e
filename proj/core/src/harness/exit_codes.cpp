#include "ptc/harness/exit_codes.hpp"

#include "ptc/errors.hpp"

namespace ptc::harness {

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const DomainError*>(&e) ||
      dynamic_cast<const DegenerateInputError*>(&e)) {
    return kExitConfig;
  }
  if (dynamic_cast<const IngestionError*>(&e)) return kExitIngestion;
  if (dynamic_cast<const DivergenceError*>(&e) || dynamic_cast<const StabilityError*>(&e) ||
      dynamic_cast<const NumericalError*>(&e)) {
    return kExitDivergence;
  }
  if (dynamic_cast<const TrainingError*>(&e)) return kExitTraining;
  return kExitUnexpected;
}

}  // namespace ptc::harness
