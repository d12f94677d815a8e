#pragma once

#include <stdexcept>
#include <string>

namespace ptc {

// Argument outside the validity range of a correlation or model.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Iterative solver gave up; carries the last iterate.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double last_iterate)
      : std::runtime_error(what), last_iterate_(last_iterate) {}
  double last_iterate() const noexcept { return last_iterate_; }

 private:
  double last_iterate_;
};

// Explicit scheme would violate its stability bound (CFL).
class StabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A simulated temperature left the sanity band.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegenerateInputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IngestionError : public std::runtime_error {
 public:
  IngestionError(const std::string& what, long line = -1)
      : std::runtime_error(what), line_(line) {}
  // 1-based line of the offending record, -1 when not line specific.
  long line() const noexcept { return line_; }

 private:
  long line_;
};

}  // namespace ptc
