#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace kerrmzi {

/// Input outside the mathematical domain of a formula (e.g. SQL at N_ps <= 0).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Zero slope: the error-propagation sensitivity has no finite value.
class UndefinedSensitivity : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FieldError {
  std::string field;
  std::string message;
};

class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(std::vector<FieldError> errors);

  const std::vector<FieldError>& errors() const noexcept { return errors_; }

 private:
  std::vector<FieldError> errors_;
};

/// Parse failure in a configuration file; carries the offending line and key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, int line, const std::string& what);

  const std::string& key() const noexcept { return key_; }
  int line() const noexcept { return line_; }

 private:
  std::string key_;
  int line_;
};

/// Fock-space truncation leaked more norm than the declared budget at a named stage.
class TruncationError : public std::runtime_error {
 public:
  TruncationError(std::string stage, double leaked, double budget);

  const std::string& stage() const noexcept { return stage_; }
  double leaked() const noexcept { return leaked_; }

 private:
  std::string stage_;
  double leaked_;
};

}  // namespace kerrmzi

namespace kerrmzi {

/// Richardson check or cutoff-doubling check did not converge.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Requested computation is outside the supported model (e.g. QFI of a mixed state).
class Unsupported : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace kerrmzi
