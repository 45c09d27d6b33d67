#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mzak {

/// Raised when a field is handed to an operation in the wrong representation.
class RepresentationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a negative Riesz power meets a field with nonzero mean.
class ZeroModeError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Operation requires a specific grid dimension.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Consistency violation inside an evolved state (e.g. chi_minus != conj(chi_plus)).
class StateCorruptionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite values appeared during time stepping.
class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(const std::string& what, double t, std::size_t step_index = 0)
      : std::runtime_error(what), t_(t), step_index_(step_index) {}

  double time() const noexcept { return t_; }
  std::size_t step_index() const noexcept { return step_index_; }

 private:
  double t_;
  std::size_t step_index_;
};

/// Parameters outside the range where an estimate is stated.
class InadmissibleParameters : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mzak
