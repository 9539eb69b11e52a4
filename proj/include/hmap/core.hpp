#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace hmap {

/// Input outside the mathematical domain of an operation (branch, range, singular
/// coefficient). Maps to CLI exit code 3.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed or inconsistent parameters. Maps to CLI exit code 2 when raised
/// while parsing a configuration, 3 otherwise.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An iterative method did not reach its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A real value that may sit on a pole. Pole-flagged values carry a signed
/// infinity (or NaN where no sign is meaningful) and are propagated rather than
/// thrown so grid sweeps can mask the node.
template <class Real>
struct Flagged {
  Real value{};
  bool pole = false;

  static Flagged regular(Real v) { return {v, false}; }
  static Flagged singular(Real sign = Real(1)) {
    return {std::copysign(std::numeric_limits<Real>::infinity(), sign), true};
  }
  bool ok() const { return !pole && std::isfinite(value); }
};

}  // namespace hmap
