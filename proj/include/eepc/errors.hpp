#pragma once

#include <stdexcept>
#include <string>

namespace eepc {

/// Input outside the mathematical domain of an operation (negative SIR, bad load, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The efficiency function has no positive solution of f(g) = g f'(g).
class NoInteriorMaximizer : public DomainError {
 public:
  NoInteriorMaximizer() : DomainError("no interior maximizer") {}
};

/// A load exceeds what a receiver can support at the target SIR.
class CapacityExceeded : public DomainError {
 public:
  CapacityExceeded(const std::string& what, double threshold)
      : DomainError(what), threshold_(threshold) {}
  double threshold() const noexcept { return threshold_; }

 private:
  double threshold_;
};

/// Dimension mismatch or rank deficiency in a linear-algebra step.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class SingularityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// User sizes violate sum(Phi) < 1.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace eepc
