#pragma once

#include <stdexcept>
#include <string>

namespace aerostt {

/// A state or argument outside the region where a formula is defined.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Step-size underflow or step budget exhaustion in the ODE integrator.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double time)
      : std::runtime_error(what + " at t=" + std::to_string(time)), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

/// Apoapsis requested for a parabolic or hyperbolic state.
class NotCapturedError : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace aerostt
