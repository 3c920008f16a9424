#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qsocket {

/// Invalid input geometry, parameters or data. Maps to CLI exit status 2.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure did not reach its tolerance. Maps to CLI exit status 3.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}

  [[nodiscard]] double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Fixed-step integrator drove a population outside [0, 1].
class IntegratorInstability : public ConvergenceError {
 public:
  using ConvergenceError::ConvergenceError;
};

/// Non-fatal diagnostic, e.g. a dispersive formula used outside |Δ| >> g.
struct Warning {
  std::string code;
  std::string message;
};

using Warnings = std::vector<Warning>;

}  // namespace qsocket
