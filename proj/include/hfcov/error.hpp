#pragma once

#include <stdexcept>
#include <string>

namespace hfcov {

/// Invalid configuration or argument.
struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Too few observations for the requested statistic.
struct InsufficientDataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Path simulation produced a non-finite value.
struct SimulationError : std::runtime_error {
  SimulationError(const std::string& what, std::size_t step)
      : std::runtime_error(what + " at step " + std::to_string(step)), step(step) {}
  std::size_t step;
};

/// Quadrature failed to reach the requested tolerance.
struct NumericalError : std::runtime_error {
  NumericalError(const std::string& what, double achieved)
      : std::runtime_error(what + " (achieved " + std::to_string(achieved) + ")"),
        achieved(achieved) {}
  double achieved;
};

inline void require(bool ok, const std::string& msg) {
  if (!ok) throw ParameterError(msg);
}

}  // namespace hfcov
