#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace cachelease {

/// Bad or inconsistent run configuration (unknown key, wrong type, bad value).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Base class for solver failures.
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Iterative solve hit its iteration limit before reaching tolerance.
/// Carries the best iterate and the residual it reached.
struct ConvergenceError : SolverError {
  ConvergenceError(const std::string& msg, std::vector<double> best,
                   double res)
      : SolverError(msg), best_iterate(std::move(best)), residual(res) {}
  std::vector<double> best_iterate;
  double residual = 0.0;
};

/// A hard resource cap (e.g. branch-and-bound node limit) was exceeded.
struct ResourceLimitError : SolverError {
  using SolverError::SolverError;
};

/// The optimization problem is unbounded as posed.
struct UnboundedError : SolverError {
  using SolverError::SolverError;
};

/// Filesystem / parse failure on an input or output artifact.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace cachelease
