#pragma once

#include <cstdint>
#include <vector>

#include "cachelease/savings.hpp"

namespace cachelease {

/// Binary content placement x_{m,f}.
struct Placement {
  int n_stations = 0;
  int n_files = 0;
  std::vector<std::uint8_t> x;

  static Placement zeros(int n_stations, int n_files) {
    return {n_stations, n_files,
            std::vector<std::uint8_t>(
                static_cast<std::size_t>(n_stations) * n_files, 0)};
  }
  static Placement full(int n_stations, int n_files) {
    return {n_stations, n_files,
            std::vector<std::uint8_t>(
                static_cast<std::size_t>(n_stations) * n_files, 1)};
  }
  bool at(int m, int f) const {
    return x[static_cast<std::size_t>(m) * n_files + f] != 0;
  }
  void set(int m, int f, bool v) {
    x[static_cast<std::size_t>(m) * n_files + f] = v ? 1 : 0;
  }
  bool operator==(const Placement& o) const = default;

  /// z_m = ceil(sum_f b_f x_{m,f} / b_MU).
  std::vector<int> lease_units(const Catalog& catalog) const;
};

/// Optimal association for a fixed placement, with the multipliers of the
/// coupling constraint y <= N x needed for Benders cuts.
struct SlaveResult {
  Assignment y;
  std::vector<double> lambda;  // per valid triple, aligned with y
  std::vector<double> mu;      // per (region, file), row-major
  double savings_value = 0.0;
  double kkt_residual = 0.0;
  int iterations = 0;
};

/// CLOSEST policy: covers are singletons, so y = N x on the covering station
/// and lambda is the savings gradient at that point. Works for any model.
SlaveResult solve_closest(const Placement& x, const DemandMatrix& demand,
                          const SavingsModel& model,
                          const AssignmentLayout& layout);

/// OPT policy, (weighted) linear model: each (region, file) population goes
/// entirely to a covering station caching the file with maximal per-hit
/// value, ties to the lowest station id. Duals come from the closed form
/// mu_{s,f} = max caching value, lambda = (value - mu)^+.
SlaveResult solve_opt_linear(const Placement& x, const DemandMatrix& demand,
                             const SavingsModel& model,
                             const AssignmentLayout& layout);

/// OPT policy, strictly concave model: projected gradient ascent with
/// Barzilai-Borwein steps and Armijo backtracking; the feasible set splits
/// per (region, file) into a box-capped simplex with an exact projection.
/// Throws ConvergenceError if the projected-gradient norm does not reach tol
/// within max_iters.
SlaveResult solve_opt_concave(const Placement& x, const DemandMatrix& demand,
                              const SavingsModel& model,
                              const AssignmentLayout& layout,
                              double tol = 1e-8, int max_iters = 50000);

SlaveResult solve_slave(Policy policy, const Placement& x,
                        const DemandMatrix& demand, const SavingsModel& model,
                        const AssignmentLayout& layout, double tol = 1e-8,
                        int max_iters = 50000);

/// Max violation over primal feasibility, dual non-negativity, stationarity
/// on strictly interior coordinates and complementary-slackness products.
double kkt_residual(const Placement& x, const Assignment& y,
                    const std::vector<double>& lambda,
                    const std::vector<double>& mu, const SavingsModel& model,
                    const DemandMatrix& demand);

/// Projection of v onto {0 <= y_i <= cap_i, sum y_i <= budget}; exact via a
/// breakpoint walk on the clamped-shift curve.
void project_capped_simplex(std::vector<double>& v,
                            const std::vector<double>& cap, double budget);

}  // namespace cachelease
