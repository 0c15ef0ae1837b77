#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "cachelease/association.hpp"

namespace cachelease {

/// One Benders cut: gamma <= gamma_const + coeff . x.
struct Cut {
  double gamma_const = 0.0;
  std::vector<double> coeff;  // (station, file) row-major, all >= 0
};

/// The surrogate master: maximize gamma - sum_m q_m z_m over placements and
/// leases subject to the accumulated cuts, memory bounds and gamma in
/// [0, gamma_cap].
struct MasterProblem {
  int n_stations = 0;
  int n_files = 0;
  std::vector<Cut> cuts;
  std::vector<double> price_q;   // per station
  std::vector<int> capacity_k;   // per station
  std::vector<double> size_b;    // per file
  double unit_size = 1.0;
  double gamma_cap = std::numeric_limits<double>::infinity();
  long node_limit = 1000000;

  static MasterProblem from_instance(const std::vector<Station>& stations,
                                     const Catalog& catalog, double gamma_cap);
};

enum class LpStatus { kOptimal, kInfeasible, kPerturbed };

struct LpSolution {
  LpStatus status = LpStatus::kOptimal;
  double bound = 0.0;            // optimal relaxation value
  double gamma = 0.0;
  std::vector<double> x;         // fractional placement
  std::vector<double> z;         // implied continuous lease
};

struct MasterSolution {
  Placement x;
  std::vector<int> z;
  double gamma = 0.0;
  double objective = 0.0;
  double lp_bound = 0.0;  // root relaxation
  long node_count = 0;
};

/// LP relaxation of the master with x in [0,1] except for the given fixings
/// (-1 free, 0, 1), z continuous in [0, k]. Solved by a bounded-variable
/// primal simplex with a Bland's-rule fallback against cycling.
LpSolution solve_lp_relaxation(const MasterProblem& problem,
                               const std::vector<std::int8_t>& fixings);

/// Exact solve by best-first branch-and-bound on the placement binaries;
/// leases are eliminated by exact ceiling at integral leaves. Throws
/// UnboundedError when no cut bounds gamma and ResourceLimitError past
/// node_limit.
MasterSolution solve_master(const MasterProblem& problem);

/// gamma value implied by a placement: min over cuts, capped by gamma_cap.
double master_gamma_at(const MasterProblem& problem,
                       const std::vector<double>& x);

/// Writes the current master instance in LP text format (CPLEX-style) for
/// cross-checking against external solvers.
std::string master_to_lp_format(const MasterProblem& problem);

}  // namespace cachelease
