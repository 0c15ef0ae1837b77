#pragma once

#include <cstdint>
#include <vector>

#include "cachelease/mip.hpp"

namespace cachelease {

enum class InitialPlacement { kEmpty, kFull, kRandom };

struct BendersConfig {
  Policy policy = Policy::kOpt;
  SavingsModel model;
  double rel_gap_tol = 1e-6;
  int max_iterations = 100;
  InitialPlacement initial_placement = InitialPlacement::kFull;
  std::uint64_t random_seed = 0;
  double slave_tol = 1e-8;
  int slave_max_iters = 50000;
  long node_limit = 1000000;
  double cut_rejection_tol = 1e-4;
};

struct BoundRecord {
  int iteration = 0;
  double lower = 0.0;
  double upper = 0.0;
};

enum class BendersStatus { kOptimal, kIterLimit };

struct BendersResult {
  Placement x_star;
  std::vector<int> z_star;
  std::shared_ptr<const AssignmentLayout> layout;  // keeps y_star valid
  Assignment y_star;
  double best_objective = 0.0;
  double best_savings = 0.0;
  std::vector<BoundRecord> bound_trace;
  int iterations = 0;
  BendersStatus status = BendersStatus::kOptimal;
  std::vector<Cut> cuts;   // every cut generated, in order
  double gamma_cap = 0.0;
  long master_nodes = 0;   // branch-and-bound nodes over all master solves
  double max_slave_kkt = 0.0;  // worst slave KKT residual seen
};

/// Builds the Benders cut from one slave solve: gamma_const is the slave
/// value minus the multiplier mass on the active couplings, the coefficient
/// of x_{m,f} collects lambda-weighted demand over the regions m serves.
/// Throws SolverError when the slave's KKT residual exceeds rejection_tol.
Cut build_cut(const SlaveResult& slave, const DemandMatrix& demand,
              const AssignmentLayout& layout, double rejection_tol = 1e-4);

/// Outer loop: alternates slave solves (lower bounds, cuts) with surrogate
/// master solves (upper bounds, next placement) until the relative gap
/// closes or a placement repeats, which with exact duals certifies
/// optimality. The model's weight tables must be aligned with the regions of
/// config.policy.
BendersResult benders_run(const Topology& topology, const DemandMatrix& demand,
                          const Catalog& catalog, const BendersConfig& config);

}  // namespace cachelease
