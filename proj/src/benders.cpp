#include "cachelease/benders.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <set>
#include <string>

#include "cachelease/errors.hpp"
#include "cachelease/rng.hpp"

namespace cachelease {

Cut build_cut(const SlaveResult& slave, const DemandMatrix& demand,
              const AssignmentLayout& layout, double rejection_tol) {
  if (slave.kkt_residual > rejection_tol)
    throw SolverError("cut rejected: slave KKT residual " +
                      std::to_string(slave.kkt_residual) + " above tolerance");
  Cut cut;
  cut.gamma_const = slave.savings_value;
  cut.coeff.assign(
      static_cast<std::size_t>(layout.n_stations) * layout.n_files, 0.0);
  for (int s = 0; s < layout.n_regions(); ++s) {
    const auto& cover = layout.cover[s];
    for (std::size_t j = 0; j < cover.size(); ++j) {
      const int m = cover[j];
      for (int f = 0; f < layout.n_files; ++f) {
        const std::size_t idx = layout.index(s, static_cast<int>(j), f);
        cut.gamma_const -= slave.lambda[idx] * slave.y.y[idx];
        cut.coeff[static_cast<std::size_t>(m) * layout.n_files + f] +=
            slave.lambda[idx] * demand.at(s, f);
      }
    }
  }
  for (double& c : cut.coeff) c = std::max(0.0, c);
  return cut;
}

namespace {

Placement initial_placement(const BendersConfig& config, int n_stations,
                            int n_files) {
  switch (config.initial_placement) {
    case InitialPlacement::kEmpty:
      return Placement::zeros(n_stations, n_files);
    case InitialPlacement::kFull:
      return Placement::full(n_stations, n_files);
    case InitialPlacement::kRandom: {
      Placement x = Placement::zeros(n_stations, n_files);
      Rng rng(config.random_seed);
      for (auto& bit : x.x) bit = rng.uniform() < 0.5 ? 1 : 0;
      return x;
    }
  }
  return Placement::zeros(n_stations, n_files);
}

}  // namespace

BendersResult benders_run(const Topology& topology, const DemandMatrix& demand,
                          const Catalog& catalog,
                          const BendersConfig& config) {
  if (config.rel_gap_tol <= 0.0)
    throw std::invalid_argument("rel_gap_tol must be > 0");
  if (config.max_iterations < 1)
    throw std::invalid_argument("max_iterations must be >= 1");
  if (config.model.linear() && config.model.per_hit_value <= 0.0)
    throw std::invalid_argument("per-hit value must be > 0");
  if (!config.model.linear() && config.model.smoothing_eps <= 0.0)
    throw std::invalid_argument("smoothing eps must be > 0");

  const auto& regions = topology.regions(config.policy);
  const int n_stations = static_cast<int>(topology.stations.size());
  const int n_files = catalog.size();
  const auto layout_ptr = std::make_shared<const AssignmentLayout>(
      AssignmentLayout::build(regions, n_stations, n_files));
  const AssignmentLayout& layout = *layout_ptr;

  BendersResult res;
  res.layout = layout_ptr;
  if (layout.size() == 0) {  // nothing to place or nobody to serve
    res.x_star = Placement::zeros(n_stations, n_files);
    res.z_star.assign(n_stations, 0);
    res.y_star = Assignment::zeros(layout);
    res.bound_trace.push_back({0, 0.0, 0.0});
    return res;
  }

  auto solve = [&](const Placement& x) {
    return solve_slave(config.policy, x, demand, config.model, layout,
                       config.slave_tol, config.slave_max_iters);
  };

  // The slave value at the full placement bounds every slave value, which
  // caps gamma before the first cut exists.
  const Placement full = Placement::full(n_stations, n_files);
  SlaveResult slave_full = solve(full);
  const double gamma_cap =
      slave_full.savings_value * (1.0 + 1e-9) + 1e-9;

  MasterProblem master =
      MasterProblem::from_instance(topology.stations, catalog, gamma_cap);
  master.node_limit = config.node_limit;
  res.gamma_cap = gamma_cap;
  res.max_slave_kkt = slave_full.kkt_residual;

  Placement x = initial_placement(config, n_stations, n_files);
  std::set<std::vector<std::uint8_t>> visited;
  double best_lower = -std::numeric_limits<double>::infinity();
  double upper = gamma_cap;
  res.status = BendersStatus::kIterLimit;

  for (int t = 0; t < config.max_iterations; ++t) {
    visited.insert(x.x);
    const SlaveResult slave =
        (x == full) ? slave_full : solve(x);
    res.max_slave_kkt = std::max(res.max_slave_kkt, slave.kkt_residual);
    const std::vector<int> z = x.lease_units(catalog);
    double lease_cost = 0.0;
    for (int m = 0; m < n_stations; ++m)
      lease_cost += topology.stations[m].price_q * z[m];
    const double lower = slave.savings_value - lease_cost;
    if (lower > best_lower) {
      best_lower = lower;
      res.x_star = x;
      res.z_star = z;
      res.y_star = slave.y;
      res.best_objective = lower;
      res.best_savings = slave.savings_value;
    }

    res.cuts.push_back(
        build_cut(slave, demand, layout, config.cut_rejection_tol));
    master.cuts = res.cuts;
    const MasterSolution msol = solve_master(master);
    res.master_nodes += msol.node_count;
    upper = std::min(upper, msol.objective);
    res.bound_trace.push_back({t, best_lower, upper});
    res.iterations = t + 1;

    if (upper - best_lower <=
        config.rel_gap_tol * std::max(1.0, std::abs(upper))) {
      res.status = BendersStatus::kOptimal;
      break;
    }
    if (visited.count(msol.x.x)) {
      // The cut built at this placement is tight, so revisiting it means the
      // master value equals an already recorded lower bound.
      res.status = BendersStatus::kOptimal;
      break;
    }
    x = msol.x;
  }
  return res;
}

}  // namespace cachelease
