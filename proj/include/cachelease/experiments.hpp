#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "cachelease/benders.hpp"

namespace cachelease {

/// Savings-model recipe that can be instantiated per topology (throughput
/// weights depend on the generated regions).
struct ModelSpec {
  SavingsFamily family = SavingsFamily::kLinear;
  double per_hit_value = 1.0;
  double smoothing_eps = 1e-6;
  bool throughput_weights = false;
  bool size_weights = false;

  std::string name() const;
};

ModelSpec model_spec_from_name(const std::string& name, double c = 1.0,
                               double eps = 1e-6);

struct SweepSpec {
  std::vector<double> price_grid{0.1};
  std::vector<double> radius_grid{50.0};
  std::vector<double> zipf_grid{0.6};
  std::vector<Policy> policies{Policy::kClosest, Policy::kOpt};
  std::vector<ModelSpec> models{ModelSpec{}};
  int n_seeds = 20;
  std::uint64_t master_seed = 1;
  double station_intensity_per_km2 = 80.0;
  double user_density_per_km2 = 1200.0;
  Rect window{0.0, 0.0, 250.0, 250.0};
  int catalog_size = 50;
  int capacity_units = -1;  // -1 -> catalog size
  double grid_step_m = 0.0;  // 0 -> radius / 50
  double power_p = 1.0;
  RadioParams radio;
  double rel_gap_tol = 1e-6;
  int max_iterations = 100;
  double slave_tol = 1e-8;
  int slave_max_iters = 50000;
  long node_limit = 1000000;
  int jobs = 1;
};

struct RunMetrics {
  // cell identity
  std::string model;
  Policy policy = Policy::kClosest;
  double radius = 0.0;
  double zipf = 0.0;
  double price = 0.0;
  int seed_index = 0;
  std::uint64_t cell_seed = 0;
  // outcome
  int status = 0;  // 0 ok, 1 failed (see error)
  double hit_ratio = 0.0;
  double mno_income = 0.0;
  double leased_units_mean = 0.0;
  std::array<double, 10> rank_decile{};  // cached slots per popularity decile
  double load_min = 0.0;
  double load_max = 0.0;
  double objective = 0.0;
  int iterations = 0;
  std::string error;
};

RunMetrics compute_metrics(const BendersResult& result,
                           const Topology& topology,
                           const DemandMatrix& demand, const Catalog& catalog,
                           Policy policy);

/// One Benders run per grid cell; topologies are shared across prices and
/// policies of the same (seed, radius) cell, per-cell seeds are derived by
/// hashing so extending a grid never reshuffles existing cells. Rows come
/// back in canonical order independent of the worker count.
std::vector<RunMetrics> run_sweep(const SweepSpec& spec);

struct PolicyDiff {
  std::string model;
  double radius = 0.0;
  double zipf = 0.0;
  double price = 0.0;
  int n_seeds = 0;
  double mean = 0.0;   // mean of (hr_opt - hr_closest) / max(hr_closest, eps)
  double ci_low = 0.0;  // 95% normal interval
  double ci_high = 0.0;
};

/// Matches CLOSEST/OPT rows on (model, radius, zipf, price, seed); unmatched
/// keys are skipped and counted in *warnings when given.
std::vector<PolicyDiff> compare_policies(const std::vector<RunMetrics>& rows,
                                         int* warnings = nullptr);

std::string metrics_csv_header();
std::string metrics_to_csv_row(const RunMetrics& m);
void write_metrics_csv(const std::string& path,
                       const std::vector<RunMetrics>& rows);
std::vector<RunMetrics> read_metrics_csv(const std::string& path);

}  // namespace cachelease
