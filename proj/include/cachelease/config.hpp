#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "cachelease/experiments.hpp"

namespace cachelease {

/// One hierarchical document covering every module parameter. Parsed against
/// a versioned schema (docs/config.schema.json); unknown keys are rejected.
struct RunConfig {
  int version = 1;
  std::uint64_t master_seed = 1;
  std::string output_dir;

  TopologyParams topology;
  RadioParams radio;

  double user_density_per_km2 = 1200.0;
  int catalog_size = 50;
  double zipf_exponent = 0.6;
  double unit_size_mb = 1.0;
  std::vector<double> file_sizes_mb;  // empty -> unit sizes

  double price_per_unit = 0.1;
  int capacity_units = -1;  // -1 -> catalog size

  ModelSpec model;
  Policy policy = Policy::kOpt;

  double rel_gap_tol = 1e-6;
  int max_iterations = 100;
  InitialPlacement initial_placement = InitialPlacement::kFull;
  double slave_tol = 1e-8;
  int slave_max_iters = 50000;
  long node_limit = 1000000;

  SweepSpec sweep;  // populated when a "sweep" section is present
  bool has_sweep = false;

  Catalog make_catalog() const;
  BendersConfig make_benders_config(const Topology& topology,
                                    const Catalog& catalog) const;
};

RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

/// The config normalized back to JSON (defaults applied), the form that gets
/// fingerprinted into artifacts.
nlohmann::json config_to_json(const RunConfig& config);

}  // namespace cachelease
