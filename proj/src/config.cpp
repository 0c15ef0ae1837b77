#include "cachelease/config.hpp"

#include <set>

#include <nlohmann/json.hpp>

#include "cachelease/errors.hpp"
#include "cachelease/json_io.hpp"

namespace cachelease {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::string& where,
                    const std::set<std::string>& known) {
  if (!j.is_object())
    throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, value] : j.items())
    if (!known.count(key))
      throw ConfigError("unknown key '" + key + "' in " + where);
}

double get_num(const json& j, const std::string& where, const char* key,
               double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number())
    throw ConfigError(where + "." + key + " must be a number");
  return j.at(key).get<double>();
}

long get_int(const json& j, const std::string& where, const char* key,
             long fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number_integer())
    throw ConfigError(where + "." + key + " must be an integer");
  return j.at(key).get<long>();
}

std::string get_str(const json& j, const std::string& where, const char* key,
                    const std::string& fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_string())
    throw ConfigError(where + "." + key + " must be a string");
  return j.at(key).get<std::string>();
}

std::vector<double> get_grid(const json& j, const std::string& where,
                             const char* key,
                             const std::vector<double>& fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_array())
    throw ConfigError(where + "." + key + " must be an array of numbers");
  std::vector<double> out;
  for (const json& v : j.at(key)) {
    if (!v.is_number())
      throw ConfigError(where + "." + key + " must contain numbers only");
    out.push_back(v.get<double>());
  }
  return out;
}

ModelSpec parse_model(const json& j, const std::string& where) {
  reject_unknown(j, where,
                 {"family", "per_hit_value", "smoothing_eps", "weights"});
  ModelSpec spec;
  const std::string family = get_str(j, where, "family", "linear");
  if (family == "linear")
    spec.family = SavingsFamily::kLinear;
  else if (family == "log")
    spec.family = SavingsFamily::kLog;
  else
    throw ConfigError(where + ".family must be 'linear' or 'log'");
  spec.per_hit_value = get_num(j, where, "per_hit_value", 1.0);
  spec.smoothing_eps = get_num(j, where, "smoothing_eps", 1e-6);
  if (spec.per_hit_value <= 0.0)
    throw ConfigError(where + ".per_hit_value must be > 0");
  if (spec.smoothing_eps <= 0.0)
    throw ConfigError(where + ".smoothing_eps must be > 0");
  const std::string weights = get_str(j, where, "weights", "none");
  if (weights == "none") {
  } else if (weights == "throughput") {
    spec.throughput_weights = true;
  } else if (weights == "size") {
    spec.size_weights = true;
  } else if (weights == "throughput+size") {
    spec.throughput_weights = spec.size_weights = true;
  } else {
    throw ConfigError(where +
                      ".weights must be none|throughput|size|throughput+size");
  }
  return spec;
}

Policy parse_policy(const std::string& name, const std::string& where) {
  try {
    return policy_from_name(name);
  } catch (const std::invalid_argument&) {
    throw ConfigError(where + " must be 'closest' or 'opt'");
  }
}

InitialPlacement parse_initial(const std::string& name,
                               const std::string& where) {
  if (name == "empty") return InitialPlacement::kEmpty;
  if (name == "full") return InitialPlacement::kFull;
  if (name == "random") return InitialPlacement::kRandom;
  throw ConfigError(where + " must be empty|full|random");
}

const char* initial_name(InitialPlacement p) {
  switch (p) {
    case InitialPlacement::kEmpty: return "empty";
    case InitialPlacement::kFull: return "full";
    case InitialPlacement::kRandom: return "random";
  }
  return "full";
}

json model_to_json(const ModelSpec& m) {
  std::string weights = "none";
  if (m.throughput_weights && m.size_weights)
    weights = "throughput+size";
  else if (m.throughput_weights)
    weights = "throughput";
  else if (m.size_weights)
    weights = "size";
  return json{{"family", m.family == SavingsFamily::kLinear ? "linear" : "log"},
              {"per_hit_value", m.per_hit_value},
              {"smoothing_eps", m.smoothing_eps},
              {"weights", weights}};
}

}  // namespace

RunConfig parse_config(const json& j) {
  reject_unknown(j, "config",
                 {"version", "master_seed", "output_dir", "topology", "radio",
                  "demand", "market", "model", "policy", "solver", "sweep"});
  RunConfig cfg;
  if (!j.contains("version"))
    throw ConfigError("config.version is required (current schema: 1)");
  cfg.version = static_cast<int>(get_int(j, "config", "version", 1));
  if (cfg.version != 1)
    throw ConfigError("unsupported config version " +
                      std::to_string(cfg.version));
  cfg.master_seed =
      static_cast<std::uint64_t>(get_int(j, "config", "master_seed", 1));
  cfg.output_dir = get_str(j, "config", "output_dir", "");

  if (j.contains("topology")) {
    const json& t = j.at("topology");
    reject_unknown(t, "topology",
                   {"station_intensity_per_km2", "window_m", "radius_m",
                    "grid_step_m", "power_w"});
    cfg.topology.station_intensity_per_km2 =
        get_num(t, "topology", "station_intensity_per_km2", 80.0);
    if (cfg.topology.station_intensity_per_km2 < 0.0)
      throw ConfigError("topology.station_intensity_per_km2 must be >= 0");
    if (t.contains("window_m")) {
      const json& w = t.at("window_m");
      if (!w.is_array() || w.size() != 2 || !w.at(0).is_number() ||
          !w.at(1).is_number())
        throw ConfigError("topology.window_m must be [width, height]");
      cfg.topology.window = {0.0, 0.0, w.at(0).get<double>(),
                             w.at(1).get<double>()};
      if (cfg.topology.window.degenerate())
        throw ConfigError("topology.window_m must be positive");
    }
    cfg.topology.radius_m = get_num(t, "topology", "radius_m", 50.0);
    if (cfg.topology.radius_m <= 0.0)
      throw ConfigError("topology.radius_m must be > 0");
    cfg.topology.grid_step_m = get_num(t, "topology", "grid_step_m", 0.0);
    if (cfg.topology.grid_step_m < 0.0)
      throw ConfigError("topology.grid_step_m must be >= 0");
    cfg.topology.power_p = get_num(t, "topology", "power_w", 1.0);
    if (cfg.topology.power_p < 0.0)
      throw ConfigError("topology.power_w must be >= 0");
  }

  if (j.contains("radio")) {
    const json& r = j.at("radio");
    reject_unknown(r, "radio",
                   {"noise_w", "bandwidth_hz", "pathloss_exponent",
                    "reference_gain"});
    cfg.radio.noise_sigma2 = get_num(r, "radio", "noise_w", 1e-9);
    cfg.radio.bandwidth_b = get_num(r, "radio", "bandwidth_hz", 1e6);
    cfg.radio.pathloss_exponent =
        get_num(r, "radio", "pathloss_exponent", 3.5);
    cfg.radio.reference_gain = get_num(r, "radio", "reference_gain", 1.0);
    if (cfg.radio.noise_sigma2 <= 0.0)
      throw ConfigError("radio.noise_w must be > 0");
    if (cfg.radio.bandwidth_b <= 0.0)
      throw ConfigError("radio.bandwidth_hz must be > 0");
    if (cfg.radio.pathloss_exponent < 2.0)
      throw ConfigError("radio.pathloss_exponent must be >= 2");
  }

  if (j.contains("demand")) {
    const json& d = j.at("demand");
    reject_unknown(d, "demand",
                   {"user_density_per_km2", "catalog_size", "zipf_exponent",
                    "unit_size_mb", "file_sizes_mb"});
    cfg.user_density_per_km2 =
        get_num(d, "demand", "user_density_per_km2", 1200.0);
    if (cfg.user_density_per_km2 < 0.0)
      throw ConfigError("demand.user_density_per_km2 must be >= 0");
    cfg.catalog_size =
        static_cast<int>(get_int(d, "demand", "catalog_size", 50));
    if (cfg.catalog_size < 1)
      throw ConfigError("demand.catalog_size must be >= 1");
    cfg.zipf_exponent = get_num(d, "demand", "zipf_exponent", 0.6);
    if (cfg.zipf_exponent < 0.0)
      throw ConfigError("demand.zipf_exponent must be >= 0");
    cfg.unit_size_mb = get_num(d, "demand", "unit_size_mb", 1.0);
    if (cfg.unit_size_mb <= 0.0)
      throw ConfigError("demand.unit_size_mb must be > 0");
    if (d.contains("file_sizes_mb") && !d.at("file_sizes_mb").is_null()) {
      cfg.file_sizes_mb = get_grid(d, "demand", "file_sizes_mb", {});
      if (static_cast<int>(cfg.file_sizes_mb.size()) != cfg.catalog_size)
        throw ConfigError("demand.file_sizes_mb must list catalog_size sizes");
      for (double b : cfg.file_sizes_mb)
        if (b <= 0.0) throw ConfigError("file sizes must be > 0");
    }
  }

  if (j.contains("market")) {
    const json& m = j.at("market");
    reject_unknown(m, "market", {"price_per_unit", "capacity_units"});
    cfg.price_per_unit = get_num(m, "market", "price_per_unit", 0.1);
    if (cfg.price_per_unit < 0.0)
      throw ConfigError("market.price_per_unit must be >= 0");
    cfg.capacity_units =
        static_cast<int>(get_int(m, "market", "capacity_units", -1));
  }

  if (j.contains("model")) cfg.model = parse_model(j.at("model"), "model");
  cfg.policy = parse_policy(get_str(j, "config", "policy", "opt"), "policy");

  if (j.contains("solver")) {
    const json& s = j.at("solver");
    reject_unknown(s, "solver",
                   {"rel_gap_tol", "max_iterations", "initial_placement",
                    "slave_tol", "slave_max_iters", "node_limit"});
    cfg.rel_gap_tol = get_num(s, "solver", "rel_gap_tol", 1e-6);
    if (cfg.rel_gap_tol <= 0.0)
      throw ConfigError("solver.rel_gap_tol must be > 0");
    cfg.max_iterations =
        static_cast<int>(get_int(s, "solver", "max_iterations", 100));
    if (cfg.max_iterations < 1)
      throw ConfigError("solver.max_iterations must be >= 1");
    cfg.initial_placement = parse_initial(
        get_str(s, "solver", "initial_placement", "full"),
        "solver.initial_placement");
    cfg.slave_tol = get_num(s, "solver", "slave_tol", 1e-8);
    cfg.slave_max_iters =
        static_cast<int>(get_int(s, "solver", "slave_max_iters", 50000));
    cfg.node_limit = get_int(s, "solver", "node_limit", 1000000);
  }

  cfg.sweep.price_grid = {cfg.price_per_unit};
  cfg.sweep.radius_grid = {cfg.topology.radius_m};
  cfg.sweep.zipf_grid = {cfg.zipf_exponent};
  cfg.sweep.policies = {cfg.policy};
  cfg.sweep.models = {cfg.model};
  cfg.sweep.master_seed = cfg.master_seed;
  cfg.sweep.station_intensity_per_km2 = cfg.topology.station_intensity_per_km2;
  cfg.sweep.user_density_per_km2 = cfg.user_density_per_km2;
  cfg.sweep.window = cfg.topology.window;
  cfg.sweep.catalog_size = cfg.catalog_size;
  cfg.sweep.capacity_units = cfg.capacity_units;
  cfg.sweep.grid_step_m = cfg.topology.grid_step_m;
  cfg.sweep.power_p = cfg.topology.power_p;
  cfg.sweep.radio = cfg.radio;
  cfg.sweep.rel_gap_tol = cfg.rel_gap_tol;
  cfg.sweep.max_iterations = cfg.max_iterations;
  cfg.sweep.slave_tol = cfg.slave_tol;
  cfg.sweep.slave_max_iters = cfg.slave_max_iters;
  cfg.sweep.node_limit = cfg.node_limit;

  if (j.contains("sweep")) {
    cfg.has_sweep = true;
    const json& s = j.at("sweep");
    reject_unknown(s, "sweep",
                   {"price_grid", "radius_grid", "zipf_grid", "policies",
                    "models", "n_seeds", "jobs"});
    cfg.sweep.price_grid =
        get_grid(s, "sweep", "price_grid", cfg.sweep.price_grid);
    cfg.sweep.radius_grid =
        get_grid(s, "sweep", "radius_grid", cfg.sweep.radius_grid);
    cfg.sweep.zipf_grid =
        get_grid(s, "sweep", "zipf_grid", cfg.sweep.zipf_grid);
    if (s.contains("policies")) {
      if (!s.at("policies").is_array())
        throw ConfigError("sweep.policies must be an array");
      cfg.sweep.policies.clear();
      for (const json& p : s.at("policies"))
        cfg.sweep.policies.push_back(
            parse_policy(p.get<std::string>(), "sweep.policies"));
    }
    if (s.contains("models")) {
      if (!s.at("models").is_array())
        throw ConfigError("sweep.models must be an array");
      cfg.sweep.models.clear();
      for (const json& m : s.at("models"))
        cfg.sweep.models.push_back(parse_model(m, "sweep.models"));
    }
    cfg.sweep.n_seeds = static_cast<int>(get_int(s, "sweep", "n_seeds", 20));
    if (cfg.sweep.n_seeds < 1) throw ConfigError("sweep.n_seeds must be >= 1");
    cfg.sweep.jobs = static_cast<int>(get_int(s, "sweep", "jobs", 1));
    if (cfg.sweep.jobs < 1) throw ConfigError("sweep.jobs must be >= 1");
    for (double p : cfg.sweep.price_grid)
      if (p < 0.0) throw ConfigError("sweep.price_grid must be >= 0");
    for (double r : cfg.sweep.radius_grid)
      if (r <= 0.0) throw ConfigError("sweep.radius_grid must be > 0");
    if (cfg.sweep.price_grid.empty() || cfg.sweep.radius_grid.empty() ||
        cfg.sweep.zipf_grid.empty() || cfg.sweep.policies.empty() ||
        cfg.sweep.models.empty())
      throw ConfigError("sweep grids must be non-empty");
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  return parse_config(load_json_file(path));
}

Catalog RunConfig::make_catalog() const {
  Catalog cat = uniform_catalog(catalog_size, 1.0, unit_size_mb);
  for (std::size_t f = 0; f < file_sizes_mb.size(); ++f)
    cat.files[f].size_b = file_sizes_mb[f];
  return cat;
}

BendersConfig RunConfig::make_benders_config(const Topology& topo,
                                             const Catalog& cat) const {
  BendersConfig bc;
  bc.policy = policy;
  bc.rel_gap_tol = rel_gap_tol;
  bc.max_iterations = max_iterations;
  bc.initial_placement = initial_placement;
  bc.random_seed = master_seed;
  bc.slave_tol = slave_tol;
  bc.slave_max_iters = slave_max_iters;
  bc.node_limit = node_limit;
  SavingsModel m;
  m.family = model.family;
  m.per_hit_value = model.per_hit_value;
  m.smoothing_eps = model.smoothing_eps;
  if (model.throughput_weights)
    m.station_weights = std::make_shared<WeightTable>(
        throughput_weights(topo.regions(policy), topo.stations, radio));
  if (model.size_weights)
    m.file_weights =
        std::make_shared<std::vector<double>>(size_priority_weights(cat));
  bc.model = m;
  return bc;
}

json config_to_json(const RunConfig& cfg) {
  json j;
  j["version"] = cfg.version;
  j["master_seed"] = cfg.master_seed;
  if (!cfg.output_dir.empty()) j["output_dir"] = cfg.output_dir;
  j["topology"] = {
      {"station_intensity_per_km2", cfg.topology.station_intensity_per_km2},
      {"window_m", {cfg.topology.window.width(), cfg.topology.window.height()}},
      {"radius_m", cfg.topology.radius_m},
      {"grid_step_m", cfg.topology.grid_step_m},
      {"power_w", cfg.topology.power_p}};
  j["radio"] = {{"noise_w", cfg.radio.noise_sigma2},
                {"bandwidth_hz", cfg.radio.bandwidth_b},
                {"pathloss_exponent", cfg.radio.pathloss_exponent},
                {"reference_gain", cfg.radio.reference_gain}};
  j["demand"] = {{"user_density_per_km2", cfg.user_density_per_km2},
                 {"catalog_size", cfg.catalog_size},
                 {"zipf_exponent", cfg.zipf_exponent},
                 {"unit_size_mb", cfg.unit_size_mb}};
  if (!cfg.file_sizes_mb.empty())
    j["demand"]["file_sizes_mb"] = cfg.file_sizes_mb;
  j["market"] = {{"price_per_unit", cfg.price_per_unit},
                 {"capacity_units", cfg.capacity_units}};
  j["model"] = model_to_json(cfg.model);
  j["policy"] = policy_name(cfg.policy);
  j["solver"] = {{"rel_gap_tol", cfg.rel_gap_tol},
                 {"max_iterations", cfg.max_iterations},
                 {"initial_placement", initial_name(cfg.initial_placement)},
                 {"slave_tol", cfg.slave_tol},
                 {"slave_max_iters", cfg.slave_max_iters},
                 {"node_limit", cfg.node_limit}};
  if (cfg.has_sweep) {
    json models = json::array();
    for (const ModelSpec& m : cfg.sweep.models) models.push_back(model_to_json(m));
    json policies = json::array();
    for (Policy p : cfg.sweep.policies) policies.push_back(policy_name(p));
    j["sweep"] = {{"price_grid", cfg.sweep.price_grid},
                  {"radius_grid", cfg.sweep.radius_grid},
                  {"zipf_grid", cfg.sweep.zipf_grid},
                  {"policies", policies},
                  {"models", models},
                  {"n_seeds", cfg.sweep.n_seeds},
                  {"jobs", cfg.sweep.jobs}};
  }
  return j;
}

}  // namespace cachelease
