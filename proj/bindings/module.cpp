#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "cachelease/config.hpp"
#include "cachelease/errors.hpp"
#include "cachelease/json_io.hpp"
#include "cachelease/rng.hpp"

namespace py = pybind11;
using nlohmann::json;
using namespace cachelease;

namespace {

json py_to_json(const py::handle& obj) {
  if (obj.is_none()) return nullptr;
  if (py::isinstance<py::bool_>(obj)) return obj.cast<bool>();
  if (py::isinstance<py::int_>(obj)) return obj.cast<long long>();
  if (py::isinstance<py::float_>(obj)) return obj.cast<double>();
  if (py::isinstance<py::str>(obj)) return obj.cast<std::string>();
  if (py::isinstance<py::list>(obj) || py::isinstance<py::tuple>(obj)) {
    json arr = json::array();
    for (const py::handle& item : obj) arr.push_back(py_to_json(item));
    return arr;
  }
  if (py::isinstance<py::dict>(obj)) {
    json out = json::object();
    for (const auto& item : obj.cast<py::dict>())
      out[item.first.cast<std::string>()] = py_to_json(item.second);
    return out;
  }
  throw py::type_error("unsupported config value type");
}

py::object json_to_py(const json& j) {
  switch (j.type()) {
    case json::value_t::null:
      return py::none();
    case json::value_t::boolean:
      return py::bool_(j.get<bool>());
    case json::value_t::number_integer:
      return py::int_(j.get<long long>());
    case json::value_t::number_unsigned:
      return py::int_(j.get<unsigned long long>());
    case json::value_t::number_float:
      return py::float_(j.get<double>());
    case json::value_t::string:
      return py::str(j.get<std::string>());
    case json::value_t::array: {
      py::list out;
      for (const json& item : j) out.append(json_to_py(item));
      return out;
    }
    case json::value_t::object: {
      py::dict out;
      for (const auto& [key, value] : j.items())
        out[py::str(key)] = json_to_py(value);
      return out;
    }
    default:
      return py::none();
  }
}

RunConfig config_from_py(const py::dict& config) {
  return parse_config(py_to_json(config));
}

Topology topology_from_config(const RunConfig& cfg) {
  TopologyParams params = cfg.topology;
  params.seed = seed_combine(cfg.master_seed, 0);
  params.price_q = cfg.price_per_unit;
  params.capacity_k =
      cfg.capacity_units >= 0 ? cfg.capacity_units : cfg.catalog_size;
  return build_topology(params);
}

py::dict solve_config(const py::dict& config) {
  const RunConfig cfg = config_from_py(config);
  const Topology topo = topology_from_config(cfg);
  const Catalog catalog = cfg.make_catalog();
  const DemandMatrix demand =
      demand_matrix(topo.regions(cfg.policy), cfg.user_density_per_km2,
                    catalog, cfg.zipf_exponent);
  const BendersResult result =
      benders_run(topo, demand, catalog, cfg.make_benders_config(topo, catalog));
  json out = benders_result_to_json(result);
  out["hit_ratio"] =
      demand.total > 0.0 ? hit_ratio(result.y_star, demand) : 0.0;
  double income = 0.0;
  for (std::size_t m = 0; m < topo.stations.size(); ++m)
    income += topo.stations[m].price_q * result.z_star[m];
  out["mno_income"] = income;
  out["stations"] = topo.stations.size();
  return json_to_py(out).cast<py::dict>();
}

py::dict generate_topology_py(const py::dict& config) {
  const RunConfig cfg = config_from_py(config);
  return json_to_py(topology_to_json(topology_from_config(cfg)))
      .cast<py::dict>();
}

py::list run_sweep_py(const py::dict& config) {
  const RunConfig cfg = config_from_py(config);
  if (!cfg.has_sweep)
    throw ConfigError("config has no 'sweep' section");
  const auto rows = run_sweep(cfg.sweep);
  py::list out;
  for (const RunMetrics& m : rows) {
    py::dict row;
    row["model"] = m.model;
    row["policy"] = policy_name(m.policy);
    row["radius_m"] = m.radius;
    row["zipf"] = m.zipf;
    row["price"] = m.price;
    row["seed_index"] = m.seed_index;
    row["status"] = m.status;
    row["hit_ratio"] = m.hit_ratio;
    row["mno_income"] = m.mno_income;
    row["leased_units_mean"] = m.leased_units_mean;
    row["load_min"] = m.load_min;
    row["load_max"] = m.load_max;
    row["objective"] = m.objective;
    row["iterations"] = m.iterations;
    row["rank_decile"] = m.rank_decile;
    row["error"] = m.error;
    out.append(row);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Edge-cache leasing and content placement optimizer";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);

  m.def("zipf_pmf", &zipf_pmf, py::arg("catalog_size"), py::arg("exponent"),
        "Zipf popularity mass over ranks 1..catalog_size");
  m.def("generate_topology", &generate_topology_py, py::arg("config"),
        "Build the random topology for a config dict; returns the topology "
        "document");
  m.def("solve", &solve_config, py::arg("config"),
        "Run the full decomposition once; returns objective, placement, "
        "hit ratio and bound trace");
  m.def("run_sweep", &run_sweep_py, py::arg("config"),
        "Run the parameter sweep of config['sweep']; returns one metrics "
        "row per cell");
}
