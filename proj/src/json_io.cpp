#include "cachelease/json_io.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "cachelease/errors.hpp"

namespace cachelease {

using nlohmann::json;

namespace {

json region_to_json(const Region& r) {
  return json{{"id", r.id},
              {"covering_set", r.covering_set},
              {"area_m2", r.area},
              {"centroid", {r.centroid.x, r.centroid.y}}};
}

Region region_from_json(const json& j) {
  Region r;
  r.id = j.at("id").get<int>();
  r.covering_set = j.at("covering_set").get<std::vector<int>>();
  r.area = j.at("area_m2").get<double>();
  r.centroid = {j.at("centroid").at(0).get<double>(),
                j.at("centroid").at(1).get<double>()};
  return r;
}

}  // namespace

json topology_to_json(const Topology& topology) {
  json stations = json::array();
  for (const Station& st : topology.stations)
    stations.push_back(json{{"id", st.id},
                            {"position", {st.position.x, st.position.y}},
                            {"radius_m", st.radius},
                            {"capacity_k", st.capacity_k},
                            {"price_q", st.price_q},
                            {"power_p", st.power_p}});
  json regions = json::object();
  for (Policy policy : {Policy::kClosest, Policy::kOpt}) {
    json list = json::array();
    for (const Region& r : topology.regions(policy))
      list.push_back(region_to_json(r));
    regions[policy_name(policy)] = std::move(list);
  }
  return json{{"window",
               {topology.window.xmin, topology.window.ymin,
                topology.window.xmax, topology.window.ymax}},
              {"grid_step_m", topology.grid_step},
              {"seed", topology.seed},
              {"stations", std::move(stations)},
              {"regions", std::move(regions)}};
}

Topology topology_from_json(const json& j) {
  Topology topo;
  const auto& w = j.at("window");
  topo.window = {w.at(0).get<double>(), w.at(1).get<double>(),
                 w.at(2).get<double>(), w.at(3).get<double>()};
  topo.grid_step = j.at("grid_step_m").get<double>();
  topo.seed = j.at("seed").get<std::uint64_t>();
  for (const json& s : j.at("stations")) {
    Station st;
    st.id = s.at("id").get<int>();
    st.position = {s.at("position").at(0).get<double>(),
                   s.at("position").at(1).get<double>()};
    st.radius = s.at("radius_m").get<double>();
    st.capacity_k = s.at("capacity_k").get<int>();
    st.price_q = s.at("price_q").get<double>();
    st.power_p = s.at("power_p").get<double>();
    topo.stations.push_back(st);
  }
  for (const json& r : j.at("regions").at("closest"))
    topo.regions_closest.push_back(region_from_json(r));
  for (const json& r : j.at("regions").at("opt"))
    topo.regions_opt.push_back(region_from_json(r));
  const int n = static_cast<int>(topo.stations.size());
  topo.region_index_closest = build_region_index(topo.regions_closest, n);
  topo.region_index_opt = build_region_index(topo.regions_opt, n);
  return topo;
}

void save_topology(const Topology& topology, const std::string& path) {
  save_json_file(topology_to_json(topology), path);
}

Topology load_topology(const std::string& path) {
  return topology_from_json(load_json_file(path));
}

json benders_result_to_json(const BendersResult& result) {
  json trace = json::array();
  for (const BoundRecord& rec : result.bound_trace)
    trace.push_back({{"iteration", rec.iteration},
                     {"lower", rec.lower},
                     {"upper", rec.upper}});
  json x = json::array();
  for (int m = 0; m < result.x_star.n_stations; ++m) {
    json files = json::array();
    for (int f = 0; f < result.x_star.n_files; ++f)
      if (result.x_star.at(m, f)) files.push_back(f);
    x.push_back(std::move(files));
  }
  return json{
      {"status",
       result.status == BendersStatus::kOptimal ? "optimal" : "iter_limit"},
      {"objective", result.best_objective},
      {"savings", result.best_savings},
      {"iterations", result.iterations},
      {"gamma_cap", result.gamma_cap},
      {"master_nodes", result.master_nodes},
      {"lease_units", result.z_star},
      {"cached_files_per_station", std::move(x)},
      {"bound_trace", std::move(trace)}};
}

std::string config_fingerprint(const json& config) {
  const std::string dump = config.dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : dump) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw IoError(path + ": " + e.what());
  }
  return j;
}

void save_json_file(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace cachelease
