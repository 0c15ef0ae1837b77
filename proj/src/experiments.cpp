#include "cachelease/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <thread>
#include <tuple>

#include "cachelease/errors.hpp"
#include "cachelease/rng.hpp"

namespace cachelease {

std::string ModelSpec::name() const {
  std::string n = family == SavingsFamily::kLinear ? "linear" : "log";
  if (throughput_weights) n += "+tp";
  if (size_weights) n += "+size";
  return n;
}

ModelSpec model_spec_from_name(const std::string& name, double c, double eps) {
  ModelSpec spec;
  spec.per_hit_value = c;
  spec.smoothing_eps = eps;
  std::string base = name;
  auto strip = [&](const std::string& suffix, bool& flag) {
    const auto pos = base.find(suffix);
    if (pos != std::string::npos) {
      flag = true;
      base.erase(pos, suffix.size());
    }
  };
  strip("+tp", spec.throughput_weights);
  strip("+size", spec.size_weights);
  if (base == "linear")
    spec.family = SavingsFamily::kLinear;
  else if (base == "log")
    spec.family = SavingsFamily::kLog;
  else
    throw std::invalid_argument("unknown savings model: " + name);
  return spec;
}

namespace {

SavingsModel instantiate_model(const ModelSpec& spec, const Topology& topology,
                               Policy policy, const Catalog& catalog,
                               const RadioParams& radio) {
  SavingsModel model;
  model.family = spec.family;
  model.per_hit_value = spec.per_hit_value;
  model.smoothing_eps = spec.smoothing_eps;
  if (spec.throughput_weights)
    model.station_weights = std::make_shared<WeightTable>(
        throughput_weights(topology.regions(policy), topology.stations,
                           radio));
  if (spec.size_weights)
    model.file_weights =
        std::make_shared<std::vector<double>>(size_priority_weights(catalog));
  return model;
}

double fmt_key(double v) { return v; }

}  // namespace

RunMetrics compute_metrics(const BendersResult& result,
                           const Topology& topology,
                           const DemandMatrix& demand, const Catalog& catalog,
                           Policy policy) {
  RunMetrics m;
  m.objective = result.best_objective;
  m.iterations = result.iterations;

  const int n_files = catalog.size();
  const int n_stations = static_cast<int>(topology.stations.size());

  double income = 0.0;
  double units = 0.0;
  for (int st = 0; st < n_stations; ++st) {
    income += topology.stations[st].price_q * result.z_star[st];
    units += result.z_star[st];
  }
  m.mno_income = income;
  m.leased_units_mean = n_stations > 0 ? units / n_stations : 0.0;

  for (int st = 0; st < n_stations; ++st)
    for (int f = 0; f < n_files; ++f)
      if (result.x_star.at(st, f)) m.rank_decile[f * 10 / n_files] += 1.0;

  m.hit_ratio = demand.total > 0.0 ? hit_ratio(result.y_star, demand) : 0.0;

  // Station load: unweighted served volume over the population it covers.
  SavingsModel unit_model;  // linear, c = 1, unit weights
  const std::vector<double> volumes = station_volumes(result.y_star, unit_model);
  const auto& index = topology.region_index(policy);
  bool any = false;
  for (int st = 0; st < n_stations; ++st) {
    double pop = 0.0;
    for (int s : index[st]) pop += demand.region_totals[s];
    if (pop <= 0.0) continue;
    const double load = volumes[st] / pop;
    if (!any) {
      m.load_min = m.load_max = load;
      any = true;
    } else {
      m.load_min = std::min(m.load_min, load);
      m.load_max = std::max(m.load_max, load);
    }
  }
  return m;
}

std::vector<RunMetrics> run_sweep(const SweepSpec& spec) {
  if (spec.n_seeds < 1) throw std::invalid_argument("n_seeds must be >= 1");
  if (spec.price_grid.empty() || spec.radius_grid.empty() ||
      spec.zipf_grid.empty() || spec.policies.empty() || spec.models.empty())
    throw std::invalid_argument("sweep grids must be non-empty");

  struct Cell {
    int model, policy, radius, zipf, price, seed;
  };
  std::vector<Cell> cells;
  for (int mo = 0; mo < static_cast<int>(spec.models.size()); ++mo)
    for (int po = 0; po < static_cast<int>(spec.policies.size()); ++po)
      for (int ra = 0; ra < static_cast<int>(spec.radius_grid.size()); ++ra)
        for (int zi = 0; zi < static_cast<int>(spec.zipf_grid.size()); ++zi)
          for (int pr = 0; pr < static_cast<int>(spec.price_grid.size()); ++pr)
            for (int se = 0; se < spec.n_seeds; ++se)
              cells.push_back({mo, po, ra, zi, pr, se});

  // Topologies are pure functions of (seed, radius); build each once.
  auto topo_seed = [&](int seed_index) {
    return seed_combine(spec.master_seed, static_cast<std::uint64_t>(seed_index));
  };
  std::map<std::pair<int, int>, std::shared_ptr<const Topology>> topo_cache;
  for (int ra = 0; ra < static_cast<int>(spec.radius_grid.size()); ++ra)
    for (int se = 0; se < spec.n_seeds; ++se) {
      TopologyParams params;
      params.station_intensity_per_km2 = spec.station_intensity_per_km2;
      params.window = spec.window;
      params.radius_m = spec.radius_grid[ra];
      params.grid_step_m = spec.grid_step_m;
      params.power_p = spec.power_p;
      params.seed = topo_seed(se);
      topo_cache[{se, ra}] =
          std::make_shared<const Topology>(build_topology(params));
    }

  const Catalog catalog = uniform_catalog(spec.catalog_size);
  const int capacity =
      spec.capacity_units >= 0 ? spec.capacity_units : spec.catalog_size;

  // Demand depends on (seed, radius, zipf, policy) through the region list.
  struct DemandKey {
    int se, ra, zi, po;
    bool operator<(const DemandKey& o) const {
      return std::tie(se, ra, zi, po) < std::tie(o.se, o.ra, o.zi, o.po);
    }
  };
  std::map<DemandKey, std::shared_ptr<const DemandMatrix>> demand_cache;
  for (int po = 0; po < static_cast<int>(spec.policies.size()); ++po)
    for (int ra = 0; ra < static_cast<int>(spec.radius_grid.size()); ++ra)
      for (int zi = 0; zi < static_cast<int>(spec.zipf_grid.size()); ++zi)
        for (int se = 0; se < spec.n_seeds; ++se) {
          const Topology& topo = *topo_cache[{se, ra}];
          demand_cache[{se, ra, zi, po}] =
              std::make_shared<const DemandMatrix>(demand_matrix(
                  topo.regions(spec.policies[po]), spec.user_density_per_km2,
                  catalog, spec.zipf_grid[zi]));
        }

  std::vector<RunMetrics> rows(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      const Cell& cell = cells[i];
      RunMetrics& row = rows[i];
      const ModelSpec& mspec = spec.models[cell.model];
      const Policy policy = spec.policies[cell.policy];
      row.model = mspec.name();
      row.policy = policy;
      row.radius = spec.radius_grid[cell.radius];
      row.zipf = spec.zipf_grid[cell.zipf];
      row.price = spec.price_grid[cell.price];
      row.seed_index = cell.seed;
      row.cell_seed = topo_seed(cell.seed);
      try {
        Topology topo = *topo_cache.at({cell.seed, cell.radius});
        for (Station& st : topo.stations) {
          st.price_q = row.price;
          st.capacity_k = capacity;
        }
        const DemandMatrix& demand = *demand_cache.at(
            {cell.seed, cell.radius, cell.zipf, cell.policy});
        BendersConfig config;
        config.policy = policy;
        config.model =
            instantiate_model(mspec, topo, policy, catalog, spec.radio);
        config.rel_gap_tol = spec.rel_gap_tol;
        config.max_iterations = spec.max_iterations;
        config.slave_tol = spec.slave_tol;
        config.slave_max_iters = spec.slave_max_iters;
        config.node_limit = spec.node_limit;
        const BendersResult result =
            benders_run(topo, demand, catalog, config);
        row = compute_metrics(result, topo, demand, catalog, policy);
        row.model = mspec.name();
        row.policy = policy;
        row.radius = spec.radius_grid[cell.radius];
        row.zipf = spec.zipf_grid[cell.zipf];
        row.price = spec.price_grid[cell.price];
        row.seed_index = cell.seed;
        row.cell_seed = topo_seed(cell.seed);
        row.status = 0;
      } catch (const std::exception& e) {
        row.status = 1;
        row.error = e.what();
      }
    }
  };

  const int jobs = std::max(1, spec.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return rows;
}

std::vector<PolicyDiff> compare_policies(const std::vector<RunMetrics>& rows,
                                         int* warnings) {
  struct Key {
    std::string model;
    double radius, zipf, price;
    bool operator<(const Key& o) const {
      return std::tie(model, radius, zipf, price) <
             std::tie(o.model, o.radius, o.zipf, o.price);
    }
  };
  std::map<Key, std::map<int, std::pair<const RunMetrics*, const RunMetrics*>>>
      groups;
  for (const RunMetrics& row : rows) {
    if (row.status != 0) continue;
    auto& slot = groups[{row.model, fmt_key(row.radius), fmt_key(row.zipf),
                         fmt_key(row.price)}][row.seed_index];
    (row.policy == Policy::kClosest ? slot.first : slot.second) = &row;
  }
  int skipped = 0;
  std::vector<PolicyDiff> diffs;
  for (const auto& [key, seeds] : groups) {
    std::vector<double> d;
    for (const auto& [seed, pair] : seeds) {
      if (!pair.first || !pair.second) {
        ++skipped;
        continue;
      }
      d.push_back((pair.second->hit_ratio - pair.first->hit_ratio) /
                  std::max(pair.first->hit_ratio, 1e-9));
    }
    if (d.empty()) continue;
    PolicyDiff diff;
    diff.model = key.model;
    diff.radius = key.radius;
    diff.zipf = key.zipf;
    diff.price = key.price;
    diff.n_seeds = static_cast<int>(d.size());
    double mean = 0.0;
    for (double v : d) mean += v;
    mean /= d.size();
    double var = 0.0;
    for (double v : d) var += (v - mean) * (v - mean);
    var = d.size() > 1 ? var / (d.size() - 1) : 0.0;
    const double half = 1.959964 * std::sqrt(var / d.size());
    diff.mean = mean;
    diff.ci_low = mean - half;
    diff.ci_high = mean + half;
    diffs.push_back(diff);
  }
  if (warnings) *warnings = skipped;
  return diffs;
}

std::string metrics_csv_header() {
  std::string h =
      "model,policy,radius_m,zipf,price,seed_index,cell_seed,status,"
      "hit_ratio,mno_income,leased_units_mean,load_min,load_max,objective,"
      "iterations";
  for (int d = 0; d < 10; ++d) h += ",decile_" + std::to_string(d);
  h += ",error";
  return h;
}

namespace {
std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}
}  // namespace

std::string metrics_to_csv_row(const RunMetrics& m) {
  std::ostringstream out;
  out << m.model << ',' << policy_name(m.policy) << ',' << fmt(m.radius) << ','
      << fmt(m.zipf) << ',' << fmt(m.price) << ',' << m.seed_index << ','
      << m.cell_seed << ',' << m.status << ',' << fmt(m.hit_ratio) << ','
      << fmt(m.mno_income) << ',' << fmt(m.leased_units_mean) << ','
      << fmt(m.load_min) << ',' << fmt(m.load_max) << ',' << fmt(m.objective)
      << ',' << m.iterations;
  for (double d : m.rank_decile) out << ',' << fmt(d);
  out << ',' << m.error;
  return out.str();
}

void write_metrics_csv(const std::string& path,
                       const std::vector<RunMetrics>& rows) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << metrics_csv_header() << '\n';
  for (const RunMetrics& m : rows) out << metrics_to_csv_row(m) << '\n';
}

std::vector<RunMetrics> read_metrics_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty CSV: " + path);
  if (line != metrics_csv_header())
    throw IoError("unexpected CSV header in " + path);
  std::vector<RunMetrics> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      fields.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (fields.size() != 26)
      throw IoError(path + ":" + std::to_string(line_no) +
                    ": expected 26 columns, got " +
                    std::to_string(fields.size()));
    RunMetrics m;
    try {
      int c = 0;
      m.model = fields[c++];
      m.policy = policy_from_name(fields[c++]);
      m.radius = std::stod(fields[c++]);
      m.zipf = std::stod(fields[c++]);
      m.price = std::stod(fields[c++]);
      m.seed_index = std::stoi(fields[c++]);
      m.cell_seed = std::stoull(fields[c++]);
      m.status = std::stoi(fields[c++]);
      m.hit_ratio = std::stod(fields[c++]);
      m.mno_income = std::stod(fields[c++]);
      m.leased_units_mean = std::stod(fields[c++]);
      m.load_min = std::stod(fields[c++]);
      m.load_max = std::stod(fields[c++]);
      m.objective = std::stod(fields[c++]);
      m.iterations = std::stoi(fields[c++]);
      for (int d = 0; d < 10; ++d) m.rank_decile[d] = std::stod(fields[c++]);
      m.error = fields[c++];
    } catch (const std::invalid_argument&) {
      throw IoError(path + ":" + std::to_string(line_no) +
                    ": malformed numeric field");
    }
    rows.push_back(std::move(m));
  }
  return rows;
}

}  // namespace cachelease
