// Command-line front end: generate topologies, solve single instances, run
// sweeps and render SVG reports, all driven by a JSON config file.
//
// Exit codes: 0 success, 2 configuration error, 3 solver error, 4 I/O error.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>

#include <nlohmann/json.hpp>
#include "CLI11.hpp"

#include "cachelease/config.hpp"
#include "cachelease/errors.hpp"
#include "cachelease/json_io.hpp"
#include "cachelease/rng.hpp"
#include "cachelease/svg.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace cachelease;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitIo = 4;

struct CommonArgs {
  std::string config_path;
  std::string output_dir;
  std::optional<std::uint64_t> seed;
  std::optional<double> price;
  std::optional<int> jobs;
};

/// Precedence: flags > config file > built-in defaults; the output directory
/// additionally falls back to $CACHELEASE_OUTPUT_DIR, then ".".
RunConfig resolve_config(const CommonArgs& args) {
  RunConfig cfg = args.config_path.empty()
                      ? parse_config(json{{"version", 1}})
                      : load_config(args.config_path);
  if (args.seed) {
    cfg.master_seed = *args.seed;
    cfg.sweep.master_seed = *args.seed;
  }
  if (args.price) {
    cfg.price_per_unit = *args.price;
    cfg.sweep.price_grid = {*args.price};
  }
  if (args.jobs) cfg.sweep.jobs = *args.jobs;
  if (!args.output_dir.empty()) {
    cfg.output_dir = args.output_dir;
  } else if (cfg.output_dir.empty()) {
    const char* env = std::getenv("CACHELEASE_OUTPUT_DIR");
    cfg.output_dir = env ? env : ".";
  }
  return cfg;
}

fs::path ensure_output_dir(const RunConfig& cfg) {
  fs::path dir(cfg.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec && !fs::is_directory(dir))
    throw IoError("cannot create output directory " + dir.string());
  return dir;
}

json manifest_stub(const RunConfig& cfg) {
  const json config_json = config_to_json(cfg);
  return json{{"config", config_json},
              {"config_fingerprint", config_fingerprint(config_json)},
              {"master_seed", cfg.master_seed}};
}

Topology build_from_config(const RunConfig& cfg) {
  TopologyParams params = cfg.topology;
  params.seed = seed_combine(cfg.master_seed, 0);
  params.price_q = cfg.price_per_unit;
  params.capacity_k =
      cfg.capacity_units >= 0 ? cfg.capacity_units : cfg.catalog_size;
  return build_topology(params);
}

int cmd_gen(const CommonArgs& args) {
  const RunConfig cfg = resolve_config(args);
  const fs::path dir = ensure_output_dir(cfg);
  const Topology topo = build_from_config(cfg);
  save_topology(topo, (dir / "topology.json").string());
  save_json_file(manifest_stub(cfg), (dir / "gen_manifest.json").string());

  double covered = 0.0;
  for (const Region& r : topo.regions_opt) covered += r.area;
  std::cout << "stations: " << topo.stations.size() << "\n"
            << "regions (closest/opt): " << topo.regions_closest.size() << "/"
            << topo.regions_opt.size() << "\n"
            << "covered-area fraction: " << covered / topo.window.area()
            << "\n"
            << "wrote " << (dir / "topology.json").string() << "\n";
  return 0;
}

int cmd_solve(const CommonArgs& args, const std::string& topology_path) {
  using clock = std::chrono::steady_clock;
  const RunConfig cfg = resolve_config(args);
  const fs::path dir = ensure_output_dir(cfg);

  auto t0 = clock::now();
  Topology topo;
  if (!topology_path.empty()) {
    topo = load_topology(topology_path);
    for (Station& st : topo.stations) {
      st.price_q = cfg.price_per_unit;
      st.capacity_k =
          cfg.capacity_units >= 0 ? cfg.capacity_units : cfg.catalog_size;
    }
  } else {
    topo = build_from_config(cfg);
  }
  auto t1 = clock::now();

  const Catalog catalog = cfg.make_catalog();
  const DemandMatrix demand =
      demand_matrix(topo.regions(cfg.policy), cfg.user_density_per_km2,
                    catalog, cfg.zipf_exponent);
  auto t2 = clock::now();

  const BendersConfig bc = cfg.make_benders_config(topo, catalog);
  const BendersResult result = benders_run(topo, demand, catalog, bc);
  auto t3 = clock::now();

  double income = 0.0;
  for (std::size_t m = 0; m < topo.stations.size(); ++m)
    income += topo.stations[m].price_q * result.z_star[m];
  const double hr =
      demand.total > 0.0 ? hit_ratio(result.y_star, demand) : 0.0;
  const double gap =
      result.bound_trace.empty()
          ? 0.0
          : result.bound_trace.back().upper - result.bound_trace.back().lower;

  json result_json = benders_result_to_json(result);
  result_json["hit_ratio"] = hr;
  result_json["mno_income"] = income;
  result_json["config_fingerprint"] = config_fingerprint(config_to_json(cfg));
  result_json["master_seed"] = cfg.master_seed;
  save_json_file(result_json, (dir / "result.json").string());

  json manifest = manifest_stub(cfg);
  auto ms = [](auto a, auto b) {
    return std::chrono::duration<double, std::milli>(b - a).count();
  };
  manifest["wall_clock_ms"] = {{"topology", ms(t0, t1)},
                               {"demand", ms(t1, t2)},
                               {"solve", ms(t2, t3)}};
  manifest["bound_trace"] = result_json["bound_trace"];
  save_json_file(manifest, (dir / "solve_manifest.json").string());

  std::cout << "objective: " << result.best_objective << "\n"
            << "hit ratio: " << hr << "\n"
            << "mno income: " << income << "\n"
            << "iterations: " << result.iterations << "\n"
            << "gap: " << gap << "\n"
            << "status: "
            << (result.status == BendersStatus::kOptimal ? "optimal"
                                                         : "iter_limit")
            << "\n";
  return 0;
}

int cmd_sweep(const CommonArgs& args) {
  const RunConfig cfg = resolve_config(args);
  if (!cfg.has_sweep)
    throw ConfigError("sweep command needs a 'sweep' section in the config");
  const fs::path dir = ensure_output_dir(cfg);
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  const auto rows = run_sweep(cfg.sweep);
  const auto t1 = clock::now();
  write_metrics_csv((dir / "sweep.csv").string(), rows);

  json manifest = manifest_stub(cfg);
  manifest["rows"] = rows.size();
  int failures = 0;
  for (const RunMetrics& r : rows) failures += r.status != 0;
  manifest["failed_cells"] = failures;
  manifest["wall_clock_ms"] =
      std::chrono::duration<double, std::milli>(t1 - t0).count();
  save_json_file(manifest, (dir / "sweep_manifest.json").string());

  std::cout << "rows: " << rows.size() << " (failed: " << failures << ")\n"
            << "wrote " << (dir / "sweep.csv").string() << "\n";
  return 0;
}

struct SeriesKey {
  std::string model;
  Policy policy;
  double radius;
  bool operator<(const SeriesKey& o) const {
    return std::tie(model, policy, radius) <
           std::tie(o.model, o.policy, o.radius);
  }
  std::string label() const {
    return model + "/" + policy_name(policy) + "/r" + std::to_string(
        static_cast<int>(radius));
  }
};

int cmd_report(const std::string& csv_path, const std::string& out_dir) {
  const auto rows = read_metrics_csv(csv_path);
  fs::path dir(out_dir.empty() ? "." : out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);

  // Aggregate means over seeds per (series, price).
  std::map<SeriesKey, std::map<double, std::vector<const RunMetrics*>>> series;
  for (const RunMetrics& r : rows) {
    if (r.status != 0) continue;
    series[{r.model, r.policy, r.radius}][r.price].push_back(&r);
  }
  auto mean_of = [](const std::vector<const RunMetrics*>& v,
                    auto field) {
    double sum = 0.0;
    for (const RunMetrics* m : v) sum += field(*m);
    return v.empty() ? 0.0 : sum / v.size();
  };

  SvgChart hit("Hit ratio vs price", "price per unit", "hit ratio");
  SvgChart income("MNO income vs price", "price per unit", "income");
  SvgChart income_hit("MNO income vs hit ratio", "hit ratio", "income");
  SvgChart load("Station load vs price (solid max, dashed min)",
                "price per unit", "load fraction");
  for (const auto& [key, by_price] : series) {
    std::vector<double> prices, hits, incomes, lmin, lmax;
    for (const auto& [price, cells] : by_price) {
      prices.push_back(price);
      hits.push_back(mean_of(cells, [](const RunMetrics& m) {
        return m.hit_ratio;
      }));
      incomes.push_back(mean_of(cells, [](const RunMetrics& m) {
        return m.mno_income;
      }));
      lmin.push_back(mean_of(cells, [](const RunMetrics& m) {
        return m.load_min;
      }));
      lmax.push_back(mean_of(cells, [](const RunMetrics& m) {
        return m.load_max;
      }));
    }
    hit.add_series(key.label(), prices, hits);
    income.add_series(key.label(), prices, incomes);
    income_hit.add_series(key.label(), hits, incomes);
    load.add_series(key.label() + " max", prices, lmax);
    load.add_dashed_series(key.label() + " min", prices, lmin);
  }

  // Decile columns at the median price of each series.
  SvgChart deciles("Cached slots by popularity decile (median price)",
                   "popularity decile", "cached slots per run");
  deciles.set_x_ticks({"1-10%", "", "", "", "", "", "", "", "", "91-100%"});
  for (const auto& [key, by_price] : series) {
    std::vector<double> prices;
    for (const auto& [price, cells] : by_price) prices.push_back(price);
    const double median = prices[prices.size() / 2];
    std::vector<double> heights(10, 0.0);
    const auto& cells = by_price.at(median);
    for (int d = 0; d < 10; ++d)
      heights[d] = mean_of(cells, [d](const RunMetrics& m) {
        return m.rank_decile[d];
      });
    deciles.add_columns(key.label(), heights);
  }

  hit.save((dir / "hit_ratio_vs_price.svg").string());
  income.save((dir / "income_vs_price.svg").string());
  income_hit.save((dir / "income_vs_hit_ratio.svg").string());
  deciles.save((dir / "decile_columns.svg").string());
  load.save((dir / "load_band.svg").string());
  std::cout << "wrote 5 charts to " << dir.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Edge-cache leasing and content placement optimizer"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string topology_path, csv_path, report_dir;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("-c,--config", args.config_path, "JSON config file");
    cmd->add_option("-o,--output-dir", args.output_dir,
                    "output directory (overrides config and "
                    "$CACHELEASE_OUTPUT_DIR)");
    cmd->add_option("--seed", args.seed, "override the master seed");
  };

  CLI::App* gen = app.add_subcommand("gen", "generate a topology file");
  add_common(gen);
  CLI::App* solve = app.add_subcommand("solve", "solve one instance");
  add_common(solve);
  solve->add_option("--price", args.price, "override the lease price");
  solve->add_option("--topology", topology_path,
                    "solve on an existing topology.json");
  CLI::App* sweep = app.add_subcommand("sweep", "run the parameter sweep");
  add_common(sweep);
  sweep->add_option("--jobs", args.jobs, "parallel workers");
  CLI::App* report =
      app.add_subcommand("report", "render SVG charts from a sweep CSV");
  report->add_option("--csv", csv_path, "sweep CSV file")->required();
  report->add_option("-o,--output-dir", report_dir, "chart directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_gen(args);
    if (solve->parsed()) return cmd_solve(args, topology_path);
    if (sweep->parsed()) return cmd_sweep(args);
    if (report->parsed()) return cmd_report(csv_path, report_dir);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
