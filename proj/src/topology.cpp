#include "cachelease/topology.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include "cachelease/rng.hpp"

namespace cachelease {

namespace {
constexpr double kM2PerKm2 = 1e6;
}

const char* policy_name(Policy p) {
  return p == Policy::kClosest ? "closest" : "opt";
}

Policy policy_from_name(const std::string& name) {
  if (name == "closest") return Policy::kClosest;
  if (name == "opt") return Policy::kOpt;
  throw std::invalid_argument("unknown policy: " + name);
}

std::vector<Station> generate_ppp(double intensity_per_km2, const Rect& window,
                                  std::uint64_t seed) {
  if (intensity_per_km2 < 0.0)
    throw std::invalid_argument("PPP intensity must be non-negative");
  if (window.degenerate())
    throw std::invalid_argument("PPP window is degenerate");

  Rng rng(seed);
  const double mean = intensity_per_km2 * window.area() / kM2PerKm2;
  const int count = rng.poisson(mean);
  std::vector<Station> stations(count);
  for (int i = 0; i < count; ++i) {
    stations[i].id = i;
    stations[i].position.x = rng.uniform(window.xmin, window.xmax);
    stations[i].position.y = rng.uniform(window.ymin, window.ymax);
  }
  return stations;
}

std::vector<Region> compute_regions(const std::vector<Station>& stations,
                                    Policy policy, double grid_step,
                                    const Rect& window) {
  if (grid_step <= 0.0) throw std::invalid_argument("grid_step must be > 0");
  if (stations.empty()) return {};

  const int nx = static_cast<int>(std::ceil(window.width() / grid_step - 1e-9));
  const int ny =
      static_cast<int>(std::ceil(window.height() / grid_step - 1e-9));

  struct Acc {
    long cells = 0;
    double sx = 0.0, sy = 0.0;
  };
  std::map<std::vector<int>, Acc> groups;

  std::vector<double> r2(stations.size());
  for (std::size_t m = 0; m < stations.size(); ++m)
    r2[m] = stations[m].radius * stations[m].radius;

  std::vector<int> cover;
  cover.reserve(stations.size());
  for (int iy = 0; iy < ny; ++iy) {
    const double cy = window.ymin + (iy + 0.5) * grid_step;
    for (int ix = 0; ix < nx; ++ix) {
      const double cx = window.xmin + (ix + 0.5) * grid_step;
      cover.clear();
      int nearest = -1;
      double nearest_d2 = 0.0;
      for (std::size_t m = 0; m < stations.size(); ++m) {
        const double dx = cx - stations[m].position.x;
        const double dy = cy - stations[m].position.y;
        const double d2 = dx * dx + dy * dy;
        if (d2 <= r2[m]) {
          cover.push_back(stations[m].id);
          if (nearest < 0 || d2 < nearest_d2) {
            nearest = stations[m].id;
            nearest_d2 = d2;
          }
        }
      }
      if (cover.empty()) continue;
      if (policy == Policy::kClosest) {
        cover.assign(1, nearest);  // station ids ascend, so ties already
                                   // resolved to the lowest id
      }
      Acc& acc = groups[cover];
      acc.cells += 1;
      acc.sx += cx;
      acc.sy += cy;
    }
  }

  std::vector<Region> regions;
  regions.reserve(groups.size());
  const double cell_area = grid_step * grid_step;
  int next_id = 0;
  for (const auto& [key, acc] : groups) {
    Region r;
    r.id = next_id++;
    r.covering_set = key;
    r.area = cell_area * static_cast<double>(acc.cells);
    r.centroid = {acc.sx / static_cast<double>(acc.cells),
                  acc.sy / static_cast<double>(acc.cells)};
    regions.push_back(std::move(r));
  }
  return regions;
}

std::vector<std::vector<int>> build_region_index(
    const std::vector<Region>& regions, int n_stations) {
  std::vector<std::vector<int>> index(n_stations);
  for (const Region& r : regions)
    for (int m : r.covering_set) index.at(m).push_back(r.id);
  return index;
}

double sinr(const Region& region, int station_id,
            const std::vector<Station>& stations, const RadioParams& radio) {
  const auto& cs = region.covering_set;
  if (std::find(cs.begin(), cs.end(), station_id) == cs.end())
    throw std::domain_error("station " + std::to_string(station_id) +
                            " does not cover region " +
                            std::to_string(region.id));

  auto gain = [&](const Station& st) {
    const double d = std::max(distance(region.centroid, st.position), 1.0);
    return radio.reference_gain * std::pow(d, -radio.pathloss_exponent);
  };

  double signal = 0.0;
  double interference = 0.0;
  for (int m : cs) {
    const Station& st = stations.at(static_cast<std::size_t>(m));
    const double ph = st.power_p * gain(st);
    if (m == station_id)
      signal = ph;
    else
      interference += ph;
  }
  return signal / (interference + radio.noise_sigma2);
}

WeightTable throughput_weights(const std::vector<Region>& regions,
                               const std::vector<Station>& stations,
                               const RadioParams& radio) {
  WeightTable table;
  table.w.resize(regions.size());
  for (std::size_t s = 0; s < regions.size(); ++s) {
    const Region& region = regions[s];
    table.w[s].resize(region.covering_set.size());
    for (std::size_t j = 0; j < region.covering_set.size(); ++j) {
      const double snr = sinr(region, region.covering_set[j], stations, radio);
      table.w[s][j] = radio.bandwidth_b * std::log2(1.0 + snr);
    }
  }
  return table;
}

Topology build_topology(const TopologyParams& params) {
  Topology topo;
  topo.window = params.window;
  topo.seed = params.seed;
  topo.grid_step =
      params.grid_step_m > 0.0 ? params.grid_step_m : params.radius_m / 50.0;

  const Rect generation_window = params.window.padded(params.radius_m);
  topo.stations = generate_ppp(params.station_intensity_per_km2,
                               generation_window, params.seed);
  for (Station& st : topo.stations) {
    st.radius = params.radius_m;
    st.capacity_k = params.capacity_k;
    st.price_q = params.price_q;
    st.power_p = params.power_p;
  }

  topo.regions_closest = compute_regions(topo.stations, Policy::kClosest,
                                         topo.grid_step, params.window);
  topo.regions_opt = compute_regions(topo.stations, Policy::kOpt,
                                     topo.grid_step, params.window);
  const int n = static_cast<int>(topo.stations.size());
  topo.region_index_closest = build_region_index(topo.regions_closest, n);
  topo.region_index_opt = build_region_index(topo.regions_opt, n);
  return topo;
}

}  // namespace cachelease
