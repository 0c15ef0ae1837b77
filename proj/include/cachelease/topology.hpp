#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cachelease/geometry.hpp"

namespace cachelease {

/// A cached base station the provider can lease memory units at.
struct Station {
  int id = 0;
  Point position;
  double radius = 0.0;     // coverage radius [m]
  int capacity_k = 0;      // max leasable memory units
  double price_q = 0.0;    // lease price per unit
  double power_p = 1.0;    // transmit power [W]
};

/// Maximal planar area whose points share the same service options.
/// Under CLOSEST the covering set is the single nearest covering station.
struct Region {
  int id = 0;
  std::vector<int> covering_set;  // station ids, ascending
  double area = 0.0;              // [m^2]
  Point centroid;
};

struct RadioParams {
  double noise_sigma2 = 1e-9;      // noise power [W]
  double bandwidth_b = 1e6;        // per-user bandwidth chunk [Hz]
  double pathloss_exponent = 3.5;  // >= 2
  double reference_gain = 1.0;     // gain at the 1 m reference distance
};

enum class Policy { kClosest, kOpt };

const char* policy_name(Policy p);
Policy policy_from_name(const std::string& name);

/// Base weight w_{m,s} per (region, covering-station) pair, aligned with
/// Region::covering_set order. File-independent; per-file factors multiply in.
struct WeightTable {
  std::vector<std::vector<double>> w;  // w[region][j]
};

/// Immutable after construction; safe to share across workers.
struct Topology {
  std::vector<Station> stations;
  Rect window;
  double grid_step = 0.0;
  std::uint64_t seed = 0;
  std::vector<Region> regions_closest;
  std::vector<Region> regions_opt;
  // region_index[policy][m] = ids of regions station m may serve
  std::vector<std::vector<int>> region_index_closest;
  std::vector<std::vector<int>> region_index_opt;

  const std::vector<Region>& regions(Policy p) const {
    return p == Policy::kClosest ? regions_closest : regions_opt;
  }
  const std::vector<std::vector<int>>& region_index(Policy p) const {
    return p == Policy::kClosest ? region_index_closest : region_index_opt;
  }
};

/// Draws station positions as a Poisson point process: the count is
/// Poisson(intensity * area), positions i.i.d. uniform in the window.
/// Radius/capacity/price/power are left at defaults for the caller to fill.
std::vector<Station> generate_ppp(double intensity_per_km2, const Rect& window,
                                  std::uint64_t seed);

/// Discretizes the window into grid cells of side grid_step and groups the
/// covered cells into regions: by identical covering-disk set (OPT) or by
/// nearest covering station, ties to the lowest id (CLOSEST). Uncovered cells
/// produce no region. Region ids follow the lexicographic order of covering
/// sets, so the result is deterministic.
std::vector<Region> compute_regions(const std::vector<Station>& stations,
                                    Policy policy, double grid_step,
                                    const Rect& window);

std::vector<std::vector<int>> build_region_index(
    const std::vector<Region>& regions, int n_stations);

/// SINR at the region centroid when served by station_id; interference comes
/// only from the other covering stations. Channel gain is
/// reference_gain * max(d, 1m)^-alpha.
double sinr(const Region& region, int station_id,
            const std::vector<Station>& stations, const RadioParams& radio);

/// w_{m,s} = B * log2(1 + SINR_s(m)) for every covering pair.
WeightTable throughput_weights(const std::vector<Region>& regions,
                               const std::vector<Station>& stations,
                               const RadioParams& radio);

struct TopologyParams {
  double station_intensity_per_km2 = 80.0;
  Rect window{0.0, 0.0, 250.0, 250.0};
  double radius_m = 50.0;
  int capacity_k = 0;
  double price_q = 0.0;
  double power_p = 1.0;
  double grid_step_m = 0.0;  // 0 -> radius/50
  std::uint64_t seed = 1;
};

/// Generates stations on a window padded by the coverage radius (edge-effect
/// guard) and materializes regions for both policies inside the evaluation
/// window only.
Topology build_topology(const TopologyParams& params);

}  // namespace cachelease
