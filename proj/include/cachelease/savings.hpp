#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "cachelease/demand.hpp"
#include "cachelease/topology.hpp"

namespace cachelease {

/// Index space over the valid (station, region, file) association triples:
/// one block per region, |covering_set| x n_files entries each.
struct AssignmentLayout {
  int n_stations = 0;
  int n_files = 0;
  std::vector<std::vector<int>> cover;   // region -> covering station ids
  std::vector<std::size_t> offset;       // region -> block offset
  // station -> (region, position of the station in that region's cover)
  std::vector<std::vector<std::pair<int, int>>> by_station;

  static AssignmentLayout build(const std::vector<Region>& regions,
                                int n_stations, int n_files);

  std::size_t size() const { return total_; }
  int n_regions() const { return static_cast<int>(cover.size()); }
  std::size_t index(int s, int j, int f) const {
    return offset[s] + static_cast<std::size_t>(j) * n_files + f;
  }
  /// Position of station m in region s's cover, or -1.
  int cover_position(int s, int m) const;

 private:
  std::size_t total_ = 0;
};

/// Expected cache-hit traffic y_{m,s,f} over the valid triples of a layout.
struct Assignment {
  const AssignmentLayout* layout = nullptr;
  std::vector<double> y;

  static Assignment zeros(const AssignmentLayout& layout) {
    return {&layout, std::vector<double>(layout.size(), 0.0)};
  }
  double at(int s, int j, int f) const { return y[layout->index(s, j, f)]; }
};

enum class SavingsFamily { kLinear, kLog };

/// The provider's savings function S(y). Linear maps hit traffic to money at
/// a constant rate; the log family sums per-station utilities
/// U(v) = ln(v + eps) - ln(eps), shifted so an idle station contributes 0.
/// Optional weights turn volumes into weighted volumes w_{m,s,f} =
/// station_weights[s][j] * file_weights[f].
struct SavingsModel {
  SavingsFamily family = SavingsFamily::kLinear;
  double per_hit_value = 1.0;  // c, linear family only
  double smoothing_eps = 1e-6;  // log family only
  std::shared_ptr<const WeightTable> station_weights;   // null -> 1
  std::shared_ptr<const std::vector<double>> file_weights;  // null -> 1

  bool linear() const { return family == SavingsFamily::kLinear; }
  bool weighted() const {
    return station_weights != nullptr || file_weights != nullptr;
  }
  double weight(int s, int j, int f) const {
    double w = 1.0;
    if (station_weights) w *= station_weights->w[s][j];
    if (file_weights) w *= (*file_weights)[f];
    return w;
  }
};

/// Weighted cache-hit volume at one station.
double station_volume(const Assignment& y, int station,
                      const SavingsModel& model);
/// Weighted volumes for all stations in one pass.
std::vector<double> station_volumes(const Assignment& y,
                                    const SavingsModel& model);

double savings_value(const SavingsModel& model, const Assignment& y);

/// dS/dy over all valid triples.
std::vector<double> savings_gradient(const SavingsModel& model,
                                     const Assignment& y);
/// Gradient given precomputed station volumes (hot path for solvers).
std::vector<double> savings_gradient(const SavingsModel& model,
                                     const AssignmentLayout& layout,
                                     const std::vector<double>& volumes);

/// Unweighted served mass over total demand mass. Errors on zero demand.
double hit_ratio(const Assignment& y, const DemandMatrix& demand);

}  // namespace cachelease
