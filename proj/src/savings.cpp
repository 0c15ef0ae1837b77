#include "cachelease/savings.hpp"

#include <cmath>
#include <stdexcept>

namespace cachelease {

AssignmentLayout AssignmentLayout::build(const std::vector<Region>& regions,
                                         int n_stations, int n_files) {
  AssignmentLayout layout;
  layout.n_stations = n_stations;
  layout.n_files = n_files;
  layout.cover.resize(regions.size());
  layout.offset.resize(regions.size());
  layout.by_station.resize(n_stations);
  std::size_t off = 0;
  for (std::size_t s = 0; s < regions.size(); ++s) {
    layout.cover[s] = regions[s].covering_set;
    layout.offset[s] = off;
    off += layout.cover[s].size() * static_cast<std::size_t>(n_files);
    for (std::size_t j = 0; j < layout.cover[s].size(); ++j)
      layout.by_station.at(layout.cover[s][j])
          .emplace_back(static_cast<int>(s), static_cast<int>(j));
  }
  layout.total_ = off;
  return layout;
}

int AssignmentLayout::cover_position(int s, int m) const {
  const auto& c = cover[s];
  for (std::size_t j = 0; j < c.size(); ++j)
    if (c[j] == m) return static_cast<int>(j);
  return -1;
}

double station_volume(const Assignment& y, int station,
                      const SavingsModel& model) {
  const AssignmentLayout& layout = *y.layout;
  if (station < 0 || station >= layout.n_stations)
    throw std::domain_error("unknown station id " + std::to_string(station));
  double v = 0.0;
  for (const auto& [s, j] : layout.by_station[station]) {
    const std::size_t base = layout.index(s, j, 0);
    for (int f = 0; f < layout.n_files; ++f)
      v += model.weight(s, j, f) * y.y[base + f];
  }
  return v;
}

std::vector<double> station_volumes(const Assignment& y,
                                    const SavingsModel& model) {
  const AssignmentLayout& layout = *y.layout;
  std::vector<double> v(layout.n_stations, 0.0);
  for (int s = 0; s < layout.n_regions(); ++s) {
    for (std::size_t j = 0; j < layout.cover[s].size(); ++j) {
      const int m = layout.cover[s][j];
      const std::size_t base = layout.index(s, static_cast<int>(j), 0);
      double acc = 0.0;
      for (int f = 0; f < layout.n_files; ++f)
        acc += model.weight(s, static_cast<int>(j), f) * y.y[base + f];
      v[m] += acc;
    }
  }
  return v;
}

double savings_value(const SavingsModel& model, const Assignment& y) {
  const std::vector<double> v = station_volumes(y, model);
  if (model.linear()) {
    double total = 0.0;
    for (double vm : v) total += vm;
    return model.per_hit_value * total;
  }
  const double eps = model.smoothing_eps;
  const double shift = std::log(eps);
  double total = 0.0;
  for (double vm : v) total += std::log(vm + eps) - shift;
  return total;
}

std::vector<double> savings_gradient(const SavingsModel& model,
                                     const AssignmentLayout& layout,
                                     const std::vector<double>& volumes) {
  std::vector<double> g(layout.size());
  for (int s = 0; s < layout.n_regions(); ++s) {
    for (std::size_t j = 0; j < layout.cover[s].size(); ++j) {
      const int m = layout.cover[s][j];
      const double scale = model.linear()
                               ? model.per_hit_value
                               : 1.0 / (volumes[m] + model.smoothing_eps);
      const std::size_t base = layout.index(s, static_cast<int>(j), 0);
      for (int f = 0; f < layout.n_files; ++f)
        g[base + f] = scale * model.weight(s, static_cast<int>(j), f);
    }
  }
  return g;
}

std::vector<double> savings_gradient(const SavingsModel& model,
                                     const Assignment& y) {
  return savings_gradient(model, *y.layout, station_volumes(y, model));
}

double hit_ratio(const Assignment& y, const DemandMatrix& demand) {
  if (demand.total <= 0.0)
    throw std::domain_error("hit ratio undefined: total demand is zero");
  double served = 0.0;
  for (double v : y.y) served += v;
  return served / demand.total;
}

}  // namespace cachelease
