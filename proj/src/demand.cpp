#include "cachelease/demand.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cachelease {

namespace {
constexpr double kM2PerKm2 = 1e6;
}

Catalog uniform_catalog(int n_files, double file_size, double unit_size) {
  if (n_files < 0) throw std::invalid_argument("catalog size must be >= 0");
  Catalog cat;
  cat.unit_size = unit_size;
  cat.files.resize(n_files);
  for (int f = 0; f < n_files; ++f) cat.files[f] = {f, file_size};
  return cat;
}

std::vector<double> zipf_pmf(int catalog_size, double exponent) {
  if (catalog_size < 1)
    throw std::invalid_argument("zipf catalog size must be >= 1");
  if (exponent < 0.0)
    throw std::invalid_argument("zipf exponent must be >= 0");
  std::vector<double> pmf(catalog_size);
  double norm = 0.0;
  for (int r = 1; r <= catalog_size; ++r)
    norm += std::pow(static_cast<double>(r), -exponent);
  for (int r = 1; r <= catalog_size; ++r)
    pmf[r - 1] = std::pow(static_cast<double>(r), -exponent) / norm;
  return pmf;
}

DemandMatrix demand_matrix_from_pmf(
    const std::vector<Region>& regions, double users_per_km2,
    const std::vector<std::vector<double>>& pmf_per_region) {
  if (users_per_km2 < 0.0)
    throw std::invalid_argument("user density must be >= 0");
  if (pmf_per_region.size() != regions.size())
    throw std::invalid_argument("one popularity vector per region required");

  DemandMatrix dm;
  dm.n_regions = static_cast<int>(regions.size());
  dm.n_files = regions.empty() ? 0 : static_cast<int>(pmf_per_region[0].size());
  dm.n.assign(static_cast<std::size_t>(dm.n_regions) * dm.n_files, 0.0);
  dm.region_totals.assign(dm.n_regions, 0.0);
  dm.file_totals.assign(dm.n_files, 0.0);

  for (int s = 0; s < dm.n_regions; ++s) {
    const auto& pmf = pmf_per_region[s];
    if (static_cast<int>(pmf.size()) != dm.n_files)
      throw std::invalid_argument("popularity vectors must share one length");
    const double population = regions[s].area / kM2PerKm2 * users_per_km2;
    for (int f = 0; f < dm.n_files; ++f) {
      const double v = population * pmf[f];
      dm.n[static_cast<std::size_t>(s) * dm.n_files + f] = v;
      dm.region_totals[s] += v;
      dm.file_totals[f] += v;
      dm.total += v;
    }
  }
  return dm;
}

DemandMatrix demand_matrix(const std::vector<Region>& regions,
                           double users_per_km2, const Catalog& catalog,
                           double zipf_exponent) {
  if (catalog.size() < 1)
    throw std::invalid_argument("demand needs a non-empty catalog");
  const std::vector<double> pmf = zipf_pmf(catalog.size(), zipf_exponent);
  std::vector<std::vector<double>> per_region(regions.size(), pmf);
  return demand_matrix_from_pmf(regions, users_per_km2, per_region);
}

std::vector<double> size_priority_weights(const Catalog& catalog) {
  if (catalog.files.empty())
    throw std::invalid_argument("size weights need a non-empty catalog");
  double max_size = 0.0;
  for (const CatalogFile& f : catalog.files)
    max_size = std::max(max_size, f.size_b);
  std::vector<double> w(catalog.files.size());
  for (std::size_t f = 0; f < catalog.files.size(); ++f)
    w[f] = catalog.files[f].size_b / max_size;
  return w;
}

}  // namespace cachelease
