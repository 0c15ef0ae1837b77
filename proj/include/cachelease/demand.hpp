#pragma once

#include <vector>

#include "cachelease/topology.hpp"

namespace cachelease {

struct CatalogFile {
  int id = 0;
  double size_b = 1.0;  // [MBytes]
};

struct Catalog {
  std::vector<CatalogFile> files;
  double unit_size = 1.0;  // memory unit size b_MU [MBytes]

  int size() const { return static_cast<int>(files.size()); }
};

/// Catalog of n equally sized files matching the memory unit, so the lease at
/// a station equals its number of cached files.
Catalog uniform_catalog(int n_files, double file_size = 1.0,
                        double unit_size = 1.0);

/// p(r) = r^-exponent / sum_r' r'^-exponent over ranks 1..catalog_size.
std::vector<double> zipf_pmf(int catalog_size, double exponent);

/// Expected request counts N_{s,f} per (region, file); row-major over regions.
struct DemandMatrix {
  int n_regions = 0;
  int n_files = 0;
  std::vector<double> n;  // n_regions * n_files
  std::vector<double> region_totals;
  std::vector<double> file_totals;
  double total = 0.0;

  double at(int s, int f) const {
    return n[static_cast<std::size_t>(s) * n_files + f];
  }
};

DemandMatrix demand_matrix_from_pmf(
    const std::vector<Region>& regions, double users_per_km2,
    const std::vector<std::vector<double>>& pmf_per_region);

/// N_{s,f} = area(s) * density * zipf_pmf(f); the same popularity law in
/// every region.
DemandMatrix demand_matrix(const std::vector<Region>& regions,
                           double users_per_km2, const Catalog& catalog,
                           double zipf_exponent);

/// Per-file weights proportional to file size, normalized so the largest
/// file has weight 1.
std::vector<double> size_priority_weights(const Catalog& catalog);

}  // namespace cachelease
