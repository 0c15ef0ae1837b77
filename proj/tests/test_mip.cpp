#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "cachelease/errors.hpp"
#include "cachelease/mip.hpp"
#include "cachelease/rng.hpp"

using namespace cachelease;

namespace {

MasterProblem make_problem(int n_stations, int n_files,
                           std::vector<double> prices,
                           std::vector<int> capacities,
                           double gamma_cap =
                               std::numeric_limits<double>::infinity()) {
  MasterProblem p;
  p.n_stations = n_stations;
  p.n_files = n_files;
  p.price_q = std::move(prices);
  p.capacity_k = std::move(capacities);
  p.size_b.assign(n_files, 1.0);
  p.unit_size = 1.0;
  p.gamma_cap = gamma_cap;
  return p;
}

/// Brute force over all placements with the exact ceiling lease.
double enumerate_optimum(const MasterProblem& p) {
  const int bits = p.n_stations * p.n_files;
  double best = -1e300;
  for (unsigned mask = 0; mask < (1u << bits); ++mask) {
    std::vector<double> x(bits, 0.0);
    for (int b = 0; b < bits; ++b)
      if (mask & (1u << b)) x[b] = 1.0;
    double cost = 0.0;
    bool feasible = true;
    for (int m = 0; m < p.n_stations; ++m) {
      double bytes = 0.0;
      for (int f = 0; f < p.n_files; ++f)
        bytes += p.size_b[f] * x[m * p.n_files + f];
      const int z = static_cast<int>(std::ceil(bytes / p.unit_size - 1e-9));
      if (z > p.capacity_k[m]) {
        feasible = false;
        break;
      }
      cost += p.price_q[m] * z;
    }
    if (!feasible) continue;
    best = std::max(best, master_gamma_at(p, x) - cost);
  }
  return best;
}

}  // namespace

TEST_CASE("master: a flat cut makes caching worthless") {
  MasterProblem p = make_problem(2, 2, {1.0, 2.0}, {2, 2});
  p.cuts.push_back({5.0, std::vector<double>(4, 0.0)});
  const MasterSolution sol = solve_master(p);
  for (auto bit : sol.x.x) CHECK(bit == 0);
  CHECK(sol.z == std::vector<int>{0, 0});
  CHECK(sol.gamma == doctest::Approx(5.0));
  CHECK(sol.objective == doctest::Approx(5.0));
}

TEST_CASE("master: per-file marginal comparison") {
  MasterProblem p = make_problem(1, 2, {2.0}, {2});
  p.cuts.push_back({0.0, {3.0, 1.0}});
  const MasterSolution sol = solve_master(p);
  CHECK(sol.x.at(0, 0));
  CHECK_FALSE(sol.x.at(0, 1));
  CHECK(sol.objective == doctest::Approx(1.0));
  CHECK(sol.z == std::vector<int>{1});
}

TEST_CASE("master: no cuts and no cap is unbounded") {
  MasterProblem p = make_problem(1, 1, {1.0}, {1});
  CHECK_THROWS_AS(solve_master(p), UnboundedError);
  CHECK_THROWS_AS(solve_lp_relaxation(p, {}), UnboundedError);
  p.gamma_cap = 12.0;  // a finite cap alone bounds the problem
  const MasterSolution sol = solve_master(p);
  CHECK(sol.objective == doctest::Approx(12.0));
}

TEST_CASE("master: node limit raises a resource error") {
  MasterProblem p = make_problem(1, 1, {0.5}, {1});
  p.cuts.push_back({1.0, {0.0}});
  p.cuts.push_back({0.0, {2.0}});
  p.node_limit = 1;  // root branches on the fractional crossing point
  CHECK_THROWS_AS(solve_master(p), ResourceLimitError);
  p.node_limit = 1000;
  CHECK(solve_master(p).objective == doctest::Approx(0.5));
}

TEST_CASE("master: heterogeneous sizes go through the ceiling") {
  MasterProblem p = make_problem(1, 2, {1.5}, {2});
  p.size_b = {0.6, 0.6};
  p.cuts.push_back({0.0, {2.0, 2.0}});
  const MasterSolution sol = solve_master(p);
  // Caching both files needs ceil(1.2) = 2 units: 4 - 3 = 1, the optimum;
  // one file costs a whole unit for 2 - 1.5 = 0.5.
  CHECK(sol.objective == doctest::Approx(1.0));
  CHECK(sol.z == std::vector<int>{2});
  // The LP bound uses the fractional lease and exceeds the integral value.
  const LpSolution lp = solve_lp_relaxation(p, {});
  CHECK(lp.bound == doctest::Approx(2.2));
}

TEST_CASE("lp relaxation: fully fixed placements evaluate the cuts") {
  MasterProblem p = make_problem(2, 2, {0.25, 0.75}, {2, 2}, 100.0);
  p.cuts.push_back({1.0, {0.5, 0.25, 2.0, 0.0}});
  p.cuts.push_back({0.5, {1.0, 1.0, 0.5, 0.5}});
  Rng rng(3);
  for (int trial = 0; trial < 16; ++trial) {
    std::vector<std::int8_t> fix(4);
    std::vector<double> x(4);
    for (int j = 0; j < 4; ++j) {
      fix[j] = rng.uniform() < 0.5 ? 0 : 1;
      x[j] = fix[j];
    }
    const LpSolution sol = solve_lp_relaxation(p, fix);
    double cost = 0.0;
    for (int m = 0; m < 2; ++m)
      for (int f = 0; f < 2; ++f) cost += p.price_q[m] * x[m * 2 + f];
    CHECK(sol.bound ==
          doctest::Approx(master_gamma_at(p, x) - cost).epsilon(1e-9));
  }
}

TEST_CASE("lp relaxation: gamma cap active when no cut binds") {
  MasterProblem p = make_problem(1, 1, {10.0}, {1}, 7.5);
  const LpSolution sol = solve_lp_relaxation(p, {});
  CHECK(sol.gamma == doctest::Approx(7.5));
  CHECK(sol.bound == doctest::Approx(7.5));
  CHECK(sol.x[0] == doctest::Approx(0.0));
}

TEST_CASE("master: exhaustive oracle on random instances") {
  Rng rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    const int n_stations = 1 + static_cast<int>(rng.uniform() * 3);
    const int max_files = 12 / n_stations;
    const int n_files = 1 + static_cast<int>(rng.uniform() * max_files);
    std::vector<double> prices(n_stations);
    std::vector<int> capacities(n_stations);
    for (int m = 0; m < n_stations; ++m) {
      prices[m] = rng.uniform() * 1.5;
      capacities[m] = static_cast<int>(rng.uniform() * (n_files + 1));
    }
    MasterProblem p = make_problem(n_stations, n_files, prices, capacities);
    if (trial % 3 == 0)
      for (double& b : p.size_b) b = 0.3 + rng.uniform();  // ceiling stress
    const int n_cuts = 1 + static_cast<int>(rng.uniform() * 5);
    for (int t = 0; t < n_cuts; ++t) {
      Cut cut;
      cut.gamma_const = rng.uniform() * 3.0;
      cut.coeff.resize(n_stations * n_files);
      for (double& v : cut.coeff) v = rng.uniform() * 2.0;
      p.cuts.push_back(std::move(cut));
    }
    if (trial % 4 == 0) p.gamma_cap = rng.uniform() * 4.0;

    const double brute = enumerate_optimum(p);
    const MasterSolution sol = solve_master(p);
    CHECK(sol.objective == doctest::Approx(brute).epsilon(1e-9));

    const LpSolution lp = solve_lp_relaxation(p, {});
    CHECK(lp.bound >= brute - 1e-9);
    CHECK(sol.lp_bound >= sol.objective - 1e-9);
  }
}

TEST_CASE("master: adding cuts never raises the surrogate value") {
  Rng rng(77);
  MasterProblem p = make_problem(2, 3, {0.4, 0.9}, {3, 3});
  double previous = std::numeric_limits<double>::infinity();
  for (int t = 0; t < 6; ++t) {
    Cut cut;
    cut.gamma_const = rng.uniform() * 2.0;
    cut.coeff.resize(6);
    for (double& v : cut.coeff) v = rng.uniform();
    p.cuts.push_back(std::move(cut));
    const double value = solve_master(p).objective;
    CHECK(value <= previous + 1e-9);
    previous = value;
  }
}

TEST_CASE("master: deterministic across repeated solves") {
  Rng rng(99);
  MasterProblem p = make_problem(3, 3, {0.2, 0.5, 0.8}, {3, 3, 3});
  for (int t = 0; t < 4; ++t) {
    Cut cut;
    cut.gamma_const = rng.uniform();
    cut.coeff.resize(9);
    for (double& v : cut.coeff) v = rng.uniform();
    p.cuts.push_back(std::move(cut));
  }
  const MasterSolution a = solve_master(p);
  const MasterSolution b = solve_master(p);
  CHECK(a.x.x == b.x.x);
  CHECK(a.objective == b.objective);
  CHECK(a.node_count == b.node_count);
}

TEST_CASE("lp format export mentions every block") {
  MasterProblem p = make_problem(2, 2, {0.5, 0.25}, {2, 2}, 9.0);
  p.cuts.push_back({1.0, {1.0, 0.0, 0.0, 2.0}});
  const std::string text = master_to_lp_format(p);
  CHECK(text.find("Maximize") != std::string::npos);
  CHECK(text.find("cut0") != std::string::npos);
  CHECK(text.find("mem1") != std::string::npos);
  CHECK(text.find("Binaries") != std::string::npos);
  CHECK(text.find("x1_1") != std::string::npos);
}
