#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <functional>

#include "cachelease/association.hpp"
#include "cachelease/errors.hpp"
#include "test_util.hpp"

using namespace cachelease;
using testutil::SmallInstance;
using testutil::make_instance;
using testutil::random_placement;

namespace {

SavingsModel log_model(double eps = 1e-6) {
  SavingsModel m;
  m.family = SavingsFamily::kLog;
  m.smoothing_eps = eps;
  return m;
}

SmallInstance closest_instance() {
  return make_instance({{0}, {1}, {2}}, 3, 4, 1e6, 0.6);
}

std::shared_ptr<WeightTable> random_weights(const SmallInstance& inst,
                                            Rng& rng) {
  auto table = std::make_shared<WeightTable>();
  table->w.resize(inst.regions.size());
  for (std::size_t s = 0; s < inst.regions.size(); ++s)
    for (std::size_t j = 0; j < inst.regions[s].covering_set.size(); ++j)
      table->w[s].push_back(0.25 + rng.uniform());
  return table;
}

/// Iterates all 2^(M*F) placements.
void for_all_placements(int n_stations, int n_files,
                        const std::function<void(const Placement&)>& fn) {
  const int bits = n_stations * n_files;
  for (unsigned mask = 0; mask < (1u << bits); ++mask) {
    Placement x = Placement::zeros(n_stations, n_files);
    for (int b = 0; b < bits; ++b)
      if (mask & (1u << b)) x.x[b] = 1;
    fn(x);
  }
}

double cut_value_at(const SlaveResult& base, const SmallInstance& inst,
                    const Placement& x) {
  // S(y*) + sum lambda (N x - y*), the duality bound the cut encodes.
  double v = base.savings_value;
  for (int s = 0; s < inst.layout.n_regions(); ++s)
    for (std::size_t j = 0; j < inst.layout.cover[s].size(); ++j)
      for (int f = 0; f < inst.layout.n_files; ++f) {
        const std::size_t idx = inst.layout.index(s, static_cast<int>(j), f);
        const double cap =
            x.at(inst.layout.cover[s][j], f) ? inst.demand.at(s, f) : 0.0;
        v += base.lambda[idx] * (cap - base.y.y[idx]);
      }
  return v;
}

}  // namespace

TEST_CASE("closest: full placement serves everything") {
  const SmallInstance inst = closest_instance();
  const Placement x = Placement::full(3, 4);
  SavingsModel model;
  const SlaveResult res = solve_closest(x, inst.demand, model, inst.layout);
  CHECK(res.savings_value == doctest::Approx(inst.demand.total).epsilon(1e-12));
  CHECK(hit_ratio(res.y, inst.demand) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(res.kkt_residual <= 1e-10);
}

TEST_CASE("closest: empty placement leaves the marginal value on lambda") {
  const SmallInstance inst = closest_instance();
  const Placement x = Placement::zeros(3, 4);
  SavingsModel model;
  model.per_hit_value = 1.75;
  const SlaveResult res = solve_closest(x, inst.demand, model, inst.layout);
  CHECK(res.savings_value == 0.0);
  for (double v : res.y.y) CHECK(v == 0.0);
  for (double l : res.lambda) CHECK(l == doctest::Approx(1.75));
}

TEST_CASE("closest: random placements against the closed form") {
  const SmallInstance inst = closest_instance();
  Rng rng(17);
  SavingsModel model;
  for (int trial = 0; trial < 20; ++trial) {
    const Placement x = random_placement(3, 4, rng);
    const SlaveResult res = solve_closest(x, inst.demand, model, inst.layout);
    double expected = 0.0;
    for (int s = 0; s < 3; ++s)
      for (int f = 0; f < 4; ++f)
        if (x.at(inst.layout.cover[s][0], f)) expected += inst.demand.at(s, f);
    CHECK(res.savings_value == doctest::Approx(expected).epsilon(1e-12));
    CHECK(res.kkt_residual <= 1e-10);
  }
}

TEST_CASE("closest: rejects multi-covered layouts and shape mismatches") {
  const SmallInstance multi = make_instance({{0, 1}}, 2, 1);
  SavingsModel model;
  CHECK_THROWS_AS(
      solve_closest(Placement::full(2, 1), multi.demand, model, multi.layout),
      std::invalid_argument);
  const SmallInstance inst = closest_instance();
  CHECK_THROWS_AS(
      solve_closest(Placement::full(2, 9), inst.demand, model, inst.layout),
      std::domain_error);
}

TEST_CASE("opt linear: any caching cover serves the whole population") {
  const SmallInstance inst = make_instance({{0, 1}, {1, 2}, {0, 2}}, 3, 2);
  SavingsModel model;
  model.per_hit_value = 2.5;
  Placement x = Placement::zeros(3, 2);  // station 1 caches everything
  x.set(1, 0, true);
  x.set(1, 1, true);
  const SlaveResult res = solve_opt_linear(x, inst.demand, model, inst.layout);
  // Region 2 = {0, 2} has no caching cover; the others are fully served.
  double covered = 0.0;
  for (int s = 0; s < 2; ++s)
    for (int f = 0; f < 2; ++f) covered += inst.demand.at(s, f);
  CHECK(res.savings_value == doctest::Approx(2.5 * covered).epsilon(1e-12));
  CHECK(res.kkt_residual <= 1e-10);
}

TEST_CASE("opt linear: empty placement puts the full marginal on lambda") {
  const SmallInstance inst = make_instance({{0, 1}, {1}}, 2, 2);
  Rng rng(23);
  SavingsModel model;
  model.station_weights = random_weights(inst, rng);
  const Placement x = Placement::zeros(2, 2);
  const SlaveResult res = solve_opt_linear(x, inst.demand, model, inst.layout);
  for (int s = 0; s < inst.layout.n_regions(); ++s)
    for (std::size_t j = 0; j < inst.layout.cover[s].size(); ++j)
      for (int f = 0; f < 2; ++f)
        CHECK(res.lambda[inst.layout.index(s, static_cast<int>(j), f)] ==
              doctest::Approx(model.weight(s, static_cast<int>(j), f)));
}

TEST_CASE("opt linear: strong duality against the block-vertex oracle") {
  // The slave LP decomposes per (region, file); each block's optimum sits on
  // a vertex: all mass to one caching station, or nothing. The dual value
  // must match primal exactly and the duals must be feasible.
  const SmallInstance inst = make_instance({{0, 1, 2}, {0, 2}}, 3, 3);
  Rng rng(29);
  for (int trial = 0; trial < 30; ++trial) {
    SavingsModel model;
    model.per_hit_value = 0.5 + rng.uniform();
    model.station_weights = random_weights(inst, rng);
    const Placement x = random_placement(3, 3, rng);
    const SlaveResult res =
        solve_opt_linear(x, inst.demand, model, inst.layout);

    double vertex_optimum = 0.0;
    for (int s = 0; s < inst.layout.n_regions(); ++s)
      for (int f = 0; f < 3; ++f) {
        double best = 0.0;
        for (std::size_t j = 0; j < inst.layout.cover[s].size(); ++j)
          if (x.at(inst.layout.cover[s][j], f))
            best = std::max(best, model.per_hit_value *
                                      model.weight(s, static_cast<int>(j), f));
        vertex_optimum += best * inst.demand.at(s, f);
      }
    CHECK(res.savings_value ==
          doctest::Approx(vertex_optimum).epsilon(1e-12));

    double dual_value = 0.0;
    for (int s = 0; s < inst.layout.n_regions(); ++s)
      for (int f = 0; f < 3; ++f) {
        dual_value +=
            res.mu[static_cast<std::size_t>(s) * 3 + f] * inst.demand.at(s, f);
        for (std::size_t j = 0; j < inst.layout.cover[s].size(); ++j) {
          const std::size_t idx = inst.layout.index(s, static_cast<int>(j), f);
          const double cap =
              x.at(inst.layout.cover[s][j], f) ? inst.demand.at(s, f) : 0.0;
          dual_value += res.lambda[idx] * cap;
          // Dual feasibility: mu + lambda covers the objective coefficient.
          CHECK(res.mu[static_cast<std::size_t>(s) * 3 + f] +
                    res.lambda[idx] >=
                model.per_hit_value *
                        model.weight(s, static_cast<int>(j), f) -
                    1e-12);
        }
      }
    CHECK(std::abs(dual_value - res.savings_value) <= 1e-8);
  }
}

TEST_CASE("opt concave: empty placement pins lambda at the origin gradient") {
  const SmallInstance inst = make_instance({{0, 1}}, 2, 1);
  const double eps = 1e-6;
  const SlaveResult res = solve_opt_concave(
      Placement::zeros(2, 1), inst.demand, log_model(eps), inst.layout);
  for (double v : res.y.y) CHECK(v == 0.0);
  for (double l : res.lambda) CHECK(l == doctest::Approx(1.0 / eps));
  CHECK(res.savings_value == 0.0);
}

TEST_CASE("opt concave: symmetric region splits exactly in half") {
  const SmallInstance inst = make_instance({{0, 1}}, 2, 1);
  const double n = inst.demand.at(0, 0);
  const SlaveResult res = solve_opt_concave(
      Placement::full(2, 1), inst.demand, log_model(), inst.layout);
  CHECK(std::abs(res.y.y[inst.layout.index(0, 0, 0)] - n / 2) <= 1e-6 * n);
  CHECK(std::abs(res.y.y[inst.layout.index(0, 1, 0)] - n / 2) <= 1e-6 * n);
  CHECK(res.kkt_residual <= 1e-6);
}

TEST_CASE("opt concave: objective matches a refining grid search") {
  // 2 stations, 2 regions, 2 files, every block dual-covered. Since S is
  // strictly increasing each block is tight at optimum, leaving one split
  // fraction per block; refine a 4-d grid down to resolution 1e-3.
  const SmallInstance inst = make_instance({{0, 1}, {0, 1}}, 2, 2, 1e6, 0.4);
  const SavingsModel model = log_model();
  const Placement x = Placement::full(2, 2);
  const SlaveResult res =
      solve_opt_concave(x, inst.demand, model, inst.layout);

  const double eps = model.smoothing_eps;
  std::array<double, 4> n{};
  for (int s = 0; s < 2; ++s)
    for (int f = 0; f < 2; ++f) n[s * 2 + f] = inst.demand.at(s, f);
  auto objective = [&](const std::array<double, 4>& t) {
    double v0 = 0.0, v1 = 0.0;
    for (int b = 0; b < 4; ++b) {
      v0 += t[b] * n[b];
      v1 += (1.0 - t[b]) * n[b];
    }
    return std::log(v0 + eps) + std::log(v1 + eps) - 2.0 * std::log(eps);
  };

  std::array<double, 4> lo{0, 0, 0, 0}, hi{1, 1, 1, 1}, best{};
  double best_val = -1e300;
  double spacing = 0.0;
  for (int round = 0; round < 4; ++round) {
    const int pts = 17;
    std::array<double, 4> t{};
    std::array<int, 4> idx{};
    spacing = (hi[0] - lo[0]) / (pts - 1);
    for (idx[0] = 0; idx[0] < pts; ++idx[0])
      for (idx[1] = 0; idx[1] < pts; ++idx[1])
        for (idx[2] = 0; idx[2] < pts; ++idx[2])
          for (idx[3] = 0; idx[3] < pts; ++idx[3]) {
            for (int b = 0; b < 4; ++b)
              t[b] = lo[b] + idx[b] * (hi[b] - lo[b]) / (pts - 1);
            const double val = objective(t);
            if (val > best_val) {
              best_val = val;
              best = t;
            }
          }
    for (int b = 0; b < 4; ++b) {  // zoom two cells around the incumbent
      const double width = (hi[b] - lo[b]) / (pts - 1);
      lo[b] = std::max(0.0, best[b] - 2.0 * width);
      hi[b] = std::min(1.0, best[b] + 2.0 * width);
    }
  }
  CHECK(spacing <= 1e-3);
  CHECK(std::abs(res.savings_value - best_val) <= 1e-5);
}

TEST_CASE("kkt residual: perturbing past the cap is detected") {
  const SmallInstance inst = closest_instance();
  const Placement x = Placement::full(3, 4);
  SavingsModel model;
  SlaveResult res = solve_closest(x, inst.demand, model, inst.layout);
  res.y.y[0] += 0.1;  // one coordinate beyond its cap
  CHECK(kkt_residual(x, res.y, res.lambda, res.mu, model, inst.demand) >= 0.1);
}

TEST_CASE("cut validity: duality bound dominates every other placement") {
  const SmallInstance inst = make_instance({{0, 1}, {1, 2}, {2}}, 3, 2);
  Rng rng(31);
  SavingsModel linear;
  const SavingsModel logm = log_model();
  for (int trial = 0; trial < 4; ++trial) {
    const Placement base_x = random_placement(3, 2, rng);
    const SlaveResult base_lin =
        solve_opt_linear(base_x, inst.demand, linear, inst.layout);
    const SlaveResult base_log =
        solve_opt_concave(base_x, inst.demand, logm, inst.layout);
    for_all_placements(3, 2, [&](const Placement& other) {
      const SlaveResult at_lin =
          solve_opt_linear(other, inst.demand, linear, inst.layout);
      CHECK(at_lin.savings_value <=
            cut_value_at(base_lin, inst, other) + 1e-8);
      const SlaveResult at_log =
          solve_opt_concave(other, inst.demand, logm, inst.layout);
      CHECK(at_log.savings_value <=
            cut_value_at(base_log, inst, other) + 1e-6);
    });
  }
}

TEST_CASE("monotonicity: growing the placement never hurts the slave") {
  const SmallInstance inst = make_instance({{0, 1}, {1}}, 2, 2);
  Rng rng(37);
  SavingsModel linear;
  const SavingsModel logm = log_model();
  for (int trial = 0; trial < 15; ++trial) {
    Placement x = random_placement(2, 2, rng);
    Placement larger = x;
    bool grew = false;
    for (auto& bit : larger.x)
      if (!bit && rng.uniform() < 0.5) {
        bit = 1;
        grew = true;
      }
    if (!grew) continue;
    CHECK(solve_opt_linear(larger, inst.demand, linear, inst.layout)
              .savings_value >=
          solve_opt_linear(x, inst.demand, linear, inst.layout).savings_value -
              1e-12);
    CHECK(solve_opt_concave(larger, inst.demand, logm, inst.layout)
              .savings_value >=
          solve_opt_concave(x, inst.demand, logm, inst.layout).savings_value -
              1e-7);
  }
}

TEST_CASE("opt linear with unit weights counts the reachable demand") {
  const SmallInstance inst = make_instance({{0, 1}, {1, 2}, {0, 2}}, 3, 3);
  Rng rng(41);
  SavingsModel model;
  for (int trial = 0; trial < 10; ++trial) {
    const Placement x = random_placement(3, 3, rng);
    const SlaveResult res =
        solve_opt_linear(x, inst.demand, model, inst.layout);
    double reachable = 0.0;
    for (int s = 0; s < inst.layout.n_regions(); ++s)
      for (int f = 0; f < 3; ++f)
        for (std::size_t j = 0; j < inst.layout.cover[s].size(); ++j)
          if (x.at(inst.layout.cover[s][j], f)) {
            reachable += inst.demand.at(s, f);
            break;
          }
    CHECK(res.savings_value == doctest::Approx(reachable).epsilon(1e-12));
  }
}

TEST_CASE("scaling: demand scale passes through the linear slave") {
  const SmallInstance a = make_instance({{0, 1}, {1}}, 2, 2, 1e6, 0.7);
  const SmallInstance b = make_instance({{0, 1}, {1}}, 2, 2, 3e6, 0.7);
  Rng rng(43);
  SavingsModel model;
  for (int trial = 0; trial < 10; ++trial) {
    const Placement x = random_placement(2, 2, rng);
    const double va = solve_opt_linear(x, a.demand, model, a.layout).savings_value;
    const double vb = solve_opt_linear(x, b.demand, model, b.layout).savings_value;
    CHECK(vb == doctest::Approx(3.0 * va).epsilon(1e-12));
  }
}

TEST_CASE("projection: feasibility and optimality certificate") {
  Rng rng(47);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = 1 + static_cast<int>(rng.uniform() * 5);
    std::vector<double> v(k), cap(k);
    for (int i = 0; i < k; ++i) {
      v[i] = rng.uniform(-1.0, 3.0);
      cap[i] = rng.uniform(0.0, 2.0);
    }
    const double budget = rng.uniform(0.0, 3.0);
    std::vector<double> y = v;
    project_capped_simplex(y, cap, budget);
    double sum = 0.0;
    for (int i = 0; i < k; ++i) {
      CHECK(y[i] >= -1e-12);
      CHECK(y[i] <= cap[i] + 1e-12);
      sum += y[i];
    }
    CHECK(sum <= budget + 1e-9);
    // KKT of the projection QP: some shift tau >= 0 reproduces y from v.
    double clamped = 0.0;
    for (int i = 0; i < k; ++i) clamped += std::clamp(v[i], 0.0, cap[i]);
    if (clamped <= budget) {
      for (int i = 0; i < k; ++i)
        CHECK(y[i] == doctest::Approx(std::clamp(v[i], 0.0, cap[i])));
    } else {
      CHECK(sum == doctest::Approx(budget).epsilon(1e-9));
      // Recover tau from any strictly interior coordinate and cross-check.
      double tau = -1.0;
      for (int i = 0; i < k; ++i)
        if (y[i] > 1e-9 && y[i] < cap[i] - 1e-9) tau = v[i] - y[i];
      if (tau >= 0.0)
        for (int i = 0; i < k; ++i)
          CHECK(y[i] ==
                doctest::Approx(std::clamp(v[i] - tau, 0.0, cap[i]))
                    .epsilon(1e-7));
    }
  }
}
