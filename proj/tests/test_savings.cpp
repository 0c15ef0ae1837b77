#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "cachelease/savings.hpp"
#include "test_util.hpp"

using namespace cachelease;
using testutil::SmallInstance;
using testutil::make_instance;
using testutil::random_assignment;

namespace {

SmallInstance overlap_instance() {
  // 3 stations; middle regions are multi-covered.
  return make_instance({{0}, {0, 1}, {1, 2}, {2}}, 3, 2);
}

SavingsModel log_model(double eps = 1e-6) {
  SavingsModel m;
  m.family = SavingsFamily::kLog;
  m.smoothing_eps = eps;
  return m;
}

}  // namespace

TEST_CASE("volume: zero assignment") {
  const SmallInstance inst = overlap_instance();
  const Assignment y = Assignment::zeros(inst.layout);
  SavingsModel model;
  for (int m = 0; m < 3; ++m) CHECK(station_volume(y, m, model) == 0.0);
  CHECK_THROWS_AS(station_volume(y, 9, model), std::domain_error);
}

TEST_CASE("volume: a single entry passes through") {
  const SmallInstance inst = overlap_instance();
  Assignment y = Assignment::zeros(inst.layout);
  y.y[inst.layout.index(1, 0, 1)] = 2.5;  // region 1, station 0, file 1
  SavingsModel model;
  CHECK(station_volume(y, 0, model) == 2.5);
  CHECK(station_volume(y, 1, model) == 0.0);
}

TEST_CASE("volume: sparse accumulation matches a dense triple loop") {
  const SmallInstance inst = make_instance({{0, 2}, {1}, {0, 1, 3}, {2, 3}},
                                           4, 3);
  Rng rng(5);
  const Assignment y = random_assignment(inst, rng);
  SavingsModel weighted;
  auto table = std::make_shared<WeightTable>();
  table->w.resize(inst.regions.size());
  for (std::size_t s = 0; s < inst.regions.size(); ++s)
    for (std::size_t j = 0; j < inst.regions[s].covering_set.size(); ++j)
      table->w[s].push_back(0.5 + rng.uniform());
  weighted.station_weights = table;

  for (int m = 0; m < 4; ++m) {
    double dense = 0.0;
    for (int s = 0; s < inst.layout.n_regions(); ++s)
      for (std::size_t j = 0; j < inst.layout.cover[s].size(); ++j)
        for (int f = 0; f < inst.layout.n_files; ++f)
          if (inst.layout.cover[s][j] == m)
            dense += table->w[s][j] *
                     y.y[inst.layout.index(s, static_cast<int>(j), f)];
    CHECK(station_volume(y, m, weighted) ==
          doctest::Approx(dense).epsilon(1e-13));
  }
}

TEST_CASE("value: linear at unit rate is the total volume") {
  const SmallInstance inst = overlap_instance();
  Assignment y = Assignment::zeros(inst.layout);
  y.y[inst.layout.index(0, 0, 0)] = 3.0;
  y.y[inst.layout.index(2, 1, 1)] = 4.0;
  SavingsModel model;  // linear, c = 1
  CHECK(savings_value(model, y) == doctest::Approx(7.0));
}

TEST_CASE("value: shifted log vanishes on the empty assignment") {
  const SmallInstance inst = overlap_instance();
  const Assignment y = Assignment::zeros(inst.layout);
  CHECK(savings_value(log_model(), y) == 0.0);
}

TEST_CASE("value: shifted log against the scalar formula") {
  const SmallInstance inst = make_instance({{0}, {1}}, 2, 1);
  Assignment y = Assignment::zeros(inst.layout);
  y.y[inst.layout.index(0, 0, 0)] = 1.0;
  y.y[inst.layout.index(1, 0, 0)] = 2.0;
  const double eps = 1e-6;
  const double expected =
      std::log(1.0 + eps) + std::log(2.0 + eps) - 2.0 * std::log(eps);
  CHECK(savings_value(log_model(eps), y) ==
        doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("gradient: linear model is constant c times weight") {
  const SmallInstance inst = overlap_instance();
  Rng rng(7);
  Assignment y = random_assignment(inst, rng);
  SavingsModel model;
  model.per_hit_value = 2.0;
  for (double g : savings_gradient(model, y)) CHECK(g == 2.0);
}

TEST_CASE("gradient: log model is 1/(v+eps) per station") {
  const SmallInstance inst = overlap_instance();
  Rng rng(8);
  Assignment y = random_assignment(inst, rng);
  const SavingsModel model = log_model();
  const auto volumes = station_volumes(y, model);
  const auto grad = savings_gradient(model, y);
  for (int s = 0; s < inst.layout.n_regions(); ++s)
    for (std::size_t j = 0; j < inst.layout.cover[s].size(); ++j)
      for (int f = 0; f < inst.layout.n_files; ++f) {
        const int m = inst.layout.cover[s][j];
        CHECK(grad[inst.layout.index(s, static_cast<int>(j), f)] ==
              doctest::Approx(1.0 / (volumes[m] + 1e-6)).epsilon(1e-13));
      }
}

TEST_CASE("gradient: central finite differences on 100 random points") {
  const SmallInstance inst = make_instance({{0, 1}, {1, 2}, {0, 2}, {2}}, 3, 2);
  auto table = std::make_shared<WeightTable>();
  Rng wrng(123);
  table->w.resize(inst.regions.size());
  for (std::size_t s = 0; s < inst.regions.size(); ++s)
    for (std::size_t j = 0; j < inst.regions[s].covering_set.size(); ++j)
      table->w[s].push_back(0.5 + wrng.uniform());

  std::vector<SavingsModel> models;
  models.emplace_back();  // linear
  models.push_back(log_model());
  SavingsModel weighted_log = log_model();
  weighted_log.station_weights = table;
  models.push_back(weighted_log);
  SavingsModel weighted_linear;
  weighted_linear.station_weights = table;
  models.push_back(weighted_linear);

  const double h = 1e-5;
  for (const SavingsModel& model : models) {
    Rng rng(42);
    for (int point = 0; point < 100; ++point) {
      Assignment y = Assignment::zeros(inst.layout);
      // Stay on well-conditioned ground: every volume is at least ~0.5.
      for (double& v : y.y) v = 0.5 + rng.uniform();
      const auto grad = savings_gradient(model, y);
      for (std::size_t i = 0; i < y.y.size(); ++i) {
        Assignment up = y, down = y;
        up.y[i] += h;
        down.y[i] -= h;
        const double fd =
            (savings_value(model, up) - savings_value(model, down)) /
            (2.0 * h);
        CHECK(std::abs(fd - grad[i]) <= 1e-5 * std::max(1.0, std::abs(grad[i])));
      }
    }
  }
}

TEST_CASE("hit ratio: full service, empty service, random brute force") {
  const SmallInstance inst = overlap_instance();
  // Full placement under CLOSEST-like service: every population fully served.
  Assignment y = Assignment::zeros(inst.layout);
  for (int s = 0; s < inst.layout.n_regions(); ++s)
    for (int f = 0; f < inst.layout.n_files; ++f)
      y.y[inst.layout.index(s, 0, f)] = inst.demand.at(s, f);
  CHECK(hit_ratio(y, inst.demand) == doctest::Approx(1.0).epsilon(1e-12));

  CHECK(hit_ratio(Assignment::zeros(inst.layout), inst.demand) == 0.0);

  Rng rng(3);
  const Assignment r = random_assignment(inst, rng);
  double served = 0.0;
  for (double v : r.y) served += v;
  CHECK(hit_ratio(r, inst.demand) ==
        doctest::Approx(served / inst.demand.total).epsilon(1e-13));

  DemandMatrix empty;
  empty.total = 0.0;
  CHECK_THROWS_AS(hit_ratio(y, empty), std::domain_error);
}

TEST_CASE("property: concavity along random chords") {
  const SmallInstance inst = overlap_instance();
  Rng rng(11);
  for (const SavingsModel& model : {SavingsModel{}, log_model()}) {
    for (int trial = 0; trial < 50; ++trial) {
      const Assignment y1 = random_assignment(inst, rng);
      const Assignment y2 = random_assignment(inst, rng);
      const double t = rng.uniform();
      Assignment mix = Assignment::zeros(inst.layout);
      for (std::size_t i = 0; i < mix.y.size(); ++i)
        mix.y[i] = t * y1.y[i] + (1.0 - t) * y2.y[i];
      CHECK(savings_value(model, mix) >=
            t * savings_value(model, y1) +
                (1.0 - t) * savings_value(model, y2) - 1e-9);
    }
  }
}

TEST_CASE("property: strictly positive gradient makes S increasing") {
  const SmallInstance inst = overlap_instance();
  Rng rng(13);
  for (const SavingsModel& model : {SavingsModel{}, log_model()}) {
    Assignment y = random_assignment(inst, rng);
    const auto grad = savings_gradient(model, y);
    for (double g : grad) CHECK(g > 0.0);
    const double base = savings_value(model, y);
    Assignment bumped = y;
    bumped.y[2] += 0.125;
    CHECK(savings_value(model, bumped) > base);
  }
}

TEST_CASE("property: linear is redistribution-invariant, log prefers the "
          "emptier station") {
  const SmallInstance inst = make_instance({{0, 1}}, 2, 1);
  const double n = inst.demand.at(0, 0);
  Assignment skew = Assignment::zeros(inst.layout);
  skew.y[inst.layout.index(0, 0, 0)] = 0.9 * n;
  skew.y[inst.layout.index(0, 1, 0)] = 0.1 * n;
  Assignment even = Assignment::zeros(inst.layout);
  even.y[inst.layout.index(0, 0, 0)] = 0.5 * n;
  even.y[inst.layout.index(0, 1, 0)] = 0.5 * n;

  SavingsModel linear;
  CHECK(savings_value(linear, skew) ==
        doctest::Approx(savings_value(linear, even)).epsilon(1e-13));
  CHECK(savings_value(log_model(), even) > savings_value(log_model(), skew));
}
