#include "cachelease/association.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cachelease/errors.hpp"

namespace cachelease {

namespace {

void check_dimensions(const Placement& x, const DemandMatrix& demand,
                      const AssignmentLayout& layout) {
  if (x.n_stations != layout.n_stations || x.n_files != layout.n_files)
    throw std::domain_error("placement shape does not match the instance");
  if (demand.n_regions != layout.n_regions() ||
      demand.n_files != layout.n_files)
    throw std::domain_error("demand shape does not match the instance");
}

double block_tol(double n) { return 1e-7 * std::max(1.0, n); }

/// mu/lambda recovery shared by the closed-form and iterative solvers:
/// mu_{s,f} is the gradient level supported by the coordinates still free to
/// grow, lambda picks up the excess gradient of the capped ones.
void recover_duals(const Placement& x, const DemandMatrix& demand,
                   const AssignmentLayout& layout,
                   const std::vector<double>& gradient,
                   const std::vector<double>& y, std::vector<double>& lambda,
                   std::vector<double>& mu) {
  lambda.assign(layout.size(), 0.0);
  mu.assign(static_cast<std::size_t>(layout.n_regions()) * layout.n_files,
            0.0);
  for (int s = 0; s < layout.n_regions(); ++s) {
    const auto& cover = layout.cover[s];
    for (int f = 0; f < layout.n_files; ++f) {
      const double n = demand.at(s, f);
      const double tol = block_tol(n);
      double sum = 0.0;
      double mu_free = -1.0;
      double mu_capped = -1.0;
      for (std::size_t j = 0; j < cover.size(); ++j) {
        const std::size_t idx = layout.index(s, static_cast<int>(j), f);
        const double cap = x.at(cover[j], f) ? n : 0.0;
        sum += y[idx];
        if (y[idx] < cap - tol)
          mu_free = std::max(mu_free, gradient[idx]);
        else if (cap > 0.0)
          mu_capped = mu_capped < 0.0 ? gradient[idx]
                                      : std::min(mu_capped, gradient[idx]);
      }
      double mu_sf = 0.0;
      if (n - sum > tol) {
        mu_sf = 0.0;  // constraint (4) slack
      } else if (mu_free >= 0.0) {
        mu_sf = mu_free;
      } else if (mu_capped >= 0.0) {
        mu_sf = mu_capped;  // all mass capped at a single station
      }
      mu[static_cast<std::size_t>(s) * layout.n_files + f] = mu_sf;
      for (std::size_t j = 0; j < cover.size(); ++j) {
        const std::size_t idx = layout.index(s, static_cast<int>(j), f);
        lambda[idx] = std::max(0.0, gradient[idx] - mu_sf);
      }
    }
  }
}

}  // namespace

std::vector<int> Placement::lease_units(const Catalog& catalog) const {
  if (catalog.size() != n_files)
    throw std::domain_error("catalog size does not match placement");
  std::vector<int> z(n_stations, 0);
  for (int m = 0; m < n_stations; ++m) {
    double bytes = 0.0;
    for (int f = 0; f < n_files; ++f)
      if (at(m, f)) bytes += catalog.files[f].size_b;
    z[m] = static_cast<int>(std::ceil(bytes / catalog.unit_size - 1e-9));
  }
  return z;
}

SlaveResult solve_closest(const Placement& x, const DemandMatrix& demand,
                          const SavingsModel& model,
                          const AssignmentLayout& layout) {
  check_dimensions(x, demand, layout);
  SlaveResult res;
  res.y = Assignment::zeros(layout);
  for (int s = 0; s < layout.n_regions(); ++s) {
    if (layout.cover[s].size() != 1)
      throw std::invalid_argument(
          "solve_closest requires singleton covering sets");
    const int m = layout.cover[s][0];
    for (int f = 0; f < layout.n_files; ++f)
      if (x.at(m, f)) res.y.y[layout.index(s, 0, f)] = demand.at(s, f);
  }
  // With a singleton cover both y <= N x and the population bound coincide at
  // x = 1; report the whole gradient on lambda (mu = 0), the split the cut
  // construction expects.
  res.lambda = savings_gradient(model, res.y);
  res.mu.assign(static_cast<std::size_t>(layout.n_regions()) * layout.n_files,
                0.0);
  res.savings_value = savings_value(model, res.y);
  res.kkt_residual = kkt_residual(x, res.y, res.lambda, res.mu, model, demand);
  return res;
}

SlaveResult solve_opt_linear(const Placement& x, const DemandMatrix& demand,
                             const SavingsModel& model,
                             const AssignmentLayout& layout) {
  check_dimensions(x, demand, layout);
  if (!model.linear())
    throw std::invalid_argument("solve_opt_linear needs a linear model");
  SlaveResult res;
  res.y = Assignment::zeros(layout);
  res.lambda.assign(layout.size(), 0.0);
  res.mu.assign(static_cast<std::size_t>(layout.n_regions()) * layout.n_files,
                0.0);
  const double c = model.per_hit_value;
  for (int s = 0; s < layout.n_regions(); ++s) {
    const auto& cover = layout.cover[s];
    for (int f = 0; f < layout.n_files; ++f) {
      int best = -1;
      double best_value = 0.0;
      for (std::size_t j = 0; j < cover.size(); ++j) {
        if (!x.at(cover[j], f)) continue;
        const double value = c * model.weight(s, static_cast<int>(j), f);
        if (best < 0 || value > best_value) {
          best = static_cast<int>(j);
          best_value = value;
        }
      }
      const double mu_sf = best < 0 ? 0.0 : best_value;
      res.mu[static_cast<std::size_t>(s) * layout.n_files + f] = mu_sf;
      if (best >= 0) res.y.y[layout.index(s, best, f)] = demand.at(s, f);
      for (std::size_t j = 0; j < cover.size(); ++j) {
        const std::size_t idx = layout.index(s, static_cast<int>(j), f);
        const double value = c * model.weight(s, static_cast<int>(j), f);
        res.lambda[idx] = std::max(0.0, value - mu_sf);
      }
    }
  }
  res.savings_value = savings_value(model, res.y);
  res.kkt_residual = kkt_residual(x, res.y, res.lambda, res.mu, model, demand);
  return res;
}

void project_capped_simplex(std::vector<double>& v,
                            const std::vector<double>& cap, double budget) {
  const std::size_t k = v.size();
  const std::vector<double> raw(v);
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    v[i] = std::clamp(v[i], 0.0, cap[i]);
    sum += v[i];
  }
  if (sum <= budget) return;

  // Solve sum_i clamp(raw_i - tau, 0, cap_i) = budget for tau > 0; the curve
  // is piecewise linear and non-increasing with breakpoints at raw_i and
  // raw_i - cap_i. The shift applies to the unclamped values.
  std::vector<double> bps;
  bps.reserve(2 * k + 1);
  bps.push_back(0.0);
  for (std::size_t i = 0; i < k; ++i) {
    if (raw[i] > 0.0) bps.push_back(raw[i]);
    if (raw[i] - cap[i] > 0.0) bps.push_back(raw[i] - cap[i]);
  }
  std::sort(bps.begin(), bps.end());
  auto phi = [&](double tau) {
    double total = 0.0;
    for (std::size_t i = 0; i < k; ++i)
      total += std::clamp(raw[i] - tau, 0.0, cap[i]);
    return total;
  };
  double lo = 0.0, hi = bps.back();
  double phi_lo = phi(lo);
  for (std::size_t b = 1; b < bps.size(); ++b) {
    const double ph = phi(bps[b]);
    if (ph <= budget) {
      hi = bps[b];
      lo = bps[b - 1];
      phi_lo = phi(lo);
      break;
    }
  }
  const double phi_hi = phi(hi);
  double tau = hi;
  if (phi_lo > phi_hi)  // interpolate on the linear segment
    tau = lo + (phi_lo - budget) * (hi - lo) / (phi_lo - phi_hi);
  double out = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    v[i] = std::clamp(raw[i] - tau, 0.0, cap[i]);
    out += v[i];
  }
  // Distribute any fp residue onto a coordinate with room.
  double residue = out - budget;
  for (std::size_t i = 0; i < k && std::abs(residue) > 0.0; ++i) {
    const double adjusted = std::clamp(v[i] - residue, 0.0, cap[i]);
    residue -= v[i] - adjusted;
    v[i] = adjusted;
  }
}

namespace {

/// Projects every (region, file) block of y onto its feasible set.
void project_assignment(std::vector<double>& y, const Placement& x,
                        const DemandMatrix& demand,
                        const AssignmentLayout& layout) {
  std::vector<double> block, caps;
  for (int s = 0; s < layout.n_regions(); ++s) {
    const auto& cover = layout.cover[s];
    block.resize(cover.size());
    caps.resize(cover.size());
    for (int f = 0; f < layout.n_files; ++f) {
      const double n = demand.at(s, f);
      bool any = false;
      for (std::size_t j = 0; j < cover.size(); ++j) {
        block[j] = y[layout.index(s, static_cast<int>(j), f)];
        caps[j] = x.at(cover[j], f) ? n : 0.0;
        any = any || caps[j] > 0.0;
      }
      if (!any) {
        for (std::size_t j = 0; j < cover.size(); ++j)
          y[layout.index(s, static_cast<int>(j), f)] = 0.0;
        continue;
      }
      project_capped_simplex(block, caps, n);
      for (std::size_t j = 0; j < cover.size(); ++j)
        y[layout.index(s, static_cast<int>(j), f)] = block[j];
    }
  }
}

}  // namespace

SlaveResult solve_opt_concave(const Placement& x, const DemandMatrix& demand,
                              const SavingsModel& model,
                              const AssignmentLayout& layout, double tol,
                              int max_iters) {
  check_dimensions(x, demand, layout);
  if (model.linear())
    throw std::invalid_argument(
        "solve_opt_concave needs a strictly concave model");

  SlaveResult res;
  res.y = Assignment::zeros(layout);
  // Start from an equal split of each population over its caching covers.
  for (int s = 0; s < layout.n_regions(); ++s) {
    const auto& cover = layout.cover[s];
    for (int f = 0; f < layout.n_files; ++f) {
      int caching = 0;
      for (std::size_t j = 0; j < cover.size(); ++j)
        if (x.at(cover[j], f)) ++caching;
      if (caching == 0) continue;
      const double share = demand.at(s, f) / caching;
      for (std::size_t j = 0; j < cover.size(); ++j)
        if (x.at(cover[j], f))
          res.y.y[layout.index(s, static_cast<int>(j), f)] = share;
    }
  }

  std::vector<double>& y = res.y.y;
  std::vector<double> volumes = station_volumes(res.y, model);
  std::vector<double> grad = savings_gradient(model, layout, volumes);
  double value = savings_value(model, res.y);

  std::vector<double> y_prev, grad_prev, trial(y.size()), unit(y.size());
  double step = 1.0;
  double residual = std::numeric_limits<double>::infinity();
  int iter = 0;
  for (; iter < max_iters; ++iter) {
    // Unit-step projected gradient as the stationarity measure.
    unit = y;
    for (std::size_t i = 0; i < unit.size(); ++i) unit[i] += grad[i];
    project_assignment(unit, x, demand, layout);
    residual = 0.0;
    for (std::size_t i = 0; i < unit.size(); ++i)
      residual = std::max(residual, std::abs(unit[i] - y[i]));
    if (residual <= tol) break;

    if (!y_prev.empty()) {  // Barzilai-Borwein step from the last move
      double ss = 0.0, sg = 0.0;
      for (std::size_t i = 0; i < y.size(); ++i) {
        const double dy = y[i] - y_prev[i];
        ss += dy * dy;
        sg += dy * (grad_prev[i] - grad[i]);
      }
      if (sg > 1e-300) step = std::clamp(ss / sg, 1e-12, 1e12);
    }

    y_prev = y;
    grad_prev = grad;
    double t = step;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      trial = y;
      for (std::size_t i = 0; i < trial.size(); ++i) trial[i] += t * grad[i];
      project_assignment(trial, x, demand, layout);
      double gain_bound = 0.0;
      for (std::size_t i = 0; i < trial.size(); ++i)
        gain_bound += grad[i] * (trial[i] - y[i]);
      Assignment trial_assignment{&layout, trial};
      const double trial_value = savings_value(model, trial_assignment);
      if (trial_value >= value + 1e-4 * gain_bound ||
          std::abs(gain_bound) <= 1e-14 * (1.0 + std::abs(value))) {
        y = trial;
        value = trial_value;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;  // step underflow; residual check decides below
    volumes = station_volumes(res.y, model);
    grad = savings_gradient(model, layout, volumes);
  }

  if (residual > tol) {
    // Re-measure before giving up; the last accepted step may have landed
    // inside tolerance.
    unit = y;
    for (std::size_t i = 0; i < unit.size(); ++i) unit[i] += grad[i];
    project_assignment(unit, x, demand, layout);
    residual = 0.0;
    for (std::size_t i = 0; i < unit.size(); ++i)
      residual = std::max(residual, std::abs(unit[i] - y[i]));
    if (residual > tol)
      throw ConvergenceError("association solve stalled at residual " +
                                 std::to_string(residual),
                             y, residual);
  }

  res.iterations = iter;
  recover_duals(x, demand, layout, grad, y, res.lambda, res.mu);
  res.savings_value = value;
  res.kkt_residual = kkt_residual(x, res.y, res.lambda, res.mu, model, demand);
  return res;
}

SlaveResult solve_slave(Policy policy, const Placement& x,
                        const DemandMatrix& demand, const SavingsModel& model,
                        const AssignmentLayout& layout, double tol,
                        int max_iters) {
  if (policy == Policy::kClosest)
    return solve_closest(x, demand, model, layout);
  if (model.linear()) return solve_opt_linear(x, demand, model, layout);
  return solve_opt_concave(x, demand, model, layout, tol, max_iters);
}

double kkt_residual(const Placement& x, const Assignment& y,
                    const std::vector<double>& lambda,
                    const std::vector<double>& mu, const SavingsModel& model,
                    const DemandMatrix& demand) {
  const AssignmentLayout& layout = *y.layout;
  const std::vector<double> grad = savings_gradient(model, y);
  double res = 0.0;
  for (int s = 0; s < layout.n_regions(); ++s) {
    const auto& cover = layout.cover[s];
    for (int f = 0; f < layout.n_files; ++f) {
      const double n = demand.at(s, f);
      const double mu_sf =
          mu[static_cast<std::size_t>(s) * layout.n_files + f];
      res = std::max(res, -mu_sf);
      const double itol = block_tol(n);
      double sum = 0.0;
      for (std::size_t j = 0; j < cover.size(); ++j) {
        const std::size_t idx = layout.index(s, static_cast<int>(j), f);
        const double cap = x.at(cover[j], f) ? n : 0.0;
        const double yi = y.y[idx];
        sum += yi;
        res = std::max(res, -yi);            // y >= 0
        res = std::max(res, yi - cap);       // y <= N x
        res = std::max(res, -lambda[idx]);   // lambda >= 0
        if (yi > itol && yi < cap - itol)    // stationarity, interior only
          res = std::max(res, std::abs(grad[idx] - mu_sf - lambda[idx]));
        res = std::max(res, lambda[idx] * std::max(0.0, cap - yi));
      }
      res = std::max(res, sum - n);                        // constraint (4)
      res = std::max(res, mu_sf * std::max(0.0, n - sum));  // slackness
    }
  }
  return res;
}

}  // namespace cachelease
