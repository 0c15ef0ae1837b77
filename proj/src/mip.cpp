#include "cachelease/mip.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

#include "cachelease/errors.hpp"

namespace cachelease {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kGainTol = 1e-9;
constexpr double kPivotTol = 1e-11;

/// Bounded-variable primal simplex on max c'u s.t. A u <= b, l <= u <= up,
/// full-tableau form with slack starting basis. Row/column counts here are
/// small (cuts + stations), columns are the placement binaries.
class BoundedSimplex {
 public:
  BoundedSimplex(std::vector<std::vector<double>> a, std::vector<double> b,
                 std::vector<double> c, std::vector<double> lo,
                 std::vector<double> up)
      : m_(static_cast<int>(a.size())),
        n_(static_cast<int>(c.size())),
        total_(n_ + m_),
        b_(std::move(b)),
        obj_(std::move(c)),
        lo_(std::move(lo)),
        up_(std::move(up)) {
    lo_.resize(total_, 0.0);
    up_.resize(total_, kInf);
    obj_.resize(total_, 0.0);
    tableau_.assign(static_cast<std::size_t>(m_) * total_, 0.0);
    for (int i = 0; i < m_; ++i) {
      for (int j = 0; j < n_; ++j) at(i, j) = a[i][j];
      at(i, n_ + i) = 1.0;
    }
  }

  enum class Status { kOptimal, kInfeasible, kUnbounded };

  /// start_upper marks structural variables whose initial nonbasic position
  /// is their upper bound (used to make lower-bound rows slack-feasible).
  Status solve(const std::vector<bool>* start_upper = nullptr) {
    state_.assign(total_, AtLower);
    basis_.resize(m_);
    row_of_.assign(total_, -1);
    value_.assign(total_, 0.0);
    reduced_.assign(obj_.begin(), obj_.end());
    for (int j = 0; j < n_; ++j) {
      const bool at_up =
          start_upper && (*start_upper)[j] && up_[j] < kInf;
      state_[j] = at_up ? AtUpper : AtLower;
      value_[j] = at_up ? up_[j] : lo_[j];
    }
    for (int i = 0; i < m_; ++i) {
      basis_[i] = n_ + i;
      row_of_[n_ + i] = i;
      state_[n_ + i] = Basic;
      double s = b_[i];
      for (int j = 0; j < n_; ++j) s -= at(i, j) * value_[j];
      value_[n_ + i] = s;
      if (s < -1e-7) return Status::kInfeasible;
      if (s < 0.0) value_[n_ + i] = 0.0;
    }

    bool bland = false;
    long degenerate_run = 0;
    const long bland_trigger = 10L * total_;
    const long iter_cap = 2000L + 60L * total_;
    for (long iter = 0; iter < iter_cap; ++iter) {
      // Entering variable: best rate of improvement (Dantzig), or the first
      // improving index once Bland's rule is on.
      int enter = -1;
      double best_gain = kGainTol;
      for (int j = 0; j < total_; ++j) {
        if (state_[j] == Basic || up_[j] - lo_[j] <= 0.0) continue;
        const double gain =
            state_[j] == AtLower ? reduced_[j] : -reduced_[j];
        if (gain > best_gain) {
          enter = j;
          best_gain = gain;
          if (bland) break;
        }
      }
      if (enter < 0) return Status::kOptimal;

      const double dir = state_[enter] == AtLower ? 1.0 : -1.0;
      double step = up_[enter] - lo_[enter];  // bound-flip distance
      int leave_row = -1;
      for (int i = 0; i < m_; ++i) {
        const double a = dir * at(i, enter);
        double limit = kInf;
        if (a > kPivotTol)
          limit = (value_[basis_[i]] - lo_[basis_[i]]) / a;
        else if (a < -kPivotTol && up_[basis_[i]] < kInf)
          limit = (up_[basis_[i]] - value_[basis_[i]]) / (-a);
        if (limit < step - 1e-12) {
          step = limit;
          leave_row = i;
        } else if (leave_row >= 0 && limit < step + 1e-12 &&
                   std::abs(at(i, enter)) >
                       std::abs(at(leave_row, enter))) {
          leave_row = i;  // same limit, stabler pivot
        }
      }
      if (step >= kInf) return Status::kUnbounded;
      if (step <= 1e-12) {
        if (++degenerate_run >= bland_trigger) bland = true;
      } else {
        degenerate_run = 0;
      }

      for (int i = 0; i < m_; ++i)
        value_[basis_[i]] -= dir * step * at(i, enter);
      if (leave_row < 0) {  // bound flip
        state_[enter] = state_[enter] == AtLower ? AtUpper : AtLower;
        value_[enter] = state_[enter] == AtLower ? lo_[enter] : up_[enter];
        continue;
      }

      const int leave = basis_[leave_row];
      const double pivot = at(leave_row, enter);
      state_[leave] = dir * pivot > 0.0 ? AtLower : AtUpper;
      value_[leave] = state_[leave] == AtLower ? lo_[leave] : up_[leave];
      row_of_[leave] = -1;
      basis_[leave_row] = enter;
      row_of_[enter] = leave_row;
      state_[enter] = Basic;
      value_[enter] =
          (dir > 0.0 ? lo_[enter] : up_[enter]) + dir * step;

      const double inv = 1.0 / pivot;
      double* prow = &tableau_[static_cast<std::size_t>(leave_row) * total_];
      for (int j = 0; j < total_; ++j) prow[j] *= inv;
      for (int i = 0; i < m_; ++i) {
        if (i == leave_row) continue;
        const double factor = at(i, enter);
        if (factor == 0.0) continue;
        double* row = &tableau_[static_cast<std::size_t>(i) * total_];
        for (int j = 0; j < total_; ++j) row[j] -= factor * prow[j];
      }
      const double dfactor = reduced_[enter];
      if (dfactor != 0.0)
        for (int j = 0; j < total_; ++j) reduced_[j] -= dfactor * prow[j];
    }
    // Iteration cap acts as the numerical-failure signal; the caller retries
    // with perturbed bounds.
    return Status::kUnbounded;
  }

  double objective() const {
    double v = 0.0;
    for (int j = 0; j < n_; ++j) v += obj_[j] * value_[j];
    return v;
  }
  double value(int j) const { return value_[j]; }

 private:
  enum VarState : std::uint8_t { Basic, AtLower, AtUpper };

  double& at(int i, int j) {
    return tableau_[static_cast<std::size_t>(i) * total_ + j];
  }

  int m_, n_, total_;
  std::vector<double> b_, obj_, lo_, up_;
  std::vector<double> tableau_;
  std::vector<double> reduced_;
  std::vector<double> value_;
  std::vector<int> basis_;
  std::vector<int> row_of_;
  std::vector<VarState> state_;
};

struct LpData {
  std::vector<std::vector<double>> a;
  std::vector<double> b;
  std::vector<double> c;
};

/// Variables: column 0 is gamma, then x_{m,f} row-major. The lease z is
/// eliminated: continuous z_m = sum_f b_f x / b_MU is optimal for q_m >= 0,
/// which folds the lease cost into the x objective and turns the memory
/// bound into sum_f b_f x_{m,f} <= b_MU k_m.
LpData build_lp(const MasterProblem& p) {
  const int nx = p.n_stations * p.n_files;
  const int rows = static_cast<int>(p.cuts.size()) + p.n_stations;
  LpData lp;
  lp.a.assign(rows, std::vector<double>(1 + nx, 0.0));
  lp.b.assign(rows, 0.0);
  lp.c.assign(1 + nx, 0.0);
  lp.c[0] = 1.0;
  for (int m = 0; m < p.n_stations; ++m)
    for (int f = 0; f < p.n_files; ++f)
      lp.c[1 + m * p.n_files + f] = -p.price_q[m] * p.size_b[f] / p.unit_size;
  for (std::size_t t = 0; t < p.cuts.size(); ++t) {
    lp.a[t][0] = 1.0;
    for (int j = 0; j < nx; ++j) lp.a[t][1 + j] = -p.cuts[t].coeff[j];
    lp.b[t] = p.cuts[t].gamma_const;
  }
  for (int m = 0; m < p.n_stations; ++m) {
    const int row = static_cast<int>(p.cuts.size()) + m;
    for (int f = 0; f < p.n_files; ++f)
      lp.a[row][1 + m * p.n_files + f] = p.size_b[f];
    lp.b[row] = p.unit_size * p.capacity_k[m];
  }
  return lp;
}

/// Integer bounds on lease counts, usable with unit file sizes where both
/// the per-station and the total unit count are integral in every integer
/// solution. ub entries of -1 mean unbounded.
struct UnitBounds {
  long lb = 0;
  long ub = -1;
  std::vector<int> st_lb;  // empty until station branching starts
  std::vector<int> st_ub;

  bool station_bounded() const { return !st_lb.empty(); }
  void ensure_stations(int n) {
    if (st_lb.empty()) {
      st_lb.assign(n, 0);
      st_ub.assign(n, -1);
    }
  }
};

/// Solves the relaxation with optional fixings and unit-count bounds. Upper
/// count bounds tighten the capacity rows in place; lower bounds add >= rows
/// and the simplex starts from a raised point (heaviest cut-coefficient mass
/// first, capacity-aware) that keeps every initial slack nonnegative.
LpSolution solve_lp_internal(const MasterProblem& problem, const LpData& lp,
                             const std::vector<std::int8_t>& fixings,
                             const UnitBounds& units,
                             const std::vector<int>& colsum_order) {
  const int nx = problem.n_stations * problem.n_files;
  const int n_cuts = static_cast<int>(problem.cuts.size());
  std::vector<double> lo(1 + nx, 0.0), up(1 + nx, 1.0);
  up[0] = problem.gamma_cap;
  std::vector<int> forced_one(problem.n_stations, 0);
  long forced_total = 0;
  for (int j = 0; j < nx; ++j) {
    if (fixings.empty() || fixings[j] < 0) continue;
    lo[1 + j] = up[1 + j] = static_cast<double>(fixings[j]);
    if (fixings[j] == 1) {
      ++forced_one[j / problem.n_files];
      ++forced_total;
    }
  }

  std::vector<std::vector<double>> a = lp.a;
  std::vector<double> b = lp.b;
  auto count_cap = [&](int m) {
    long cap = problem.capacity_k[m];
    if (units.station_bounded() && units.st_ub[m] >= 0)
      cap = std::min<long>(cap, units.st_ub[m]);
    return cap;
  };
  if (units.station_bounded())
    for (int m = 0; m < problem.n_stations; ++m)
      b[n_cuts + m] =
          std::min(b[n_cuts + m], problem.unit_size * count_cap(m));
  if (units.ub >= 0) {
    a.emplace_back(1 + nx, 0.0);
    for (int j = 0; j < nx; ++j) a.back()[1 + j] = 1.0;
    b.push_back(static_cast<double>(units.ub));
  }

  // Raised starting point serving all lower-bound rows at once.
  std::vector<bool> start_upper;
  const bool any_lb =
      units.lb > 0 || (units.station_bounded() &&
                       *std::max_element(units.st_lb.begin(),
                                         units.st_lb.end()) > 0);
  if (any_lb) {
    start_upper.assign(1 + nx, false);
    std::vector<long> used(forced_one.begin(), forced_one.end());
    long total_used = forced_total;
    auto raise_in_station = [&](int m, long target) {
      for (int j : colsum_order) {
        if (used[m] >= target) return;
        if (j / problem.n_files != m) continue;
        if (!fixings.empty() && fixings[j] >= 0) continue;
        if (start_upper[1 + j]) continue;
        start_upper[1 + j] = true;
        ++used[m];
        ++total_used;
      }
    };
    if (units.station_bounded())
      for (int m = 0; m < problem.n_stations; ++m) {
        if (units.st_lb[m] > count_cap(m))
          return {LpStatus::kInfeasible, -kInf, 0.0, {}, {}};
        raise_in_station(m, units.st_lb[m]);
        if (used[m] < units.st_lb[m])
          return {LpStatus::kInfeasible, -kInf, 0.0, {}, {}};
      }
    for (int j : colsum_order) {
      if (total_used >= units.lb) break;
      if (!fixings.empty() && fixings[j] >= 0) continue;
      if (start_upper[1 + j]) continue;
      const int m = j / problem.n_files;
      if (used[m] >= count_cap(m)) continue;
      start_upper[1 + j] = true;
      ++used[m];
      ++total_used;
    }
    if (total_used < units.lb)
      return {LpStatus::kInfeasible, -kInf, 0.0, {}, {}};
    if (units.ub >= 0 && total_used > units.ub)
      return {LpStatus::kInfeasible, -kInf, 0.0, {}, {}};

    if (units.station_bounded())
      for (int m = 0; m < problem.n_stations; ++m) {
        if (units.st_lb[m] <= 0) continue;
        a.emplace_back(1 + nx, 0.0);
        for (int f = 0; f < problem.n_files; ++f)
          a.back()[1 + m * problem.n_files + f] = -1.0;
        b.push_back(-static_cast<double>(units.st_lb[m]));
      }
    if (units.lb > 0) {
      a.emplace_back(1 + nx, 0.0);
      for (int j = 0; j < nx; ++j) a.back()[1 + j] = -1.0;
      b.push_back(-static_cast<double>(units.lb));
    }
  }

  for (int attempt = 0; attempt < 2; ++attempt) {
    std::vector<double> b2 = b;
    if (attempt == 1)  // relax rows slightly: the bound stays valid
      for (double& v : b2) v += 1e-9 * (1.0 + std::abs(v));
    BoundedSimplex simplex(a, b2, lp.c, lo, up);
    const auto status =
        simplex.solve(start_upper.empty() ? nullptr : &start_upper);
    if (status == BoundedSimplex::Status::kInfeasible)
      return {LpStatus::kInfeasible, -kInf, 0.0, {}, {}};
    if (status == BoundedSimplex::Status::kUnbounded) {
      if (attempt == 0) continue;
      throw UnboundedError("master LP relaxation did not terminate");
    }
    LpSolution sol;
    sol.status = attempt == 0 ? LpStatus::kOptimal : LpStatus::kPerturbed;
    sol.bound = simplex.objective();
    sol.gamma = simplex.value(0);
    sol.x.resize(nx);
    for (int j = 0; j < nx; ++j) sol.x[j] = simplex.value(1 + j);
    sol.z.resize(problem.n_stations, 0.0);
    for (int m = 0; m < problem.n_stations; ++m) {
      double bytes = 0.0;
      for (int f = 0; f < problem.n_files; ++f)
        bytes += problem.size_b[f] * sol.x[m * problem.n_files + f];
      sol.z[m] = bytes / problem.unit_size;
    }
    return sol;
  }
  throw UnboundedError("master LP relaxation did not terminate");
}

}  // namespace

MasterProblem MasterProblem::from_instance(
    const std::vector<Station>& stations, const Catalog& catalog,
    double gamma_cap) {
  MasterProblem p;
  p.n_stations = static_cast<int>(stations.size());
  p.n_files = catalog.size();
  p.gamma_cap = gamma_cap;
  p.price_q.resize(stations.size());
  p.capacity_k.resize(stations.size());
  for (std::size_t m = 0; m < stations.size(); ++m) {
    p.price_q[m] = stations[m].price_q;
    p.capacity_k[m] = stations[m].capacity_k;
  }
  p.size_b.resize(catalog.files.size());
  for (std::size_t f = 0; f < catalog.files.size(); ++f)
    p.size_b[f] = catalog.files[f].size_b;
  p.unit_size = catalog.unit_size;
  return p;
}

double master_gamma_at(const MasterProblem& problem,
                       const std::vector<double>& x) {
  double gamma = problem.gamma_cap;
  for (const Cut& cut : problem.cuts) {
    double rhs = cut.gamma_const;
    for (std::size_t j = 0; j < x.size(); ++j) rhs += cut.coeff[j] * x[j];
    gamma = std::min(gamma, rhs);
  }
  return std::max(0.0, gamma);
}

LpSolution solve_lp_relaxation(const MasterProblem& problem,
                               const std::vector<std::int8_t>& fixings) {
  if (problem.cuts.empty() && !std::isfinite(problem.gamma_cap))
    throw UnboundedError("master has no cut and no finite gamma cap");
  return solve_lp_internal(problem, build_lp(problem), fixings, UnitBounds{},
                           {});
}

namespace {

struct Node {
  double bound = 0.0;  // parent LP bound, valid for this subtree
  long id = 0;
  std::vector<std::int8_t> fixings;
  UnitBounds units;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound < b.bound;  // max-heap on bound
    return a.id > b.id;
  }
};

struct Incumbent {
  double objective = -kInf;
  std::vector<std::int8_t> x;
  double gamma = 0.0;
};

bool capacity_ok(const MasterProblem& p, const std::vector<std::int8_t>& fix,
                 int station) {
  double bytes = 0.0;
  for (int f = 0; f < p.n_files; ++f)
    if (fix[station * p.n_files + f] == 1) bytes += p.size_b[f];
  return bytes <= p.unit_size * p.capacity_k[station] + 1e-9;
}

}  // namespace

MasterSolution solve_master(const MasterProblem& problem) {
  const int nx = problem.n_stations * problem.n_files;
  if (problem.cuts.empty() && !std::isfinite(problem.gamma_cap))
    throw UnboundedError("master needs a cut or a finite gamma cap");

  const LpData lp_data = build_lp(problem);
  bool unit_sizes = true;
  for (double b : problem.size_b) unit_sizes &= b == problem.unit_size;

  std::vector<double> colsum(nx, 0.0);
  for (const Cut& cut : problem.cuts)
    for (int j = 0; j < nx; ++j) colsum[j] += cut.coeff[j];
  std::vector<int> colsum_order(nx);
  for (int j = 0; j < nx; ++j) colsum_order[j] = j;
  std::stable_sort(colsum_order.begin(), colsum_order.end(),
                   [&](int a, int b) { return colsum[a] > colsum[b]; });

  auto leaf_objective = [&](const std::vector<std::int8_t>& x, double& gamma,
                            std::vector<int>& z) {
    std::vector<double> xd(x.begin(), x.end());
    gamma = master_gamma_at(problem, xd);
    z.assign(problem.n_stations, 0);
    double cost = 0.0;
    for (int m = 0; m < problem.n_stations; ++m) {
      double bytes = 0.0;
      for (int f = 0; f < problem.n_files; ++f)
        if (x[m * problem.n_files + f]) bytes += problem.size_b[f];
      z[m] = static_cast<int>(std::ceil(bytes / problem.unit_size - 1e-9));
      cost += problem.price_q[m] * z[m];
    }
    return gamma - cost;
  };

  Incumbent incumbent;
  auto offer_incumbent = [&](const std::vector<std::int8_t>& x) {
    double gamma = 0.0;
    std::vector<int> z;
    const double obj = leaf_objective(x, gamma, z);
    if (obj > incumbent.objective + 1e-12) {
      incumbent.objective = obj;
      incumbent.x = x;
      incumbent.gamma = gamma;
    }
  };
  offer_incumbent(std::vector<std::int8_t>(nx, 0));

  // Rounds an LP point to a capacity-feasible placement; both the rounded
  // point and its support prefix are offered as incumbents.
  auto dive = [&](const LpSolution& lp, const std::vector<std::int8_t>& fix) {
    std::vector<std::int8_t> x(nx, 0);
    std::vector<double> used(problem.n_stations, 0.0);
    std::vector<int> order(nx);
    for (int j = 0; j < nx; ++j) order[j] = j;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      if (lp.x[a] != lp.x[b]) return lp.x[a] > lp.x[b];
      return colsum[a] > colsum[b];
    });
    for (int j = 0; j < nx; ++j)
      if (!fix.empty() && fix[j] == 1) {
        x[j] = 1;
        used[j / problem.n_files] += problem.size_b[j % problem.n_files];
      }
    for (int j : order) {
      if (lp.x[j] < 0.5) break;
      if (!fix.empty() && fix[j] >= 0) continue;
      const int station = j / problem.n_files;
      const double size = problem.size_b[j % problem.n_files];
      if (used[station] + size >
          problem.unit_size * problem.capacity_k[station] + 1e-9)
        continue;
      x[j] = 1;
      used[station] += size;
    }
    offer_incumbent(x);
  };

  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  long next_id = 0;
  open.push({kInf, next_id++, std::vector<std::int8_t>(nx, -1), {}});
  long node_count = 0;
  double root_bound = kInf;

  while (!open.empty()) {
    Node node = open.top();
    open.pop();
    if (node.bound <= incumbent.objective + 1e-9) continue;
    if (++node_count > problem.node_limit)
      throw ResourceLimitError("master branch-and-bound node limit exceeded");

    const LpSolution lp = solve_lp_internal(problem, lp_data, node.fixings,
                                            node.units, colsum_order);
    if (lp.status == LpStatus::kInfeasible) continue;
    if (node.id == 0) root_bound = lp.bound;
    if (lp.bound <= incumbent.objective + 1e-9) continue;
    if (node.id == 0 || node_count % 64 == 0) dive(lp, node.fixings);
    if (lp.bound <= incumbent.objective + 1e-9) continue;

    // Lease counts are integral at unit sizes; branching on the total and
    // then on per-station counts resolves the price-vs-gamma tradeoff far
    // higher in the tree than any single placement bit can.
    if (unit_sizes) {
      double total = 0.0;
      for (int j = 0; j < nx; ++j) total += lp.x[j];
      const double floor_total = std::floor(total);
      if (total - floor_total > 1e-7 && total - floor_total < 1.0 - 1e-7) {
        Node below{lp.bound, next_id++, node.fixings, node.units};
        below.units.ub = static_cast<long>(floor_total);
        if (node.units.ub >= 0)
          below.units.ub = std::min(below.units.ub, node.units.ub);
        Node above{lp.bound, next_id++, node.fixings, node.units};
        above.units.lb =
            std::max(node.units.lb, static_cast<long>(floor_total) + 1);
        if (below.units.ub >= below.units.lb) open.push(std::move(below));
        if (above.units.ub < 0 || above.units.lb <= above.units.ub)
          open.push(std::move(above));
        continue;
      }
      int station = -1;
      double best_frac = 1e-7;
      for (int m = 0; m < problem.n_stations; ++m) {
        const double zfrac = lp.z[m] - std::floor(lp.z[m]);
        const double frac = std::min(zfrac, 1.0 - zfrac);
        if (frac > best_frac + 1e-12) {
          station = m;
          best_frac = frac;
        }
      }
      if (station >= 0) {
        const long floor_z = static_cast<long>(std::floor(lp.z[station]));
        Node below{lp.bound, next_id++, node.fixings, node.units};
        below.units.ensure_stations(problem.n_stations);
        below.units.st_ub[station] =
            below.units.st_ub[station] < 0
                ? static_cast<int>(floor_z)
                : std::min(below.units.st_ub[station],
                           static_cast<int>(floor_z));
        Node above{lp.bound, next_id++, node.fixings, node.units};
        above.units.ensure_stations(problem.n_stations);
        above.units.st_lb[station] = std::max(
            above.units.st_lb[station], static_cast<int>(floor_z) + 1);
        if (below.units.st_ub[station] >= below.units.st_lb[station])
          open.push(std::move(below));
        if (above.units.st_ub[station] < 0 ||
            above.units.st_lb[station] <= above.units.st_ub[station])
          open.push(std::move(above));
        continue;
      }
    }

    // Most fractional placement coordinate; ties by cut-coefficient mass.
    int branch = -1;
    double best_frac = 1e-7;
    for (int j = 0; j < nx; ++j) {
      if (node.fixings[j] >= 0) continue;
      const double frac = std::min(lp.x[j], 1.0 - lp.x[j]);
      if (frac > best_frac + 1e-12 ||
          (frac > best_frac - 1e-12 && branch >= 0 &&
           colsum[j] > colsum[branch])) {
        branch = j;
        best_frac = std::max(best_frac, frac);
      }
    }

    if (branch < 0) {
      // Integral relaxation: evaluate with the exact lease ceiling.
      std::vector<std::int8_t> xint(nx, 0);
      for (int j = 0; j < nx; ++j)
        xint[j] = node.fixings[j] >= 0 ? node.fixings[j]
                                       : (lp.x[j] > 0.5 ? 1 : 0);
      offer_incumbent(xint);
      if (lp.bound <= incumbent.objective + 1e-9) continue;
      // A ceiling gap keeps the subtree interesting: branch on any free
      // coordinate, heaviest cut mass first.
      for (int j = 0; j < nx; ++j)
        if (node.fixings[j] < 0 &&
            (branch < 0 || colsum[j] > colsum[branch]))
          branch = j;
      if (branch < 0) continue;  // fully fixed leaf
    }

    const int station = branch / problem.n_files;
    Node up{lp.bound, next_id++, node.fixings, node.units};
    up.fixings[branch] = 1;
    if (capacity_ok(problem, up.fixings, station)) open.push(std::move(up));
    Node down{lp.bound, next_id++, node.fixings, node.units};
    down.fixings[branch] = 0;
    open.push(std::move(down));
  }

  MasterSolution sol;
  sol.x = Placement::zeros(problem.n_stations, problem.n_files);
  for (int j = 0; j < nx; ++j) sol.x.x[j] = incumbent.x[j];
  double gamma = 0.0;
  std::vector<int> z;
  sol.objective = leaf_objective(incumbent.x, gamma, z);
  sol.gamma = gamma;
  sol.z = z;
  sol.lp_bound = root_bound;
  sol.node_count = node_count;
  return sol;
}

std::string master_to_lp_format(const MasterProblem& problem) {
  std::ostringstream out;
  out.precision(17);
  out << "Maximize\n obj: gamma";
  for (int m = 0; m < problem.n_stations; ++m) {
    if (problem.price_q[m] != 0.0) out << " - " << problem.price_q[m]
                                       << " z" << m;
  }
  out << "\nSubject To\n";
  for (std::size_t t = 0; t < problem.cuts.size(); ++t) {
    out << " cut" << t << ": gamma";
    for (int j = 0; j < problem.n_stations * problem.n_files; ++j)
      if (problem.cuts[t].coeff[j] != 0.0)
        out << " - " << problem.cuts[t].coeff[j] << " x"
            << j / problem.n_files << "_" << j % problem.n_files;
    out << " <= " << problem.cuts[t].gamma_const << "\n";
  }
  for (int m = 0; m < problem.n_stations; ++m) {
    out << " mem" << m << ":";
    for (int f = 0; f < problem.n_files; ++f)
      out << (f == 0 ? " " : " + ") << problem.size_b[f] << " x" << m << "_"
          << f;
    out << " - " << problem.unit_size << " z" << m << " <= 0\n";
  }
  out << "Bounds\n";
  if (std::isfinite(problem.gamma_cap))
    out << " 0 <= gamma <= " << problem.gamma_cap << "\n";
  else
    out << " gamma >= 0\n";
  for (int m = 0; m < problem.n_stations; ++m)
    out << " 0 <= z" << m << " <= " << problem.capacity_k[m] << "\n";
  out << "Binaries\n";
  for (int m = 0; m < problem.n_stations; ++m)
    for (int f = 0; f < problem.n_files; ++f)
      out << " x" << m << "_" << f << "\n";
  out << "Generals\n";
  for (int m = 0; m < problem.n_stations; ++m) out << " z" << m << "\n";
  out << "End\n";
  return out.str();
}

}  // namespace cachelease
