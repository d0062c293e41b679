#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "flexccs/solver.hpp"

namespace flexccs {

namespace {

// Dense tableau for min c^T z, rows (sense) b, z >= 0, b >= 0.
class Tableau {
 public:
  Tableau(int rows, int cols) : m_(rows), n_(cols), t_((rows + 1) * (cols + 1), 0.0) {}

  double& at(int i, int j) { return t_[i * (n_ + 1) + j]; }
  double at(int i, int j) const { return t_[i * (n_ + 1) + j]; }
  double& rhs(int i) { return at(i, n_); }
  double& obj(int j) { return at(m_, j); }

  void pivot(int r, int c) {
    const double p = at(r, c);
    for (int j = 0; j <= n_; ++j) at(r, j) /= p;
    for (int i = 0; i <= m_; ++i) {
      if (i == r) continue;
      const double f = at(i, c);
      if (f == 0.0) continue;
      for (int j = 0; j <= n_; ++j) at(i, j) -= f * at(r, j);
    }
  }

  int m_;
  int n_;
  std::vector<double> t_;
};

enum class Outcome { kOptimal, kUnbounded, kStalled };

// Bland's rule: smallest-index entering column, smallest-index basic
// variable among tied ratios. `allowed` masks eligible columns.
Outcome run_bland(Tableau& tab, std::vector<int>& basis,
                  const std::vector<bool>& allowed, double tol) {
  for (long iter = 0; iter < 100000; ++iter) {
    int enter = -1;
    for (int j = 0; j < tab.n_; ++j) {
      if (allowed[j] && tab.obj(j) < -tol) {
        enter = j;
        break;
      }
    }
    if (enter < 0) return Outcome::kOptimal;
    int leave = -1;
    double best = kInf;
    for (int i = 0; i < tab.m_; ++i) {
      const double a = tab.at(i, enter);
      if (a <= tol) continue;
      const double ratio = tab.rhs(i) / a;
      if (ratio < best - 1e-12 ||
          (ratio <= best + 1e-12 && leave >= 0 && basis[i] < basis[leave])) {
        best = ratio;
        leave = i;
      }
    }
    if (leave < 0) return Outcome::kUnbounded;
    tab.pivot(leave, enter);
    basis[leave] = enter;
  }
  return Outcome::kStalled;
}

}  // namespace

Solution solve_lp_dense(const Problem& problem, double tol) {
  const auto t0 = std::chrono::steady_clock::now();
  Solution sol;
  const int n = problem.num_cols();

  // Column substitution x = shift + sign * z (or z_plus - z_minus for free).
  struct Map {
    int z = -1;       // first tableau column, -1 when fixed
    int z_neg = -1;   // second column for free variables
    double shift = 0.0;
    double sign = 1.0;
  };
  std::vector<Map> map(n);
  int nz = 0;
  std::vector<std::pair<int, double>> upper_rows;  // z index, bound
  for (int j = 0; j < n; ++j) {
    const Column& c = problem.columns()[j];
    if (c.lower > c.upper + tol) {
      sol.status = SolveStatus::kInfeasible;
      return sol;
    }
    if (std::isfinite(c.lower) && std::isfinite(c.upper) && c.upper - c.lower <= tol) {
      map[j].shift = c.lower;
    } else if (std::isfinite(c.lower)) {
      map[j] = {nz++, -1, c.lower, 1.0};
      if (std::isfinite(c.upper)) upper_rows.push_back({map[j].z, c.upper - c.lower});
    } else if (std::isfinite(c.upper)) {
      map[j] = {nz++, -1, c.upper, -1.0};
    } else {
      map[j] = {nz, nz + 1, 0.0, 1.0};
      nz += 2;
    }
  }

  struct DenseRow {
    std::vector<double> a;
    RowSense sense;
    double rhs;
  };
  std::vector<DenseRow> rows;
  rows.reserve(problem.num_rows() + upper_rows.size());
  for (const Row& r : problem.rows()) rows.push_back({std::vector<double>(nz, 0.0), r.sense, r.rhs});
  for (const Entry& e : problem.entries()) {
    const Map& mp = map[e.col];
    DenseRow& row = rows[e.row];
    row.rhs -= e.value * mp.shift;
    if (mp.z >= 0) row.a[mp.z] += e.value * mp.sign;
    if (mp.z_neg >= 0) row.a[mp.z_neg] -= e.value;
  }
  for (auto [z, ub] : upper_rows) {
    DenseRow row{std::vector<double>(nz, 0.0), RowSense::kLessEqual, ub};
    row.a[z] = 1.0;
    rows.push_back(std::move(row));
  }
  // Drop empty rows after checking them.
  std::vector<DenseRow> kept;
  for (auto& row : rows) {
    bool empty = std::all_of(row.a.begin(), row.a.end(), [](double v) { return v == 0.0; });
    if (!empty) {
      if (row.rhs < 0.0) {
        for (double& v : row.a) v = -v;
        row.rhs = -row.rhs;
        if (row.sense == RowSense::kLessEqual) row.sense = RowSense::kGreaterEqual;
        else if (row.sense == RowSense::kGreaterEqual) row.sense = RowSense::kLessEqual;
      }
      kept.push_back(std::move(row));
      continue;
    }
    const double scale = tol * std::max(1.0, std::abs(row.rhs));
    bool ok = row.sense == RowSense::kLessEqual ? 0.0 <= row.rhs + scale
              : row.sense == RowSense::kGreaterEqual ? 0.0 >= row.rhs - scale
                                                     : std::abs(row.rhs) <= scale;
    if (!ok) {
      sol.status = SolveStatus::kInfeasible;
      return sol;
    }
  }

  const int m = static_cast<int>(kept.size());
  int n_slack = 0, n_art = 0;
  for (const auto& row : kept) {
    if (row.sense != RowSense::kEqual) ++n_slack;
    if (row.sense != RowSense::kLessEqual) ++n_art;
  }
  const int cols = nz + n_slack + n_art;
  Tableau tab(m, cols);
  std::vector<int> basis(m, -1);
  std::vector<bool> is_art(cols, false);
  int slack = nz, art = nz + n_slack;
  for (int i = 0; i < m; ++i) {
    const auto& row = kept[i];
    for (int j = 0; j < nz; ++j) tab.at(i, j) = row.a[j];
    tab.rhs(i) = row.rhs;
    if (row.sense == RowSense::kLessEqual) {
      tab.at(i, slack) = 1.0;
      basis[i] = slack++;
    } else {
      if (row.sense == RowSense::kGreaterEqual) tab.at(i, slack++) = -1.0;
      tab.at(i, art) = 1.0;
      is_art[art] = true;
      basis[i] = art++;
    }
  }

  // Phase 1: minimize the sum of artificials, reduced costs in the last row.
  for (int j = 0; j <= cols; ++j) tab.obj(j) = 0.0;
  for (int i = 0; i < m; ++i) {
    if (!is_art[basis[i]]) continue;
    for (int j = 0; j <= cols; ++j)
      if (j == cols || !is_art[j]) tab.obj(j) -= tab.at(i, j);
  }
  std::vector<bool> allowed(cols, true);
  if (run_bland(tab, basis, allowed, tol) == Outcome::kStalled) {
    sol.status = SolveStatus::kError;
    return sol;
  }
  double infeas = 0.0;
  for (int i = 0; i < m; ++i)
    if (is_art[basis[i]]) infeas += tab.rhs(i);
  double rhs_scale = 1.0;
  for (const auto& row : kept) rhs_scale = std::max(rhs_scale, std::abs(row.rhs));
  if (infeas > 1e-7 * rhs_scale) {
    sol.status = SolveStatus::kInfeasible;
    return sol;
  }
  // Drive remaining artificials out of the basis where possible.
  for (int i = 0; i < m; ++i) {
    if (!is_art[basis[i]]) continue;
    for (int j = 0; j < cols; ++j) {
      if (!is_art[j] && std::abs(tab.at(i, j)) > 1e-9) {
        tab.pivot(i, j);
        basis[i] = j;
        break;
      }
    }
  }
  for (int j = 0; j < cols; ++j) allowed[j] = !is_art[j];

  // Phase 2 objective in terms of z.
  std::vector<double> cz(cols, 0.0);
  double c0 = problem.objective_offset();
  for (int j = 0; j < n; ++j) {
    const double c = problem.columns()[j].cost;
    c0 += c * map[j].shift;
    if (map[j].z >= 0) cz[map[j].z] += c * map[j].sign;
    if (map[j].z_neg >= 0) cz[map[j].z_neg] -= c;
  }
  for (int j = 0; j <= cols; ++j) tab.obj(j) = j < cols ? cz[j] : 0.0;
  for (int i = 0; i < m; ++i) {
    const double cb = basis[i] < cols ? cz[basis[i]] : 0.0;
    if (cb == 0.0) continue;
    for (int j = 0; j <= cols; ++j) tab.obj(j) -= cb * tab.at(i, j);
  }
  const Outcome phase2 = run_bland(tab, basis, allowed, tol);
  if (phase2 == Outcome::kUnbounded) {
    sol.status = SolveStatus::kUnbounded;
    return sol;
  }
  if (phase2 == Outcome::kStalled) {
    sol.status = SolveStatus::kError;
    return sol;
  }

  std::vector<double> z(cols, 0.0);
  for (int i = 0; i < m; ++i) z[basis[i]] = tab.rhs(i);
  sol.x.assign(n, 0.0);
  for (int j = 0; j < n; ++j) {
    double v = map[j].shift;
    if (map[j].z >= 0) v += map[j].sign * z[map[j].z];
    if (map[j].z_neg >= 0) v -= z[map[j].z_neg];
    sol.x[j] = v;
  }
  (void)c0;
  sol.objective = problem.objective(sol.x);
  sol.best_bound = sol.objective;
  sol.status = SolveStatus::kOptimal;
  sol.stats.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return sol;
}

Solution enumerate_oracle(const Problem& problem, const SolverOptions& options) {
  std::vector<int> ints;
  for (int j = 0; j < problem.num_cols(); ++j)
    if (problem.columns()[j].integer) ints.push_back(j);
  if (static_cast<int>(ints.size()) > kOracleMaxIntegers)
    throw std::invalid_argument("enumerate_oracle: " + std::to_string(ints.size()) +
                                " integer columns exceed the cap of " +
                                std::to_string(kOracleMaxIntegers));
  if (ints.empty()) return solve_lp_dense(problem);

  // Rows touching only integer columns are checked as soon as their last
  // column is assigned.
  std::vector<int> position(problem.num_cols(), -1);
  for (size_t k = 0; k < ints.size(); ++k) position[ints[k]] = static_cast<int>(k);
  std::vector<std::vector<std::pair<int, double>>> row_terms(problem.num_rows());
  std::vector<bool> int_only(problem.num_rows(), true);
  for (const Entry& e : problem.entries()) {
    row_terms[e.row].push_back({e.col, e.value});
    if (position[e.col] < 0) int_only[e.row] = false;
  }
  std::vector<std::vector<int>> check_at(ints.size());
  for (int i = 0; i < problem.num_rows(); ++i) {
    if (!int_only[i] || row_terms[i].empty()) continue;
    int last = 0;
    for (auto [col, v] : row_terms[i]) last = std::max(last, position[col]);
    check_at[last].push_back(i);
  }

  std::vector<double> lower(problem.num_cols()), upper(problem.num_cols());
  for (int j = 0; j < problem.num_cols(); ++j) {
    lower[j] = problem.columns()[j].lower;
    upper[j] = problem.columns()[j].upper;
  }
  std::vector<double> value(problem.num_cols(), 0.0);
  Solution best;
  best.status = SolveStatus::kInfeasible;
  long leaves = 0;
  const double tol = options.feas_tol;

  auto row_ok = [&](int i) {
    double act = 0.0, scale = 1.0;
    for (auto [col, v] : row_terms[i]) {
      act += v * value[col];
      scale = std::max(scale, std::abs(v * value[col]));
    }
    const Row& r = problem.rows()[i];
    scale = tol * std::max(scale, std::abs(r.rhs));
    switch (r.sense) {
      case RowSense::kLessEqual: return act <= r.rhs + scale;
      case RowSense::kGreaterEqual: return act >= r.rhs - scale;
      case RowSense::kEqual: return std::abs(act - r.rhs) <= scale;
    }
    return false;
  };

  auto recurse = [&](auto&& self, size_t k) -> void {
    if (k == ints.size()) {
      ++leaves;
      std::vector<double> lo = lower, hi = upper;
      for (int j : ints) lo[j] = hi[j] = value[j];
      Solution leaf = solve_lp_dense(problem.with_bounds(lo, hi));
      if (leaf.status == SolveStatus::kUnbounded) {
        best = leaf;
        return;
      }
      if (leaf.optimal() && (!best.optimal() || leaf.objective < best.objective)) best = leaf;
      return;
    }
    if (best.status == SolveStatus::kUnbounded) return;
    const int j = ints[k];
    const double lo = std::ceil(lower[j] - 1e-9), hi = std::floor(upper[j] + 1e-9);
    for (double v = lo; v <= hi; v += 1.0) {
      value[j] = v;
      bool ok = true;
      for (int i : check_at[k]) {
        if (!row_ok(i)) {
          ok = false;
          break;
        }
      }
      if (ok) self(self, k + 1);
    }
  };
  recurse(recurse, 0);
  best.stats.nodes = leaves;
  best.duals.clear();
  return best;
}

}  // namespace flexccs
