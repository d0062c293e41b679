#include "simplex.hpp"

#include <algorithm>
#include <cmath>

namespace flexccs::detail {

namespace {

double pow2_round(double s) {
  if (!(s > 0.0) || !std::isfinite(s)) return 1.0;
  return std::exp2(std::round(std::log2(s)));
}

// Feasibility slack allowed around a bound value.
double bound_slack(double tol, double bound) {
  return tol * std::max(1.0, std::abs(bound));
}

}  // namespace

bool BasisFactor::factorize(const Eigen::SparseMatrix<double>& basis_matrix) {
  m_ = static_cast<int>(basis_matrix.rows());
  eta_pivot_.clear();
  eta_pivot_value_.clear();
  eta_start_.assign(1, 0);
  eta_index_.clear();
  eta_value_.clear();
  if (m_ == 0) return true;
  lu_.analyzePattern(basis_matrix);
  lu_.factorize(basis_matrix);
  return lu_.info() == Eigen::Success;
}

void BasisFactor::ftran(std::vector<double>& v) const {
  if (m_ == 0) return;
  Eigen::Map<Eigen::VectorXd> b(v.data(), m_);
  Eigen::VectorXd solved = lu_.solve(b);
  b = solved;
  for (size_t k = 0; k < eta_pivot_.size(); ++k) {
    const int r = eta_pivot_[k];
    const double xr = v[r] / eta_pivot_value_[k];
    v[r] = xr;
    if (xr == 0.0) continue;
    for (int p = eta_start_[k]; p < eta_start_[k + 1]; ++p)
      v[eta_index_[p]] -= eta_value_[p] * xr;
  }
}

void BasisFactor::btran(std::vector<double>& v) const {
  if (m_ == 0) return;
  for (size_t k = eta_pivot_.size(); k-- > 0;) {
    const int r = eta_pivot_[k];
    double acc = v[r];
    for (int p = eta_start_[k]; p < eta_start_[k + 1]; ++p)
      acc -= eta_value_[p] * v[eta_index_[p]];
    v[r] = acc / eta_pivot_value_[k];
  }
  Eigen::Map<Eigen::VectorXd> b(v.data(), m_);
  Eigen::VectorXd solved = lu_.transpose().solve(b);
  b = solved;
}

void BasisFactor::push_eta(int pivot_row, const std::vector<double>& column) {
  eta_pivot_.push_back(pivot_row);
  eta_pivot_value_.push_back(column[pivot_row]);
  for (int i = 0; i < m_; ++i) {
    if (i != pivot_row && column[i] != 0.0) {
      eta_index_.push_back(i);
      eta_value_.push_back(column[i]);
    }
  }
  eta_start_.push_back(static_cast<int>(eta_index_.size()));
}

SimplexEngine::SimplexEngine(const Problem& problem)
    : m_(problem.num_rows()), n_(problem.num_cols()) {
  start_ = problem.col_start();
  index_.reserve(problem.entries().size());
  value_.reserve(problem.entries().size());
  for (const Entry& e : problem.entries()) {
    index_.push_back(e.row);
    value_.push_back(e.value);
  }
  compute_scaling(problem);

  const int total = n_ + m_;
  cost_.assign(total, 0.0);
  lower_.assign(total, 0.0);
  upper_.assign(total, 0.0);
  double max_cost = 0.0;
  for (int j = 0; j < n_; ++j) {
    const Column& c = problem.columns()[j];
    cost_[j] = c.cost * col_scale_[j];
    max_cost = std::max(max_cost, std::abs(cost_[j]));
    lower_[j] = c.lower / col_scale_[j];
    upper_[j] = c.upper / col_scale_[j];
  }
  obj_scale_ = max_cost > 0.0 ? pow2_round(1.0 / max_cost) : 1.0;
  for (int j = 0; j < n_; ++j) cost_[j] *= obj_scale_;
  offset_ = problem.objective_offset();
  for (int i = 0; i < m_; ++i) {
    const Row& r = problem.rows()[i];
    const double rhs = r.rhs * row_scale_[i];
    lower_[n_ + i] = r.sense == RowSense::kLessEqual ? -kInf : rhs;
    upper_[n_ + i] = r.sense == RowSense::kGreaterEqual ? kInf : rhs;
  }
  orig_lower_.assign(lower_.begin(), lower_.begin() + n_);
  orig_upper_.assign(upper_.begin(), upper_.begin() + n_);
  y_.assign(m_, 0.0);
  work_.assign(m_, 0.0);
}

void SimplexEngine::compute_scaling(const Problem& problem) {
  row_scale_.assign(m_, 1.0);
  col_scale_.assign(n_, 1.0);
  if (value_.empty()) return;
  std::vector<double> lo(m_), hi(m_);
  for (int pass = 0; pass < 6; ++pass) {
    std::fill(lo.begin(), lo.end(), kInf);
    std::fill(hi.begin(), hi.end(), 0.0);
    for (int j = 0; j < n_; ++j) {
      for (int p = start_[j]; p < start_[j + 1]; ++p) {
        const double a = std::abs(value_[p]) * col_scale_[j];
        lo[index_[p]] = std::min(lo[index_[p]], a);
        hi[index_[p]] = std::max(hi[index_[p]], a);
      }
    }
    for (int i = 0; i < m_; ++i)
      if (hi[i] > 0.0) row_scale_[i] = 1.0 / std::sqrt(lo[i] * hi[i]);
    for (int j = 0; j < n_; ++j) {
      double clo = kInf, chi = 0.0;
      for (int p = start_[j]; p < start_[j + 1]; ++p) {
        const double a = std::abs(value_[p]) * row_scale_[index_[p]];
        clo = std::min(clo, a);
        chi = std::max(chi, a);
      }
      if (chi > 0.0) col_scale_[j] = 1.0 / std::sqrt(clo * chi);
    }
  }
  for (double& s : row_scale_) s = pow2_round(s);
  for (double& s : col_scale_) s = pow2_round(s);
  (void)problem;
  for (int j = 0; j < n_; ++j)
    for (int p = start_[j]; p < start_[j + 1]; ++p)
      value_[p] *= row_scale_[index_[p]] * col_scale_[j];
}

void SimplexEngine::set_column_bounds(int j, double lower, double upper) {
  lower_[j] = lower / col_scale_[j];
  upper_[j] = upper / col_scale_[j];
}

void SimplexEngine::reset_column_bounds() {
  std::copy(orig_lower_.begin(), orig_lower_.end(), lower_.begin());
  std::copy(orig_upper_.begin(), orig_upper_.end(), upper_.begin());
}

double SimplexEngine::column_dot(int var, const std::vector<double>& y) const {
  if (var >= n_) return -y[var - n_];
  double acc = 0.0;
  for (int p = start_[var]; p < start_[var + 1]; ++p) acc += value_[p] * y[index_[p]];
  return acc;
}

void SimplexEngine::load_column(int var, std::vector<double>& dense) const {
  std::fill(dense.begin(), dense.end(), 0.0);
  if (var >= n_) {
    dense[var - n_] = -1.0;
    return;
  }
  for (int p = start_[var]; p < start_[var + 1]; ++p) dense[index_[p]] = value_[p];
}

void SimplexEngine::slack_basis() {
  const int total = n_ + m_;
  state_.assign(total, VarState::kLower);
  basic_.resize(m_);
  for (int i = 0; i < m_; ++i) {
    state_[n_ + i] = VarState::kBasic;
    basic_[i] = n_ + i;
  }
}

void SimplexEngine::load_basis(const Basis* warm) {
  const int total = n_ + m_;
  bool usable = warm != nullptr && static_cast<int>(warm->state.size()) == total;
  if (usable) {
    int count = 0;
    for (VarState s : warm->state) count += s == VarState::kBasic;
    usable = count == m_;
  }
  if (usable) {
    state_ = warm->state;
    basic_.clear();
    for (int v = 0; v < total; ++v)
      if (state_[v] == VarState::kBasic) basic_.push_back(v);
  } else {
    slack_basis();
  }
  x_.assign(total, 0.0);
  for (int v = 0; v < total; ++v) {
    VarState& s = state_[v];
    if (s == VarState::kBasic) continue;
    if (s == VarState::kUpper && !std::isfinite(upper_[v])) s = VarState::kLower;
    if (s == VarState::kLower && !std::isfinite(lower_[v]))
      s = std::isfinite(upper_[v]) ? VarState::kUpper : VarState::kZero;
    if (s == VarState::kZero && std::isfinite(lower_[v])) s = VarState::kLower;
    x_[v] = s == VarState::kLower ? lower_[v] : s == VarState::kUpper ? upper_[v] : 0.0;
  }
}

bool SimplexEngine::refactor() {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<size_t>(m_) * 3);
  for (int k = 0; k < m_; ++k) {
    const int v = basic_[k];
    if (v >= n_) {
      triplets.emplace_back(v - n_, k, -1.0);
    } else {
      for (int p = start_[v]; p < start_[v + 1]; ++p)
        triplets.emplace_back(index_[p], k, value_[p]);
    }
  }
  Eigen::SparseMatrix<double> b(m_, m_);
  b.setFromTriplets(triplets.begin(), triplets.end());
  b.makeCompressed();
  return factor_.factorize(b);
}

void SimplexEngine::compute_basic_values() {
  std::fill(work_.begin(), work_.end(), 0.0);
  for (int v = 0; v < n_ + m_; ++v) {
    if (state_[v] == VarState::kBasic || x_[v] == 0.0) continue;
    if (v >= n_) {
      work_[v - n_] += x_[v];
    } else {
      for (int p = start_[v]; p < start_[v + 1]; ++p)
        work_[index_[p]] -= value_[p] * x_[v];
    }
  }
  factor_.ftran(work_);
  for (int k = 0; k < m_; ++k) x_[basic_[k]] = work_[k];
}

double SimplexEngine::infeasibility(int var) const {
  const double v = x_[var];
  if (v < lower_[var] - bound_slack(primal_tol_, lower_[var])) return lower_[var] - v;
  if (v > upper_[var] + bound_slack(primal_tol_, upper_[var])) return v - upper_[var];
  return 0.0;
}

void SimplexEngine::compute_duals(bool phase_one) {
  for (int k = 0; k < m_; ++k) {
    const int v = basic_[k];
    if (phase_one) {
      const double val = x_[v];
      if (val < lower_[v] - bound_slack(primal_tol_, lower_[v])) y_[k] = -1.0;
      else if (val > upper_[v] + bound_slack(primal_tol_, upper_[v])) y_[k] = 1.0;
      else y_[k] = 0.0;
    } else {
      y_[k] = cost_[v];
    }
  }
  factor_.btran(y_);
}

double SimplexEngine::objective_scaled() const {
  double acc = 0.0;
  for (int j = 0; j < n_; ++j) acc += cost_[j] * x_[j];
  return acc;
}

LpOutcome SimplexEngine::solve(const Basis* warm, long iteration_limit,
                               Clock::time_point deadline) {
  LpOutcome out;
  for (int j = 0; j < n_; ++j) {
    if (lower_[j] > upper_[j] + bound_slack(primal_tol_, upper_[j])) {
      out.status = SolveStatus::kInfeasible;
      return out;
    }
  }
  load_basis(warm);
  int resets = 0;
  if (!refactor()) {
    slack_basis();
    load_basis(nullptr);
    refactor();
    ++resets;
  }
  compute_basic_values();

  const int total = n_ + m_;
  std::vector<double> alpha(m_, 0.0);
  bool fresh = true;
  int degenerate_run = 0;
  bool bland = false;
  long iter = 0;

  // A warm basis after a bound change is usually still dual feasible.
  if (warm != nullptr && resets == 0) {
    const SolveStatus st = dual_phase(iter, iteration_limit, deadline);
    if (st == SolveStatus::kInfeasible || st == SolveStatus::kLimit) {
      out.status = st;
      out.iterations = iter;
      if (st == SolveStatus::kLimit) out.dual_bound = objective_scaled() / obj_scale_ + offset_;
      return out;
    }
    if (st == SolveStatus::kError) {
      refactor();
      compute_basic_values();
    }
  }

  while (true) {
    if (iter >= iteration_limit) {
      out.status = SolveStatus::kLimit;
      break;
    }
    if ((iter & 63) == 0 && Clock::now() > deadline) {
      out.status = SolveStatus::kLimit;
      break;
    }
    if (factor_.num_etas() >= refactor_interval_) {
      if (!refactor()) {
        if (++resets > 5) {
          out.status = SolveStatus::kError;
          break;
        }
        for (int v = 0; v < n_; ++v)
          if (state_[v] == VarState::kBasic) state_[v] = VarState::kLower;
        Basis b;
        b.state = state_;
        for (int i = 0; i < m_; ++i) b.state[n_ + i] = VarState::kBasic;
        load_basis(&b);
        refactor();
      }
      compute_basic_values();
      fresh = true;
    }

    bool phase_one = false;
    for (int k = 0; k < m_ && !phase_one; ++k)
      phase_one = infeasibility(basic_[k]) > 0.0;
    compute_duals(phase_one);

    // Pricing.
    int q = -1;
    double best = 0.0;
    double dq = 0.0;
    for (int v = 0; v < total; ++v) {
      const VarState s = state_[v];
      if (s == VarState::kBasic || lower_[v] == upper_[v]) continue;
      const double d = (phase_one ? 0.0 : cost_[v]) - column_dot(v, y_);
      double score = 0.0;
      if (s == VarState::kLower) score = d < -dual_tol_ ? -d : 0.0;
      else if (s == VarState::kUpper) score = d > dual_tol_ ? d : 0.0;
      else score = std::abs(d) > dual_tol_ ? std::abs(d) : 0.0;
      if (score > best) {
        best = score;
        q = v;
        dq = d;
        if (bland) break;
      }
    }

    if (q < 0) {
      if (!fresh) {
        refactor();
        compute_basic_values();
        fresh = true;
        continue;
      }
      out.status = phase_one ? SolveStatus::kInfeasible : SolveStatus::kOptimal;
      break;
    }

    load_column(q, alpha);
    factor_.ftran(alpha);
    const double dir = dq < 0.0 ? 1.0 : -1.0;

    // Harris two-pass ratio test with bounded entering variable. Basic
    // variables outside their bounds may move toward feasibility and leave
    // at the far bound (or the near one when the far bound is infinite).
    auto target = [&](int k, double rate, double* bound, bool* at_upper) {
      const int v = basic_[k];
      const double val = x_[v];
      const double lo = lower_[v], hi = upper_[v];
      const bool below = val < lo - bound_slack(primal_tol_, lo);
      const bool above = val > hi + bound_slack(primal_tol_, hi);
      if (rate < 0.0) {
        if (below) return false;
        if (std::isfinite(lo)) { *bound = lo; *at_upper = false; return true; }
        if (above && std::isfinite(hi)) { *bound = hi; *at_upper = true; return true; }
        return false;
      }
      if (above) return false;
      if (std::isfinite(hi)) { *bound = hi; *at_upper = true; return true; }
      if (below && std::isfinite(lo)) { *bound = lo; *at_upper = false; return true; }
      return false;
    };
    double theta_max = kInf;
    for (int k = 0; k < m_; ++k) {
      const double a = alpha[k];
      if (std::abs(a) < pivot_tol_) continue;
      const double rate = -dir * a;
      double bound;
      bool at_upper;
      if (!target(k, rate, &bound, &at_upper)) continue;
      const double slack = bound_slack(primal_tol_, bound);
      const double limit = (std::abs(bound - x_[basic_[k]]) + slack) / std::abs(rate);
      theta_max = std::min(theta_max, limit);
    }
    const double flip = upper_[q] - lower_[q];

    int leave = -1;
    bool to_upper = false;
    double theta = 0.0;
    if (std::isfinite(flip) && flip <= theta_max) {
      theta = flip;
    } else if (!std::isfinite(theta_max)) {
      if (phase_one) {
        // Should not happen for a descent direction of the infeasibility sum.
        refactor();
        compute_basic_values();
        fresh = true;
        ++iter;
        continue;
      }
      out.status = SolveStatus::kUnbounded;
      break;
    } else {
      double best_piv = 0.0;
      double best_ratio = kInf;
      for (int k = 0; k < m_; ++k) {
        const double a = alpha[k];
        if (std::abs(a) < pivot_tol_) continue;
        const double rate = -dir * a;
        const int v = basic_[k];
        double bound;
        bool hits_upper;
        if (!target(k, rate, &bound, &hits_upper)) continue;
        const double ratio = (bound - x_[v]) / rate;
        if (ratio > theta_max) continue;
        bool take;
        if (bland) {
          take = ratio < best_ratio - 1e-12 ||
                 (ratio <= best_ratio + 1e-12 && leave >= 0 && v < basic_[leave]);
        } else {
          take = std::abs(a) > best_piv;
        }
        if (take) {
          best_piv = std::abs(a);
          best_ratio = ratio;
          leave = k;
          to_upper = hits_upper;
        }
      }
      if (leave < 0) {
        refactor();
        compute_basic_values();
        fresh = true;
        ++iter;
        continue;
      }
      theta = std::max(0.0, best_ratio);
    }

    // Update primal values.
    if (theta != 0.0) {
      x_[q] += dir * theta;
      for (int k = 0; k < m_; ++k)
        if (alpha[k] != 0.0) x_[basic_[k]] -= dir * theta * alpha[k];
    }
    if (leave < 0) {
      state_[q] = state_[q] == VarState::kUpper ? VarState::kLower : VarState::kUpper;
      x_[q] = state_[q] == VarState::kUpper ? upper_[q] : lower_[q];
    } else {
      const int v = basic_[leave];
      state_[v] = to_upper ? VarState::kUpper : VarState::kLower;
      x_[v] = to_upper ? upper_[v] : lower_[v];
      state_[q] = VarState::kBasic;
      basic_[leave] = q;
      factor_.push_eta(leave, alpha);
    }
    fresh = false;
    ++iter;

    if (theta <= 1e-12) {
      if (++degenerate_run > 60) bland = true;
    } else {
      degenerate_run = 0;
      bland = false;
    }
  }

  out.iterations = iter;
  if (out.status == SolveStatus::kOptimal) {
    compute_duals(false);
    out.objective = objective_scaled() / obj_scale_ + offset_;
  }
  return out;
}

SolveStatus SimplexEngine::dual_phase(long& iter, long iteration_limit,
                                      Clock::time_point deadline) {
  const int total = n_ + m_;
  std::vector<double> d(total, 0.0);
  // Reduced costs; boxed columns on the wrong side are flipped to the other
  // bound. Returns false when the basis cannot be made dual feasible.
  auto price = [&]() {
    compute_duals(false);
    bool flipped = false;
    for (int v = 0; v < total; ++v) {
      d[v] = 0.0;
      if (state_[v] == VarState::kBasic) continue;
      d[v] = cost_[v] - column_dot(v, y_);
      if (lower_[v] == upper_[v]) continue;
      const VarState s = state_[v];
      if (s == VarState::kLower && d[v] < -dual_tol_) {
        if (!std::isfinite(upper_[v])) return false;
        state_[v] = VarState::kUpper;
        x_[v] = upper_[v];
        flipped = true;
      } else if (s == VarState::kUpper && d[v] > dual_tol_) {
        if (!std::isfinite(lower_[v])) return false;
        state_[v] = VarState::kLower;
        x_[v] = lower_[v];
        flipped = true;
      } else if (s == VarState::kZero && std::abs(d[v]) > dual_tol_) {
        return false;
      }
    }
    if (flipped) compute_basic_values();
    return true;
  };
  if (!price()) return SolveStatus::kError;

  std::vector<double> rho(m_), alpha(m_), row(total, 0.0);
  const double row_tol = 1e-7;
  while (true) {
    int r = -1;
    double worst = 0.0;
    for (int k = 0; k < m_; ++k) {
      const double inf = infeasibility(basic_[k]);
      if (inf > worst) {
        worst = inf;
        r = k;
      }
    }
    if (r < 0) return SolveStatus::kOptimal;
    if (iter >= iteration_limit) return SolveStatus::kLimit;
    if ((iter & 63) == 0 && Clock::now() > deadline) return SolveStatus::kLimit;

    const int p = basic_[r];
    const bool to_lower = x_[p] < lower_[p];
    const double sigma = to_lower ? -1.0 : 1.0;
    std::fill(rho.begin(), rho.end(), 0.0);
    rho[r] = 1.0;
    factor_.btran(rho);

    // Harris two-pass dual ratio test.
    double theta_max = kInf;
    for (int v = 0; v < total; ++v) {
      row[v] = 0.0;
      const VarState s = state_[v];
      if (s == VarState::kBasic || lower_[v] == upper_[v]) continue;
      const double a = column_dot(v, rho);
      row[v] = a;
      if (std::abs(a) < row_tol) continue;
      const bool ok = s == VarState::kZero || (s == VarState::kLower ? sigma * a > 0.0 : sigma * a < 0.0);
      if (!ok) continue;
      theta_max = std::min(theta_max, (std::abs(d[v]) + dual_tol_) / std::abs(a));
    }
    int q = -1;
    double best_piv = 0.0;
    for (int v = 0; v < total; ++v) {
      const double a = row[v];
      if (std::abs(a) < row_tol) continue;
      const VarState s = state_[v];
      if (s == VarState::kBasic) continue;
      const bool ok = s == VarState::kZero || (s == VarState::kLower ? sigma * a > 0.0 : sigma * a < 0.0);
      if (!ok || std::abs(d[v]) / std::abs(a) > theta_max) continue;
      if (std::abs(a) > best_piv) {
        best_piv = std::abs(a);
        q = v;
      }
    }
    if (q < 0) return SolveStatus::kInfeasible;

    load_column(q, alpha);
    factor_.ftran(alpha);
    if (std::abs(alpha[r]) < pivot_tol_) return SolveStatus::kError;
    const double bound = to_lower ? lower_[p] : upper_[p];
    const double t = (x_[p] - bound) / alpha[r];
    x_[q] += t;
    for (int k = 0; k < m_; ++k)
      if (alpha[k] != 0.0) x_[basic_[k]] -= t * alpha[k];
    const double theta_d = d[q] / row[q];
    for (int v = 0; v < total; ++v)
      if (row[v] != 0.0) d[v] -= theta_d * row[v];
    x_[p] = bound;
    state_[p] = to_lower ? VarState::kLower : VarState::kUpper;
    d[p] = -theta_d;
    d[q] = 0.0;
    state_[q] = VarState::kBasic;
    basic_[r] = q;
    factor_.push_eta(r, alpha);
    ++iter;

    if (factor_.num_etas() >= refactor_interval_) {
      if (!refactor()) return SolveStatus::kError;
      compute_basic_values();
      if (!price()) return SolveStatus::kError;
    }
  }
}

Basis SimplexEngine::basis() const {
  Basis b;
  b.state = state_;
  return b;
}

std::vector<double> SimplexEngine::primal() const {
  std::vector<double> x(n_);
  for (int j = 0; j < n_; ++j) x[j] = x_[j] * col_scale_[j];
  return x;
}

std::vector<double> SimplexEngine::duals() const {
  std::vector<double> y(m_);
  for (int i = 0; i < m_; ++i) y[i] = y_[i] * row_scale_[i] / obj_scale_;
  return y;
}

std::vector<double> SimplexEngine::reduced_costs() const {
  std::vector<double> d(n_);
  for (int j = 0; j < n_; ++j)
    d[j] = (cost_[j] - column_dot(j, y_)) / (col_scale_[j] * obj_scale_);
  return d;
}

}  // namespace flexccs::detail
