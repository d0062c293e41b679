#include "flexccs/solver.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <memory>
#include <queue>
#include <stdexcept>

#include "flexccs/external.hpp"
#include "simplex.hpp"

namespace flexccs {

using detail::Basis;
using detail::Clock;
using detail::SimplexEngine;

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kUnbounded: return "unbounded";
    case SolveStatus::kLimit: return "limit";
    case SolveStatus::kError: return "error";
  }
  return "error";
}

const char* to_string(Backend backend) {
  switch (backend) {
    case Backend::kInternal: return "internal";
    case Backend::kExternal: return "external";
    case Backend::kOracle: return "oracle";
  }
  return "internal";
}

Backend parse_backend(const std::string& text) {
  if (text == "internal") return Backend::kInternal;
  if (text == "external") return Backend::kExternal;
  if (text == "oracle") return Backend::kOracle;
  throw std::invalid_argument("unknown solver backend '" + text + "'");
}

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Clock::time_point deadline_from(const SolverOptions& options, Clock::time_point t0) {
  const double limit = std::min(options.time_limit, 1e7);
  return t0 + std::chrono::duration_cast<Clock::duration>(
                  std::chrono::duration<double>(limit));
}

void fill_from_engine(const Problem& problem, const SimplexEngine& engine,
                      Solution& sol) {
  sol.x = engine.primal();
  sol.duals = engine.duals();
  sol.reduced_costs = engine.reduced_costs();
  sol.objective = problem.objective(sol.x);
  sol.best_bound = sol.objective;
}

struct BoundChange {
  int col;
  double lower;
  double upper;
};

struct Node {
  double bound;
  int depth;
  long id;
  std::vector<BoundChange> changes;
  std::shared_ptr<const Basis> basis;
  // branching that created this node, for pseudocost updates
  int branch_col = -1;
  bool up = false;
  double parent_obj = 0.0;
  double step = 0.0;
};

// Objective gain per unit of bound movement, averaged over observations.
struct Pseudocost {
  double down_sum = 0.0;
  double up_sum = 0.0;
  int down_n = 0;
  int up_n = 0;
};

struct BranchChoice {
  int col = -1;
  bool infeasible = false;  // both children proved infeasible
  double down_bound = -kInf;
  double up_bound = -kInf;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    if (a.depth != b.depth) return a.depth < b.depth;
    return a.id > b.id;
  }
};

class BranchAndBound {
 public:
  BranchAndBound(const Problem& problem, const SolverOptions& options)
      : problem_(problem), options_(options), engine_(problem), pseudo_(problem.num_cols()) {
    for (int j = 0; j < problem.num_cols(); ++j)
      if (problem.columns()[j].integer) integers_.push_back(j);
  }

  Solution run() {
    const auto t0 = Clock::now();
    deadline_ = deadline_from(options_, t0);
    Solution result;

    engine_.reset_column_bounds();
    auto root = engine_.solve(nullptr, options_.iteration_limit, deadline_);
    iterations_ += root.iterations;
    if (root.status != SolveStatus::kOptimal) {
      result.status = root.status;
      finish(result, t0);
      return result;
    }
    auto root_basis = std::make_shared<const Basis>(engine_.basis());
    std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
    open.push(Node{root.objective, 0, next_id_++, {}, root_basis});
    dive({}, root_basis);

    bool limit_hit = false;
    double global_bound = root.objective;
    while (!open.empty()) {
      global_bound = open.top().bound;
      if (have_incumbent_ && gap_closed(global_bound)) break;
      if (nodes_ >= options_.node_limit || Clock::now() > deadline_) {
        limit_hit = true;
        break;
      }
      Node node = open.top();
      open.pop();
      if (have_incumbent_ && node.bound >= incumbent_obj_ - prune_margin()) continue;
      ++nodes_;
      if (options_.verbose && nodes_ % 50 == 0)
        std::cerr << "  node " << nodes_ << " bound " << global_bound << " incumbent "
                  << (have_incumbent_ ? incumbent_obj_ : kInf) << " open " << open.size() << "\n";

      apply(node.changes);
      auto lp = engine_.solve(node.basis.get(), options_.iteration_limit, deadline_);
      iterations_ += lp.iterations;
      if (lp.status == SolveStatus::kLimit) {
        open.push(node);
        limit_hit = true;
        break;
      }
      if (lp.status != SolveStatus::kOptimal) continue;
      if (node.branch_col >= 0) record(node.branch_col, node.up, lp.objective - node.parent_obj, node.step);
      if (have_incumbent_ && lp.objective >= incumbent_obj_ - prune_margin()) continue;

      const std::vector<double> x = engine_.primal();
      auto basis = std::make_shared<const Basis>(engine_.basis());
      if (fractional_count(x) == 0) {
        consider(node.changes, basis);
        continue;
      }
      const BranchChoice pick = choose_branch(x, node.changes, basis, lp.objective);
      if (pick.infeasible || pick.col < 0) continue;
      const int branch = pick.col;
      const double v = x[branch];
      const double f = v - std::floor(v);
      Node down{std::max(lp.objective, pick.down_bound), node.depth + 1, next_id_++, node.changes,
                basis, branch, false, lp.objective, f};
      down.changes.push_back({branch, current_lower(node.changes, branch), std::floor(v)});
      Node up{std::max(lp.objective, pick.up_bound), node.depth + 1, next_id_++, node.changes,
              basis, branch, true, lp.objective, 1.0 - f};
      up.changes.push_back({branch, std::ceil(v), current_upper(node.changes, branch)});
      if (pick.down_bound < kInf) open.push(std::move(down));
      if (pick.up_bound < kInf) open.push(std::move(up));
      if (nodes_ % 200 == 0) dive(node.changes, basis);
    }

    if (open.empty()) global_bound = have_incumbent_ ? incumbent_obj_ : kInf;
    if (have_incumbent_) {
      result = incumbent_;
      result.status = limit_hit ? SolveStatus::kLimit : SolveStatus::kOptimal;
      result.best_bound = std::min(global_bound, incumbent_obj_);
    } else {
      result.status = limit_hit ? SolveStatus::kLimit : SolveStatus::kInfeasible;
      result.best_bound = global_bound;
    }
    finish(result, t0);
    return result;
  }

 private:
  double prune_margin() const {
    const double scale = std::max(1.0, std::abs(incumbent_obj_));
    return std::max(options_.mip_gap * scale, 1e-9 * scale);
  }

  bool gap_closed(double bound) const {
    return incumbent_obj_ - bound <= prune_margin();
  }

  double current_lower(const std::vector<BoundChange>& changes, int col) const {
    double lo = problem_.columns()[col].lower;
    for (const auto& c : changes) if (c.col == col) lo = c.lower;
    return lo;
  }

  double current_upper(const std::vector<BoundChange>& changes, int col) const {
    double hi = problem_.columns()[col].upper;
    for (const auto& c : changes) if (c.col == col) hi = c.upper;
    return hi;
  }

  void apply(const std::vector<BoundChange>& changes) {
    engine_.reset_column_bounds();
    for (const auto& c : changes) engine_.set_column_bounds(c.col, c.lower, c.upper);
  }

  double fraction(double v) const {
    const double f = v - std::floor(v);
    return std::min(f, 1.0 - f);
  }

  int fractional_count(const std::vector<double>& x) const {
    int n = 0;
    for (int j : integers_) n += fraction(x[j]) > options_.int_tol;
    return n;
  }

  void record(int col, bool up, double gain, double step) {
    if (step <= 0.0) return;
    const double unit = std::max(gain, 0.0) / step;
    Pseudocost& p = pseudo_[col];
    if (up) {
      p.up_sum += unit;
      ++p.up_n;
    } else {
      p.down_sum += unit;
      ++p.down_n;
    }
    unit_sum_ += unit;
    ++unit_n_;
  }

  double unit_gain(int col, bool up) const {
    const Pseudocost& p = pseudo_[col];
    const int n = up ? p.up_n : p.down_n;
    if (n > 0) return (up ? p.up_sum : p.down_sum) / n;
    return unit_n_ > 0 ? unit_sum_ / unit_n_ : 1.0;
  }

  static double score(double down, double up) {
    return std::max(down, 1e-6) * std::max(up, 1e-6);
  }

  // Child LP objective with one extra bound, or kInf when infeasible. A
  // probe is cut short after a few dual iterations; the dual objective
  // reached by then is still a valid bound. NaN when nothing is known.
  double probe(std::vector<BoundChange> changes, const Basis* basis, BoundChange extra) {
    constexpr long kProbeIterations = 100;
    changes.push_back(extra);
    apply(changes);
    auto lp = engine_.solve(basis, std::min(options_.iteration_limit, kProbeIterations), deadline_);
    iterations_ += lp.iterations;
    if (lp.status == SolveStatus::kOptimal) return lp.objective;
    if (lp.status == SolveStatus::kInfeasible) return kInf;
    if (lp.status == SolveStatus::kLimit && lp.dual_bound > -kInf) return lp.dual_bound;
    return std::nan("");
  }

  // Pseudocost branching; columns with too little history are strong
  // branched first, which also seeds their pseudocosts.
  BranchChoice choose_branch(const std::vector<double>& x, const std::vector<BoundChange>& changes,
                             const std::shared_ptr<const Basis>& basis, double obj) {
    constexpr int kReliable = 1;
    constexpr int kMaxProbes = 8;
    constexpr int kLookahead = 4;
    std::vector<int> cand;
    for (int j : integers_)
      if (fraction(x[j]) > options_.int_tol) cand.push_back(j);
    std::stable_sort(cand.begin(), cand.end(),
                     [&](int a, int b) { return fraction(x[a]) > fraction(x[b]); });

    BranchChoice best;
    double best_score = -1.0;
    for (int j : cand) {
      const Pseudocost& p = pseudo_[j];
      if (std::min(p.down_n, p.up_n) < kReliable) continue;
      const double f = x[j] - std::floor(x[j]);
      const double sc = score(unit_gain(j, false) * f, unit_gain(j, true) * (1.0 - f));
      if (sc > best_score) {
        best_score = sc;
        best = BranchChoice{j};
      }
    }

    int probes = 0;
    int since_better = 0;
    for (int j : cand) {
      const Pseudocost& p = pseudo_[j];
      if (std::min(p.down_n, p.up_n) >= kReliable) continue;
      if (probes >= kMaxProbes || since_better >= kLookahead || Clock::now() > deadline_) break;
      ++probes;
      const double v = x[j];
      const double f = v - std::floor(v);
      const double lo = probe(changes, basis.get(), {j, current_lower(changes, j), std::floor(v)});
      const double hi = probe(changes, basis.get(), {j, std::ceil(v), current_upper(changes, j)});
      if (std::isnan(lo) || std::isnan(hi)) continue;
      if (lo == kInf && hi == kInf) {
        BranchChoice none;
        none.infeasible = true;
        return none;
      }
      if (lo < kInf) record(j, false, lo - obj, f);
      if (hi < kInf) record(j, true, hi - obj, 1.0 - f);
      const double big = 1e3 * std::max(1.0, std::abs(obj));
      const double sc = score(lo < kInf ? lo - obj : big, hi < kInf ? hi - obj : big);
      if (sc > best_score) {
        best_score = sc;
        best = BranchChoice{j, false, lo, hi};
        since_better = 0;
      } else {
        ++since_better;
      }
    }
    if (best.col < 0 && !cand.empty()) best = BranchChoice{cand.front()};
    return best;
  }

  // Fix every integer column to its rounded LP value and re-solve the
  // continuous part; accept as incumbent when better.
  void consider(const std::vector<BoundChange>& changes,
                std::shared_ptr<const Basis> basis) {
    const std::vector<double> x = engine_.primal();
    std::vector<BoundChange> fixed = changes;
    for (int j : integers_) {
      const double r = std::round(x[j]);
      fixed.push_back({j, r, r});
    }
    apply(fixed);
    auto lp = engine_.solve(basis.get(), options_.iteration_limit, deadline_);
    iterations_ += lp.iterations;
    if (lp.status != SolveStatus::kOptimal) return;
    Solution cand;
    fill_from_engine(problem_, engine_, cand);
    for (int j : integers_) cand.x[j] = std::round(cand.x[j]);
    cand.objective = problem_.objective(cand.x);
    if (!have_incumbent_ || cand.objective < incumbent_obj_ - 1e-12 * std::max(1.0, std::abs(incumbent_obj_))) {
      cand.duals.clear();
      cand.reduced_costs.clear();
      incumbent_ = std::move(cand);
      incumbent_obj_ = incumbent_.objective;
      have_incumbent_ = true;
      if (options_.verbose)
        std::cerr << "  incumbent " << incumbent_obj_ << " after " << nodes_ << " nodes\n";
    }
  }

  // Fractional diving: repeatedly round the integer column closest to
  // integrality and re-solve.
  void dive(std::vector<BoundChange> changes, std::shared_ptr<const Basis> basis) {
    const size_t max_steps = integers_.size() + 1;
    for (size_t step = 0; step < max_steps; ++step) {
      if (Clock::now() > deadline_) return;
      apply(changes);
      auto lp = engine_.solve(basis.get(), options_.iteration_limit, deadline_);
      iterations_ += lp.iterations;
      if (lp.status != SolveStatus::kOptimal) return;
      if (have_incumbent_ && lp.objective >= incumbent_obj_ - prune_margin()) return;
      basis = std::make_shared<const Basis>(engine_.basis());
      const std::vector<double> x = engine_.primal();
      // Fix everything already integral, then round the least fractional.
      int pick = -1;
      double pick_score = 1.0;
      bool any_fractional = false;
      for (int j : integers_) {
        const double f = x[j] - std::floor(x[j]);
        const double score = std::min(f, 1.0 - f);
        if (score > options_.int_tol) {
          any_fractional = true;
          if (score < pick_score) {
            pick_score = score;
            pick = j;
          }
        }
      }
      if (!any_fractional) {
        consider(changes, basis);
        return;
      }
      const double r = std::round(x[pick]);
      changes.push_back({pick, r, r});
    }
  }

  void finish(Solution& result, Clock::time_point t0) const {
    result.stats.iterations = iterations_;
    result.stats.nodes = nodes_;
    result.stats.wall_seconds = seconds_since(t0);
  }

  const Problem& problem_;
  SolverOptions options_;
  SimplexEngine engine_;
  std::vector<int> integers_;
  std::vector<Pseudocost> pseudo_;
  double unit_sum_ = 0.0;
  int unit_n_ = 0;
  Clock::time_point deadline_;
  Solution incumbent_;
  double incumbent_obj_ = kInf;
  bool have_incumbent_ = false;
  long nodes_ = 0;
  long iterations_ = 0;
  long next_id_ = 0;
};

}  // namespace

Solution solve_lp(const Problem& problem, const SolverOptions& options) {
  const auto t0 = Clock::now();
  SimplexEngine engine(problem);
  auto outcome = engine.solve(nullptr, options.iteration_limit,
                              deadline_from(options, t0));
  Solution sol;
  sol.status = outcome.status;
  if (outcome.status == SolveStatus::kOptimal) fill_from_engine(problem, engine, sol);
  sol.stats.iterations = outcome.iterations;
  sol.stats.wall_seconds = seconds_since(t0);
  return sol;
}

Solution solve_milp(const Problem& problem, const SolverOptions& options) {
  if (problem.num_integer() == 0) return solve_lp(problem, options);
  BranchAndBound bb(problem, options);
  return bb.run();
}

Solution fix_and_price(const Problem& problem, const Solution& incumbent,
                       const SolverOptions& options) {
  if (!incumbent.optimal() && incumbent.status != SolveStatus::kLimit)
    throw std::invalid_argument("fix_and_price: incumbent is not a solution");
  if (incumbent.x.size() != static_cast<size_t>(problem.num_cols()))
    throw std::invalid_argument("fix_and_price: dimension mismatch");
  std::vector<double> lo(problem.num_cols()), hi(problem.num_cols());
  for (int j = 0; j < problem.num_cols(); ++j) {
    const Column& c = problem.columns()[j];
    if (c.integer) {
      lo[j] = hi[j] = std::round(incumbent.x[j]);
    } else {
      lo[j] = c.lower;
      hi[j] = c.upper;
    }
  }
  Problem fixed = problem.with_bounds(std::move(lo), std::move(hi)).relaxed();
  SolverOptions lp_options = options;
  lp_options.backend = Backend::kInternal;
  Solution priced = solve_lp(fixed, lp_options);
  return priced;
}

Solution solve(const Problem& problem, const SolverOptions& options) {
  switch (options.backend) {
    case Backend::kInternal: return solve_milp(problem, options);
    case Backend::kOracle: return enumerate_oracle(problem, options);
    case Backend::kExternal: return solve_external(problem, options);
  }
  return solve_milp(problem, options);
}

}  // namespace flexccs
