#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "flexccs/problem.hpp"

namespace flexccs {

enum class SolveStatus { kOptimal, kInfeasible, kUnbounded, kLimit, kError };

enum class Backend { kInternal, kExternal, kOracle };

const char* to_string(SolveStatus status);
const char* to_string(Backend backend);
Backend parse_backend(const std::string& text);

struct SolverOptions {
  double feas_tol = 1e-6;
  double int_tol = 1e-5;
  double mip_gap = 1e-4;
  long node_limit = 200000;
  double time_limit = 3600.0;  // seconds
  long iteration_limit = 5000000;
  Backend backend = Backend::kInternal;
  // Command template for the external backend. "{lp}" and "{sol}" are
  // replaced by the problem and solution file paths. When empty, the
  // FLEXCCS_EXTERNAL_SOLVER environment variable is used.
  std::string external_command;
  bool verbose = false;

  bool operator==(const SolverOptions&) const = default;
};

struct SolverStats {
  long iterations = 0;
  long nodes = 0;
  double wall_seconds = 0.0;
};

struct Solution {
  SolveStatus status = SolveStatus::kError;
  double objective = 0.0;
  double best_bound = 0.0;
  std::vector<double> x;
  std::vector<double> duals;          // per row; d(objective)/d(rhs)
  std::vector<double> reduced_costs;  // per column
  SolverStats stats;

  bool optimal() const { return status == SolveStatus::kOptimal; }
  bool has_duals() const { return !duals.empty(); }
};

// Bounded-variable revised simplex (dual phase when warm-started from a basis,
// primal otherwise). Integrality marks are ignored.
Solution solve_lp(const Problem& problem, const SolverOptions& options = {});

// Branch and bound over solve_lp: pseudocost branching seeded by capped strong
// branching, best-bound node selection, periodic dives for incumbents.
Solution solve_milp(const Problem& problem, const SolverOptions& options = {});

// Exhaustive enumeration of integer assignments; each residual LP is solved
// by an independent dense tableau method. Intended for tests.
inline constexpr int kOracleMaxIntegers = 24;
Solution enumerate_oracle(const Problem& problem,
                          const SolverOptions& options = {});

// Dense two-phase tableau simplex with Bland's rule. Used by the oracle.
Solution solve_lp_dense(const Problem& problem, double tol = 1e-9);

// LP with every integer column fixed at its (rounded) incumbent value. The
// duals of the returned solution are the marginal prices.
Solution fix_and_price(const Problem& problem, const Solution& incumbent,
                       const SolverOptions& options = {});

// Dispatches on options.backend.
Solution solve(const Problem& problem, const SolverOptions& options = {});

}  // namespace flexccs
