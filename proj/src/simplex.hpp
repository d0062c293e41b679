#pragma once

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <chrono>
#include <cstdint>
#include <vector>

#include "flexccs/problem.hpp"
#include "flexccs/solver.hpp"

namespace flexccs::detail {

enum class VarState : std::uint8_t { kBasic, kLower, kUpper, kZero };

// Warm-start information: one state per structural column followed by one
// per row logical. Exactly num_rows entries are kBasic.
struct Basis {
  std::vector<VarState> state;
  bool empty() const { return state.empty(); }
};

using Clock = std::chrono::steady_clock;

struct LpOutcome {
  SolveStatus status = SolveStatus::kError;
  double objective = 0.0;  // original units, including offset
  long iterations = 0;
  // Valid lower bound when a dual simplex pass stopped early.
  double dual_bound = -kInf;
};

// LU of the basis matrix plus a product-form eta file.
class BasisFactor {
 public:
  bool factorize(const Eigen::SparseMatrix<double>& basis_matrix);
  void ftran(std::vector<double>& v) const;
  void btran(std::vector<double>& v) const;
  void push_eta(int pivot_row, const std::vector<double>& column);
  int num_etas() const { return static_cast<int>(eta_pivot_.size()); }

 private:
  int m_ = 0;
  mutable Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;
  std::vector<int> eta_pivot_;
  std::vector<double> eta_pivot_value_;
  std::vector<int> eta_start_;
  std::vector<int> eta_index_;
  std::vector<double> eta_value_;
};

// Scaled copy of a Problem that can be re-solved under different column
// bounds, starting from a previous basis.
class SimplexEngine {
 public:
  explicit SimplexEngine(const Problem& problem);

  int num_structural() const { return n_; }
  int num_rows() const { return m_; }

  void set_column_bounds(int j, double lower, double upper);
  void reset_column_bounds();

  LpOutcome solve(const Basis* warm, long iteration_limit,
                  Clock::time_point deadline);

  Basis basis() const;
  std::vector<double> primal() const;
  std::vector<double> duals() const;
  std::vector<double> reduced_costs() const;

 private:
  void compute_scaling(const Problem& problem);
  void load_basis(const Basis* warm);
  void slack_basis();
  bool refactor();
  void compute_basic_values();
  void compute_duals(bool phase_one);
  double infeasibility(int var) const;
  double column_dot(int var, const std::vector<double>& y) const;
  void load_column(int var, std::vector<double>& dense) const;
  double objective_scaled() const;
  SolveStatus dual_phase(long& iter, long iteration_limit, Clock::time_point deadline);

  int m_ = 0;
  int n_ = 0;
  // Scaled structural matrix in compressed-column form.
  std::vector<int> start_;
  std::vector<int> index_;
  std::vector<double> value_;
  std::vector<double> col_scale_;
  std::vector<double> row_scale_;
  double obj_scale_ = 1.0;
  double offset_ = 0.0;

  std::vector<double> cost_;   // n_ + m_
  std::vector<double> lower_;  // n_ + m_
  std::vector<double> upper_;  // n_ + m_
  std::vector<double> orig_lower_;
  std::vector<double> orig_upper_;

  std::vector<VarState> state_;
  std::vector<double> x_;
  std::vector<int> basic_;  // basis position -> variable
  std::vector<double> y_;   // simplex multipliers for current costs
  std::vector<double> work_;
  BasisFactor factor_;

  double primal_tol_ = 1e-9;
  double dual_tol_ = 1e-9;
  double pivot_tol_ = 1e-9;
  int refactor_interval_ = 100;
};

}  // namespace flexccs::detail
