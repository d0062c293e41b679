#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace flexccs {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class RowSense { kLessEqual, kGreaterEqual, kEqual };

struct Column {
  std::string name;
  double lower = 0.0;
  double upper = kInf;
  bool integer = false;
  double cost = 0.0;

  bool operator==(const Column&) const = default;
};

struct Row {
  std::string name;
  RowSense sense = RowSense::kEqual;
  double rhs = 0.0;

  bool operator==(const Row&) const = default;
};

struct Entry {
  int row = 0;
  int col = 0;
  double value = 0.0;

  bool operator==(const Entry&) const = default;
};

// Sparse minimization MILP. Entries are sorted by (col, row) and unique.
// The objective is offset + sum(cost_j * x_j).
class Problem {
 public:
  Problem() = default;

  int num_cols() const { return static_cast<int>(columns_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  int num_integer() const;

  const std::vector<Column>& columns() const { return columns_; }
  const std::vector<Row>& rows() const { return rows_; }
  const std::vector<Entry>& entries() const { return entries_; }
  double objective_offset() const { return objective_offset_; }

  // Column-compressed view: entries of column j are
  // entries()[col_start()[j] .. col_start()[j+1]).
  const std::vector<int>& col_start() const { return col_start_; }

  int find_column(const std::string& name) const;  // -1 if absent
  int find_row(const std::string& name) const;     // -1 if absent

  double objective(std::span<const double> x) const;
  std::vector<double> row_activity(std::span<const double> x) const;

  // Returns a copy with different column bounds; structure is shared.
  Problem with_bounds(std::vector<double> lower, std::vector<double> upper) const;
  Problem relaxed() const;

  Column& mutable_column(int j) { return columns_[j]; }

  bool operator==(const Problem& other) const {
    return columns_ == other.columns_ && rows_ == other.rows_ &&
           entries_ == other.entries_ &&
           objective_offset_ == other.objective_offset_;
  }

 private:
  friend class ProblemBuilder;
  std::vector<Column> columns_;
  std::vector<Row> rows_;
  std::vector<Entry> entries_;
  std::vector<int> col_start_;
  double objective_offset_ = 0.0;
  std::unordered_map<std::string, int> col_lookup_;
  std::unordered_map<std::string, int> row_lookup_;
};

// Incremental assembly. Duplicate (row, col) coefficients are summed in
// finish(); zero coefficients are dropped.
class ProblemBuilder {
 public:
  int add_column(Column column);
  int add_row(Row row);
  void add_entry(int row, int col, double value);
  void add_objective_offset(double value) { offset_ += value; }
  void add_cost(int col, double value) { columns_[col].cost += value; }

  int num_cols() const { return static_cast<int>(columns_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }

  Problem finish() &&;

 private:
  std::vector<Column> columns_;
  std::vector<Row> rows_;
  std::vector<Entry> entries_;
  double offset_ = 0.0;
};

struct Violation {
  enum class Kind { kRow, kBound, kIntegrality };
  Kind kind;
  int index;  // row or column
  double amount;
  std::string name;
};

// Row-by-row evaluation of a candidate point, independent of any solver state.
std::vector<Violation> check_point(const Problem& problem,
                                   std::span<const double> x,
                                   double feas_tol = 1e-6,
                                   double int_tol = 1e-5);

const char* to_string(RowSense sense);

}  // namespace flexccs
