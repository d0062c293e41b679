#include "flexccs/problem.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace flexccs {

int Problem::num_integer() const {
  return static_cast<int>(std::count_if(columns_.begin(), columns_.end(),
                                        [](const Column& c) { return c.integer; }));
}

int Problem::find_column(const std::string& name) const {
  auto it = col_lookup_.find(name);
  return it == col_lookup_.end() ? -1 : it->second;
}

int Problem::find_row(const std::string& name) const {
  auto it = row_lookup_.find(name);
  return it == row_lookup_.end() ? -1 : it->second;
}

double Problem::objective(std::span<const double> x) const {
  double total = objective_offset_;
  for (int j = 0; j < num_cols(); ++j) total += columns_[j].cost * x[j];
  return total;
}

std::vector<double> Problem::row_activity(std::span<const double> x) const {
  std::vector<double> activity(rows_.size(), 0.0);
  for (const Entry& e : entries_) activity[e.row] += e.value * x[e.col];
  return activity;
}

Problem Problem::with_bounds(std::vector<double> lower,
                             std::vector<double> upper) const {
  if (lower.size() != columns_.size() || upper.size() != columns_.size())
    throw std::invalid_argument("with_bounds: size mismatch");
  Problem copy = *this;
  for (int j = 0; j < num_cols(); ++j) {
    copy.columns_[j].lower = lower[j];
    copy.columns_[j].upper = upper[j];
  }
  return copy;
}

Problem Problem::relaxed() const {
  Problem copy = *this;
  for (Column& c : copy.columns_) c.integer = false;
  return copy;
}

int ProblemBuilder::add_column(Column column) {
  if (column.integer &&
      (!std::isfinite(column.lower) || !std::isfinite(column.upper)))
    throw std::invalid_argument("integer column '" + column.name +
                                "' needs finite bounds");
  columns_.push_back(std::move(column));
  return num_cols() - 1;
}

int ProblemBuilder::add_row(Row row) {
  rows_.push_back(std::move(row));
  return num_rows() - 1;
}

void ProblemBuilder::add_entry(int row, int col, double value) {
  if (row < 0 || row >= num_rows() || col < 0 || col >= num_cols())
    throw std::out_of_range("add_entry: index out of range");
  entries_.push_back({row, col, value});
}

Problem ProblemBuilder::finish() && {
  Problem p;
  std::stable_sort(entries_.begin(), entries_.end(),
                   [](const Entry& a, const Entry& b) {
                     return a.col != b.col ? a.col < b.col : a.row < b.row;
                   });
  std::vector<Entry> merged;
  merged.reserve(entries_.size());
  for (const Entry& e : entries_) {
    if (!merged.empty() && merged.back().row == e.row &&
        merged.back().col == e.col) {
      merged.back().value += e.value;
    } else {
      merged.push_back(e);
    }
  }
  std::erase_if(merged, [](const Entry& e) { return e.value == 0.0; });

  p.columns_ = std::move(columns_);
  p.rows_ = std::move(rows_);
  p.entries_ = std::move(merged);
  p.objective_offset_ = offset_;
  p.col_start_.assign(p.columns_.size() + 1, 0);
  for (const Entry& e : p.entries_) ++p.col_start_[e.col + 1];
  for (size_t j = 0; j < p.columns_.size(); ++j)
    p.col_start_[j + 1] += p.col_start_[j];
  for (int j = 0; j < p.num_cols(); ++j) {
    if (!p.col_lookup_.emplace(p.columns_[j].name, j).second)
      throw std::invalid_argument("duplicate column name " + p.columns_[j].name);
  }
  for (int i = 0; i < p.num_rows(); ++i) {
    if (!p.row_lookup_.emplace(p.rows_[i].name, i).second)
      throw std::invalid_argument("duplicate row name " + p.rows_[i].name);
  }
  return p;
}

std::vector<Violation> check_point(const Problem& problem,
                                   std::span<const double> x, double feas_tol,
                                   double int_tol) {
  std::vector<Violation> out;
  if (x.size() != static_cast<size_t>(problem.num_cols())) {
    out.push_back({Violation::Kind::kBound, -1, kInf, "dimension"});
    return out;
  }
  // Row tolerance is relative to the magnitude of the terms in the row.
  std::vector<double> activity(problem.num_rows(), 0.0);
  std::vector<double> scale(problem.num_rows(), 1.0);
  for (const Entry& e : problem.entries()) {
    double term = e.value * x[e.col];
    activity[e.row] += term;
    scale[e.row] = std::max(scale[e.row], std::abs(term));
  }
  for (int i = 0; i < problem.num_rows(); ++i) {
    const Row& r = problem.rows()[i];
    double tol = feas_tol * std::max(scale[i], std::abs(r.rhs));
    double excess = 0.0;
    switch (r.sense) {
      case RowSense::kLessEqual: excess = activity[i] - r.rhs; break;
      case RowSense::kGreaterEqual: excess = r.rhs - activity[i]; break;
      case RowSense::kEqual: excess = std::abs(activity[i] - r.rhs); break;
    }
    if (!(excess <= tol)) out.push_back({Violation::Kind::kRow, i, excess, r.name});
  }
  for (int j = 0; j < problem.num_cols(); ++j) {
    const Column& c = problem.columns()[j];
    double tol = feas_tol * std::max(1.0, std::abs(x[j]));
    double below = c.lower - x[j];
    double above = x[j] - c.upper;
    if (below > tol || above > tol || std::isnan(x[j]))
      out.push_back({Violation::Kind::kBound, j, std::max(below, above), c.name});
    if (c.integer && std::abs(x[j] - std::round(x[j])) > int_tol)
      out.push_back({Violation::Kind::kIntegrality, j,
                     std::abs(x[j] - std::round(x[j])), c.name});
  }
  return out;
}

const char* to_string(RowSense sense) {
  switch (sense) {
    case RowSense::kLessEqual: return "<=";
    case RowSense::kGreaterEqual: return ">=";
    case RowSense::kEqual: return "=";
  }
  return "?";
}

}  // namespace flexccs
