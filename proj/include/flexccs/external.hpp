#pragma once

#include <stdexcept>
#include <string>

#include "flexccs/problem.hpp"
#include "flexccs/solver.hpp"

namespace flexccs {

// Error raised while reading a solution file; carries 1-based location.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// CPLEX-style LP text (Minimize / Subject To / Bounds / Generals / End).
std::string write_problem_file(const Problem& problem);

// Solution text: first line "status <word>", then one "<name> <value>" per
// line. Columns that are not listed are zero. The objective is recomputed.
Solution read_solution_file(const std::string& text, const Problem& problem);
std::string write_solution_file(const Problem& problem, const Solution& solution);

// Writes the problem to a scratch directory, runs the configured command and
// reads back the solution file.
Solution solve_external(const Problem& problem, const SolverOptions& options);

// Shortest round-trip decimal text, independent of the global locale.
std::string format_number(double value);

}  // namespace flexccs
