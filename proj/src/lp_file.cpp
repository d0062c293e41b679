#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "flexccs/external.hpp"

namespace flexccs {

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) return "0";
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

namespace {

std::string signed_term(double coef, const std::string& name) {
  std::string out = coef < 0 ? " - " : " + ";
  out += format_number(std::abs(coef));
  out += ' ';
  out += name;
  return out;
}

// Appends terms, breaking lines so none grows past ~200 characters.
void append_terms(std::string& out, std::string& line, const std::string& term) {
  if (line.size() + term.size() > 200) {
    out += line;
    out += '\n';
    line = "   ";
  }
  line += term;
}

std::string bound_text(double v) {
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  return format_number(v);
}

}  // namespace

std::string write_problem_file(const Problem& problem) {
  std::string out;
  out += "\\ flexccs problem: " + std::to_string(problem.num_cols()) + " columns, " +
         std::to_string(problem.num_rows()) + " rows\n";
  out += "\\ objective offset " + format_number(problem.objective_offset()) + "\n";
  out += "Minimize\n";
  std::string line = " obj:";
  bool any = false;
  for (const Column& c : problem.columns()) {
    if (c.cost == 0.0) continue;
    append_terms(out, line, signed_term(c.cost, c.name));
    any = true;
  }
  if (!any && problem.num_cols() > 0)
    append_terms(out, line, signed_term(0.0, problem.columns()[0].name));
  out += line + "\n";

  out += "Subject To\n";
  std::vector<std::vector<std::pair<int, double>>> by_row(problem.num_rows());
  for (const Entry& e : problem.entries()) by_row[e.row].push_back({e.col, e.value});
  for (int i = 0; i < problem.num_rows(); ++i) {
    const Row& r = problem.rows()[i];
    line = " " + r.name + ":";
    if (by_row[i].empty()) {
      // An empty row still needs a variable reference to be well formed.
      append_terms(out, line, signed_term(0.0, problem.columns()[0].name));
    }
    for (auto [col, v] : by_row[i]) append_terms(out, line, signed_term(v, problem.columns()[col].name));
    line += std::string(" ") + to_string(r.sense) + " " + format_number(r.rhs);
    out += line + "\n";
  }

  out += "Bounds\n";
  for (const Column& c : problem.columns()) {
    if (c.lower == 0.0 && std::isinf(c.upper) && c.upper > 0) continue;
    if (c.lower == c.upper) {
      out += " " + c.name + " = " + format_number(c.lower) + "\n";
    } else if (std::isinf(c.lower) && std::isinf(c.upper)) {
      out += " " + c.name + " free\n";
    } else {
      out += " " + bound_text(c.lower) + " <= " + c.name + " <= " + bound_text(c.upper) + "\n";
    }
  }

  bool header = false;
  line.clear();
  for (const Column& c : problem.columns()) {
    if (!c.integer) continue;
    if (!header) {
      out += "Generals\n";
      header = true;
      line = "";
    }
    append_terms(out, line, " " + c.name);
  }
  if (header) out += line + "\n";
  out += "End\n";
  return out;
}

Solution read_solution_file(const std::string& text, const Problem& problem) {
  Solution sol;
  sol.x.assign(problem.num_cols(), 0.0);
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  bool have_status = false;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    size_t first = raw.find_first_not_of(" \t");
    if (first == std::string::npos || raw[first] == '#') continue;
    size_t name_end = raw.find_first_of(" \t", first);
    if (name_end == std::string::npos)
      throw ParseError(line_no, static_cast<int>(raw.size()) + 1, "expected '<name> <value>'");
    std::string name = raw.substr(first, name_end - first);
    size_t value_begin = raw.find_first_not_of(" \t", name_end);
    if (value_begin == std::string::npos)
      throw ParseError(line_no, static_cast<int>(raw.size()) + 1, "missing value");
    size_t value_end = raw.find_first_of(" \t", value_begin);
    std::string token = raw.substr(value_begin, value_end == std::string::npos
                                                    ? std::string::npos
                                                    : value_end - value_begin);
    if (value_end != std::string::npos &&
        raw.find_first_not_of(" \t", value_end) != std::string::npos)
      throw ParseError(line_no, static_cast<int>(value_end) + 2, "trailing text");

    if (!have_status) {
      if (name != "status")
        throw ParseError(line_no, static_cast<int>(first) + 1, "expected 'status' header");
      if (token == "optimal") sol.status = SolveStatus::kOptimal;
      else if (token == "infeasible") sol.status = SolveStatus::kInfeasible;
      else if (token == "unbounded") sol.status = SolveStatus::kUnbounded;
      else if (token == "limit") sol.status = SolveStatus::kLimit;
      else if (token == "error") sol.status = SolveStatus::kError;
      else
        throw ParseError(line_no, static_cast<int>(value_begin) + 1,
                         "unknown status '" + token + "'");
      have_status = true;
      continue;
    }
    const int col = problem.find_column(name);
    if (col < 0)
      throw ParseError(line_no, static_cast<int>(first) + 1, "unknown variable '" + name + "'");
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size())
      throw ParseError(line_no, static_cast<int>(value_begin) + 1,
                       "malformed number '" + token + "'");
    sol.x[col] = value;
  }
  if (!have_status) throw ParseError(line_no + 1, 1, "missing status header");
  if (sol.status == SolveStatus::kOptimal || sol.status == SolveStatus::kLimit) {
    sol.objective = problem.objective(sol.x);
    sol.best_bound = sol.objective;
  } else {
    sol.x.clear();
  }
  return sol;
}

std::string write_solution_file(const Problem& problem, const Solution& solution) {
  std::string out = std::string("status ") + to_string(solution.status) + "\n";
  if (solution.x.size() != static_cast<size_t>(problem.num_cols())) return out;
  for (int j = 0; j < problem.num_cols(); ++j)
    out += problem.columns()[j].name + " " + format_number(solution.x[j]) + "\n";
  return out;
}

Solution solve_external(const Problem& problem, const SolverOptions& options) {
  std::string command = options.external_command;
  if (command.empty()) {
    if (const char* env = std::getenv("FLEXCCS_EXTERNAL_SOLVER")) command = env;
  }
  if (command.empty())
    throw SolverError("external backend selected but no solver command configured "
                      "(set FLEXCCS_EXTERNAL_SOLVER)");
  namespace fs = std::filesystem;
  const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
  fs::path dir = fs::temp_directory_path() /
                 ("flexccs-" + std::to_string(stamp) + "-" +
                  std::to_string(reinterpret_cast<std::uintptr_t>(&problem)));
  fs::create_directories(dir);
  const fs::path lp = dir / "problem.lp";
  const fs::path sol = dir / "solution.txt";
  {
    std::ofstream f(lp);
    f << write_problem_file(problem);
  }
  auto replace_all = [](std::string s, const std::string& key, const std::string& with) {
    for (size_t pos = s.find(key); pos != std::string::npos; pos = s.find(key, pos + with.size()))
      s.replace(pos, key.size(), with);
    return s;
  };
  command = replace_all(command, "{lp}", lp.string());
  command = replace_all(command, "{sol}", sol.string());
  command = replace_all(command, "{gap}", format_number(options.mip_gap));
  command = replace_all(command, "{time}", format_number(options.time_limit));
  const auto t0 = std::chrono::steady_clock::now();
  const int rc = std::system(command.c_str());
  if (rc != 0) {
    fs::remove_all(dir);
    throw SolverError("external solver command failed with code " + std::to_string(rc));
  }
  std::ifstream f(sol);
  if (!f) {
    fs::remove_all(dir);
    throw SolverError("external solver produced no solution file");
  }
  std::stringstream buffer;
  buffer << f.rdbuf();
  Solution out = read_solution_file(buffer.str(), problem);
  out.stats.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  fs::remove_all(dir);
  return out;
}

}  // namespace flexccs
