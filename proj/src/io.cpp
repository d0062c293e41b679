#include "flexccs/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "flexccs/external.hpp"

namespace flexccs {

using json = nlohmann::json;

std::string to_string(const InputIssue& issue) {
  std::string s = issue.file;
  if (issue.line > 0) s += ":" + std::to_string(issue.line);
  if (!s.empty()) s += ": ";
  return s + issue.message;
}

namespace {

std::string join_issues(const std::vector<InputIssue>& issues) {
  std::string s;
  for (const InputIssue& i : issues) {
    if (!s.empty()) s += "\n";
    s += to_string(i);
  }
  return s;
}

std::string read_file(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buf;
  buf << f.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
  if (!f.flush()) throw std::runtime_error("cannot write " + path.string());
}

// ---- CSV ----------------------------------------------------------------

struct CsvRow {
  int line = 0;
  std::vector<std::string> cells;
};

struct Csv {
  std::string file;
  std::vector<std::string> header;
  std::map<std::string, int> column;
  std::vector<CsvRow> rows;

  bool has(const std::string& name) const { return column.count(name) > 0; }
  const std::string& cell(const CsvRow& row, const std::string& name) const {
    static const std::string empty;
    auto it = column.find(name);
    return it == column.end() ? empty : row.cells[it->second];
  }
};

std::string trim(std::string_view s) {
  size_t a = 0, b = s.size();
  while (a < b && (s[a] == ' ' || s[a] == '\t')) ++a;
  while (b > a && (s[b - 1] == ' ' || s[b - 1] == '\t' || s[b - 1] == '\r')) --b;
  return std::string(s.substr(a, b - a));
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  size_t pos = 0;
  while (true) {
    size_t comma = line.find(',', pos);
    out.push_back(trim(std::string_view(line).substr(pos, comma == std::string::npos
                                                             ? std::string::npos
                                                             : comma - pos)));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::optional<Csv> read_csv(const fs::path& dir, const std::string& file,
                            const std::vector<std::string>& required,
                            const std::vector<std::string>& allowed,
                            std::vector<InputIssue>& issues) {
  const fs::path path = dir / file;
  if (!fs::exists(path)) {
    issues.push_back({file, 0, "file not found"});
    return std::nullopt;
  }
  Csv csv;
  csv.file = file;
  std::istringstream in(read_file(path));
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (line == 1 && raw.starts_with("\xEF\xBB\xBF")) raw.erase(0, 3);
    const std::string t = trim(raw);
    if (t.empty() || t[0] == '#') continue;
    auto cells = split(t);
    if (csv.header.empty()) {
      csv.header = cells;
      for (int i = 0; i < static_cast<int>(cells.size()); ++i) {
        if (std::find(allowed.begin(), allowed.end(), cells[i]) == allowed.end())
          issues.push_back({file, line, "unknown column '" + cells[i] + "'"});
        else if (!csv.column.emplace(cells[i], i).second)
          issues.push_back({file, line, "duplicate column '" + cells[i] + "'"});
      }
      for (const std::string& r : required)
        if (!csv.column.count(r)) issues.push_back({file, line, "missing column '" + r + "'"});
      continue;
    }
    if (cells.size() != csv.header.size()) {
      issues.push_back({file, line, "expected " + std::to_string(csv.header.size()) +
                                        " fields, found " + std::to_string(cells.size())});
      continue;
    }
    csv.rows.push_back({line, std::move(cells)});
  }
  if (csv.header.empty()) issues.push_back({file, 0, "no header row"});
  return csv;
}

std::optional<double> parse_double(const std::string& text) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<long> parse_long(const std::string& text) {
  long v = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return v;
}

std::optional<bool> parse_bool(const std::string& text) {
  std::string t = text;
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  return std::nullopt;
}

// Typed access to one CSV row; failures are recorded with the row's line.
struct RowReader {
  const Csv& csv;
  const CsvRow& row;
  std::vector<InputIssue>& issues;

  const std::string& raw(const std::string& col) const { return csv.cell(row, col); }
  bool empty(const std::string& col) const { return raw(col).empty(); }
  void fail(const std::string& col, const std::string& what) const {
    issues.push_back({csv.file, row.line, col + ": " + what});
  }
  void number(const std::string& col, double& out) const {
    if (empty(col)) return;
    if (auto v = parse_double(raw(col))) out = *v;
    else fail(col, "malformed number '" + raw(col) + "'");
  }
  void optional_number(const std::string& col, std::optional<double>& out) const {
    if (empty(col)) return;
    double v = 0.0;
    number(col, v);
    out = v;
  }
  void integer(const std::string& col, int& out) const {
    if (empty(col)) return;
    auto v = parse_long(raw(col));
    if (!v) {
      // accept "12.0" style whole numbers
      auto d = parse_double(raw(col));
      if (d && *d == std::floor(*d) && std::abs(*d) < 1e9) v = static_cast<long>(*d);
    }
    if (v) out = static_cast<int>(*v);
    else fail(col, "expected a whole number, found '" + raw(col) + "'");
  }
  void boolean(const std::string& col, bool& out) const {
    if (empty(col)) return;
    if (auto v = parse_bool(raw(col))) out = *v;
    else fail(col, "expected true or false, found '" + raw(col) + "'");
  }
};

// ---- resources.csv --------------------------------------------------------

const std::vector<std::string> kResourceColumns = {
    "name", "class", "existing_mw", "can_expand", "can_retire", "max_mw", "unit_mw",
    "capex_usd_per_kw", "capex_usd_per_kwh", "fom_usd_per_kw_yr", "fom_usd_per_kwh_yr",
    "vom_usd_per_mwh", "heat_rate_mmbtu_per_mwh", "fuel_usd_per_mmbtu", "co2_t_per_mmbtu",
    "capture_rate", "ces_qualifying", "ptc_usd_per_mwh", "itc_fraction", "lifetime_yr",
    "existing_mwh", "eff_charge", "eff_discharge", "max_duration_h",
    "min_load", "ramp_rate", "min_up_h", "min_down_h", "startup_usd_per_mw",
    "startup_fuel_mmbtu_per_mw"};

const std::vector<std::string> kStorageColumns = {"existing_mwh", "eff_charge", "eff_discharge",
                                                  "max_duration_h"};
const std::vector<std::string> kFlexColumns = {"min_load", "ramp_rate", "min_up_h", "min_down_h",
                                               "startup_usd_per_mw", "startup_fuel_mmbtu_per_mw"};

ResourceSpec read_resource(const RowReader& r) {
  ResourceSpec s;
  s.name = r.raw("name");
  if (s.name.empty()) r.fail("name", "empty resource name");
  try {
    s.cls = parse_resource_class(r.raw("class"));
  } catch (const std::exception& e) {
    r.fail("class", e.what());
  }
  r.number("existing_mw", s.existing_cap);
  r.boolean("can_expand", s.can_expand);
  r.boolean("can_retire", s.can_retire);
  r.optional_number("max_mw", s.max_cap);
  r.number("unit_mw", s.unit_size);
  r.number("capex_usd_per_kw", s.capex_power);
  r.number("capex_usd_per_kwh", s.capex_energy);
  r.number("fom_usd_per_kw_yr", s.fom_power);
  r.number("fom_usd_per_kwh_yr", s.fom_energy);
  r.number("vom_usd_per_mwh", s.vom);
  r.number("heat_rate_mmbtu_per_mwh", s.heat_rate);
  r.number("fuel_usd_per_mmbtu", s.fuel_price);
  r.number("co2_t_per_mmbtu", s.emission_factor);
  r.number("capture_rate", s.capture_rate);
  r.boolean("ces_qualifying", s.ces_qualifying);
  r.number("ptc_usd_per_mwh", s.ptc);
  r.number("itc_fraction", s.itc_fraction);
  r.optional_number("lifetime_yr", s.lifetime_years);

  if (s.cls == ResourceClass::kStorage) {
    StorageParams st;
    r.number("existing_mwh", st.existing_energy);
    r.number("eff_charge", st.eff_charge);
    r.number("eff_discharge", st.eff_discharge);
    r.optional_number("max_duration_h", st.duration_max);
    s.storage = st;
  } else {
    for (const std::string& c : kStorageColumns)
      if (!r.empty(c)) r.fail(c, "storage field set on a non-storage resource");
  }
  if (s.cls == ResourceClass::kThermalUc) {
    FlexParams f;
    r.number("min_load", f.min_load);
    r.number("ramp_rate", f.ramp_rate);
    r.integer("min_up_h", f.min_up);
    r.integer("min_down_h", f.min_down);
    r.number("startup_usd_per_mw", f.startup_cost);
    r.number("startup_fuel_mmbtu_per_mw", f.startup_fuel);
    s.flex = f;
  } else {
    for (const std::string& c : kFlexColumns)
      if (!r.empty(c)) r.fail(c, "commitment field set on a resource without unit commitment");
  }
  return s;
}

std::vector<std::string> resource_row(const ResourceSpec& s) {
  auto num = [](double v) { return format_number(v); };
  auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
  auto flag = [](bool b) { return std::string(b ? "true" : "false"); };
  std::vector<std::string> row = {
      s.name, to_string(s.cls), num(s.existing_cap), flag(s.can_expand), flag(s.can_retire),
      opt(s.max_cap), num(s.unit_size), num(s.capex_power), num(s.capex_energy),
      num(s.fom_power), num(s.fom_energy), num(s.vom), num(s.heat_rate), num(s.fuel_price),
      num(s.emission_factor), num(s.capture_rate), flag(s.ces_qualifying), num(s.ptc),
      num(s.itc_fraction), opt(s.lifetime_years)};
  if (s.storage) {
    row.insert(row.end(), {num(s.storage->existing_energy), num(s.storage->eff_charge),
                           num(s.storage->eff_discharge), opt(s.storage->duration_max)});
  } else {
    row.insert(row.end(), 4, "");
  }
  if (s.flex) {
    row.insert(row.end(), {num(s.flex->min_load), num(s.flex->ramp_rate),
                           std::to_string(s.flex->min_up), std::to_string(s.flex->min_down),
                           num(s.flex->startup_cost), num(s.flex->startup_fuel)});
  } else {
    row.insert(row.end(), 6, "");
  }
  return row;
}

std::string csv_line(const std::vector<std::string>& cells) {
  std::string s;
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) s += ',';
    s += cells[i];
  }
  return s + "\n";
}

// ---- hourly series --------------------------------------------------------

// Checks that the hours seen are exactly 1..T once each.
void check_hours(const std::string& file, const std::string& what,
                 const std::map<int, int>& seen_line, int T, std::vector<InputIssue>& issues) {
  for (int h = 1; h <= T; ++h)
    if (!seen_line.count(h)) {
      issues.push_back({file, 0, what + "hour " + std::to_string(h) + " is missing (hours must run 1.." +
                                     std::to_string(T) + " without gaps)"});
      return;
    }
}

// ---- scenario.json --------------------------------------------------------

struct JsonReader {
  std::vector<InputIssue>& issues;

  void fail(const std::string& path, const std::string& what) const {
    issues.push_back({kScenarioFile, 0, path + ": " + what});
  }
  bool object(const json& j, const std::string& path, std::initializer_list<const char*> keys) const {
    if (!j.is_object()) {
      fail(path, "expected an object");
      return false;
    }
    for (auto it = j.begin(); it != j.end(); ++it)
      if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return it.key() == k; }))
        fail(path + "." + it.key(), "unknown key");
    return true;
  }
  void number(const json& j, const std::string& path, const char* key, double& out) const {
    if (!j.contains(key)) return;
    if (!j[key].is_number()) return fail(path + "." + key, "expected a number");
    out = j[key].get<double>();
  }
  void optional_number(const json& j, const std::string& path, const char* key,
                       std::optional<double>& out) const {
    if (!j.contains(key) || j[key].is_null()) return;
    double v = 0.0;
    number(j, path, key, v);
    out = v;
  }
  template <class Int>
  void integer(const json& j, const std::string& path, const char* key, Int& out) const {
    if (!j.contains(key)) return;
    const json& v = j[key];
    if (v.is_number_integer()) {
      out = v.get<Int>();
    } else if (v.is_number() && v.get<double>() == std::floor(v.get<double>())) {
      out = static_cast<Int>(v.get<double>());
    } else {
      fail(path + "." + key, "expected a whole number");
    }
  }
  void boolean(const json& j, const std::string& path, const char* key, bool& out) const {
    if (!j.contains(key)) return;
    if (!j[key].is_boolean()) return fail(path + "." + key, "expected true or false");
    out = j[key].get<bool>();
  }
  void string(const json& j, const std::string& path, const char* key, std::string& out) const {
    if (!j.contains(key)) return;
    if (!j[key].is_string()) return fail(path + "." + key, "expected a string");
    out = j[key].get<std::string>();
  }
};

void read_flex(const JsonReader& r, const json& j, const std::string& path, FlexParams& f) {
  if (!r.object(j, path, {"min_load", "ramp_rate", "min_up_h", "min_down_h",
                          "startup_usd_per_mw", "startup_fuel_mmbtu_per_mw"}))
    return;
  r.number(j, path, "min_load", f.min_load);
  r.number(j, path, "ramp_rate", f.ramp_rate);
  r.integer(j, path, "min_up_h", f.min_up);
  r.integer(j, path, "min_down_h", f.min_down);
  r.number(j, path, "startup_usd_per_mw", f.startup_cost);
  r.number(j, path, "startup_fuel_mmbtu_per_mw", f.startup_fuel);
}

json flex_json(const FlexParams& f) {
  return {{"min_load", f.min_load},
          {"ramp_rate", f.ramp_rate},
          {"min_up_h", f.min_up},
          {"min_down_h", f.min_down},
          {"startup_usd_per_mw", f.startup_cost},
          {"startup_fuel_mmbtu_per_mw", f.startup_fuel}};
}

json nullable(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double from_nullable(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

json solver_json(const SolverOptions& o) {
  return {{"backend", to_string(o.backend)},
          {"feas_tol", o.feas_tol},
          {"int_tol", o.int_tol},
          {"mip_gap", o.mip_gap},
          {"node_limit", o.node_limit},
          {"time_limit_s", o.time_limit},
          {"iteration_limit", o.iteration_limit},
          {"external_command", o.external_command},
          {"verbose", o.verbose}};
}

void read_solver(const JsonReader& r, const json& j, const std::string& path, SolverOptions& o) {
  if (!r.object(j, path, {"backend", "feas_tol", "int_tol", "mip_gap", "node_limit",
                          "time_limit_s", "iteration_limit", "external_command", "verbose"}))
    return;
  std::string backend = to_string(o.backend);
  r.string(j, path, "backend", backend);
  try {
    o.backend = parse_backend(backend);
  } catch (const std::exception& e) {
    r.fail(path + ".backend", e.what());
  }
  r.number(j, path, "feas_tol", o.feas_tol);
  r.number(j, path, "int_tol", o.int_tol);
  r.number(j, path, "mip_gap", o.mip_gap);
  r.integer(j, path, "node_limit", o.node_limit);
  r.number(j, path, "time_limit_s", o.time_limit);
  r.integer(j, path, "iteration_limit", o.iteration_limit);
  r.string(j, path, "external_command", o.external_command);
  r.boolean(j, path, "verbose", o.verbose);
  if (o.mip_gap < 0) r.fail(path + ".mip_gap", "must be >= 0");
  if (o.feas_tol <= 0) r.fail(path + ".feas_tol", "must be > 0");
  if (o.int_tol <= 0 || o.int_tol >= 0.5) r.fail(path + ".int_tol", "must be in (0, 0.5)");
  if (o.time_limit <= 0) r.fail(path + ".time_limit_s", "must be > 0");
}

void read_scenario(const fs::path& dir, SystemSpec& sys, RunConfig& cfg,
                   std::vector<InputIssue>& issues) {
  const fs::path path = dir / kScenarioFile;
  if (!fs::exists(path)) {
    issues.push_back({kScenarioFile, 0, "file not found"});
    return;
  }
  const std::string text = read_file(path);
  json root;
  try {
    root = json::parse(text, nullptr, true, true);
  } catch (const json::parse_error& e) {
    const size_t upto = std::min(e.byte, text.size());
    const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + upto, '\n'));
    std::string msg = e.what();
    issues.push_back({kScenarioFile, line, "malformed JSON (" + msg + ")"});
    return;
  }
  JsonReader r{issues};
  if (!r.object(root, "$", {"system", "study_plant", "flex_bounds", "policies", "finance",
                            "solver", "sweep"}))
    return;

  if (root.contains("system")) {
    const json& j = root["system"];
    if (r.object(j, "system", {"nse_penalty_usd_per_mwh", "hour_weight"})) {
      r.number(j, "system", "nse_penalty_usd_per_mwh", sys.nse_penalty);
      r.optional_number(j, "system", "hour_weight", sys.hour_weight);
    }
  }
  if (root.contains("study_plant")) {
    const json& j = root["study_plant"];
    if (r.object(j, "study_plant", {"resource", "capacity_mw"})) {
      r.string(j, "study_plant", "resource", cfg.plant.resource);
      r.number(j, "study_plant", "capacity_mw", cfg.plant.capacity_mw);
      if (cfg.plant.capacity_mw <= 0) r.fail("study_plant.capacity_mw", "must be > 0");
    }
  }
  if (root.contains("flex_bounds")) {
    const json& j = root["flex_bounds"];
    if (r.object(j, "flex_bounds", {"inflexible", "flexible"})) {
      if (j.contains("inflexible")) read_flex(r, j["inflexible"], "flex_bounds.inflexible", cfg.bounds.inflexible);
      if (j.contains("flexible")) read_flex(r, j["flexible"], "flex_bounds.flexible", cfg.bounds.flexible);
    }
  }
  cfg.policies.clear();
  if (!root.contains("policies") || !root["policies"].is_array() || root["policies"].empty()) {
    r.fail("policies", "expected a non-empty array of policies");
  } else {
    std::set<std::string> names;
    for (size_t i = 0; i < root["policies"].size(); ++i) {
      const json& j = root["policies"][i];
      const std::string p = "policies[" + std::to_string(i) + "]";
      PolicyEnv pol;
      if (!r.object(j, p, {"name", "carbon_tax_usd_per_t", "ces_fraction",
                           "capture_credit_usd_per_t", "co2_ts_usd_per_t", "nuclear_no_retire",
                           "ces_basis", "credit_startup_capture"}))
        continue;
      r.string(j, p, "name", pol.name);
      r.number(j, p, "carbon_tax_usd_per_t", pol.carbon_tax);
      r.number(j, p, "ces_fraction", pol.ces_fraction);
      r.number(j, p, "capture_credit_usd_per_t", pol.capture_credit);
      r.number(j, p, "co2_ts_usd_per_t", pol.co2_transport_storage_cost);
      r.boolean(j, p, "nuclear_no_retire", pol.nuclear_no_retire);
      r.boolean(j, p, "credit_startup_capture", pol.credit_startup_capture);
      std::string basis = "demand";
      r.string(j, p, "ces_basis", basis);
      if (basis == "demand") pol.ces_basis = CesBasis::kDemand;
      else if (basis == "generation") pol.ces_basis = CesBasis::kGeneration;
      else r.fail(p + ".ces_basis", "expected 'demand' or 'generation'");
      if (!names.insert(pol.name).second) r.fail(p + ".name", "duplicate policy name '" + pol.name + "'");
      for (const ValidationIssue& v : validate_policy(pol)) r.fail(p + " " + v.where, v.message);
      cfg.policies.push_back(pol);
    }
  }
  if (root.contains("finance")) {
    const json& j = root["finance"];
    if (r.object(j, "finance", {"wacc", "lifetime_yr"})) {
      r.number(j, "finance", "wacc", cfg.finance.wacc);
      if (j.contains("lifetime_yr")) {
        const json& lt = j["lifetime_yr"];
        if (!lt.is_object()) {
          r.fail("finance.lifetime_yr", "expected an object of resource -> years");
        } else {
          for (auto it = lt.begin(); it != lt.end(); ++it) {
            if (!it.value().is_number()) r.fail("finance.lifetime_yr." + it.key(), "expected a number");
            else cfg.finance.lifetime_overrides[it.key()] = it.value().get<double>();
          }
        }
      }
      for (const ValidationIssue& v : validate_finance(cfg.finance)) r.fail("finance " + v.where, v.message);
    }
  }
  if (root.contains("solver")) read_solver(r, root["solver"], "solver", cfg.solver);
  if (root.contains("sweep")) {
    const json& j = root["sweep"];
    if (r.object(j, "sweep", {"combos", "workers", "stage_c_fixed_others"})) {
      r.integer(j, "sweep", "workers", cfg.workers);
      if (cfg.workers < 1) r.fail("sweep.workers", "must be >= 1");
      r.boolean(j, "sweep", "stage_c_fixed_others", cfg.stage_c_fixed_others);
      if (j.contains("combos")) {
        const json& c = j["combos"];
        if (c.is_string() && c.get<std::string>() == "all") {
          cfg.combos = all_combos();
        } else if (c.is_array()) {
          cfg.combos.clear();
          for (size_t i = 0; i < c.size(); ++i) {
            const std::string p = "sweep.combos[" + std::to_string(i) + "]";
            if (!c[i].is_string()) {
              r.fail(p, "expected a combination label such as \"P1+P3\"");
              continue;
            }
            try {
              cfg.combos.push_back(parse_combo(c[i].get<std::string>()));
            } catch (const std::exception& e) {
              r.fail(p, e.what());
            }
          }
        } else {
          r.fail("sweep.combos", "expected \"all\" or an array of combination labels");
        }
      }
    }
  }
}

json scenario_json(const SystemSpec& sys, const RunConfig& cfg) {
  json policies = json::array();
  for (const PolicyEnv& p : cfg.policies)
    policies.push_back({{"name", p.name},
                        {"carbon_tax_usd_per_t", p.carbon_tax},
                        {"ces_fraction", p.ces_fraction},
                        {"capture_credit_usd_per_t", p.capture_credit},
                        {"co2_ts_usd_per_t", p.co2_transport_storage_cost},
                        {"nuclear_no_retire", p.nuclear_no_retire},
                        {"ces_basis", p.ces_basis == CesBasis::kDemand ? "demand" : "generation"},
                        {"credit_startup_capture", p.credit_startup_capture}});
  json combos = json::array();
  for (FlexCombo c : cfg.combos) combos.push_back(combo_label(c));
  json lifetimes = json::object();
  for (const auto& [k, v] : cfg.finance.lifetime_overrides) lifetimes[k] = v;
  json system = {{"nse_penalty_usd_per_mwh", sys.nse_penalty}};
  system["hour_weight"] = sys.hour_weight ? json(*sys.hour_weight) : json(nullptr);
  return {{"system", system},
          {"study_plant", {{"resource", cfg.plant.resource}, {"capacity_mw", cfg.plant.capacity_mw}}},
          {"flex_bounds",
           {{"inflexible", flex_json(cfg.bounds.inflexible)},
            {"flexible", flex_json(cfg.bounds.flexible)}}},
          {"policies", policies},
          {"finance", {{"wacc", cfg.finance.wacc}, {"lifetime_yr", lifetimes}}},
          {"solver", solver_json(cfg.solver)},
          {"sweep",
           {{"combos", combos},
            {"workers", cfg.workers},
            {"stage_c_fixed_others", cfg.stage_c_fixed_others}}}};
}

}  // namespace

InputError::InputError(std::vector<InputIssue> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

std::string format_fixed(double v, int decimals) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, decimals);
  if (ec != std::errc()) return format_number(v);
  std::string s(buf, ptr);
  if (s[0] == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

InputBundle load_inputs(const fs::path& dir) {
  if (!fs::is_directory(dir))
    throw InputError({{dir.string(), 0, "input directory not found"}});
  std::vector<InputIssue> issues;
  InputBundle in;
  SystemSpec& sys = in.system;

  // demand.csv
  if (auto csv = read_csv(dir, kDemandFile, {"hour", "load_mw"}, {"hour", "load_mw"}, issues)) {
    std::map<int, int> seen;
    std::map<int, double> load;
    for (const CsvRow& row : csv->rows) {
      auto h = parse_long(csv->cell(row, "hour"));
      auto v = parse_double(csv->cell(row, "load_mw"));
      if (!h || *h < 1) {
        issues.push_back({kDemandFile, row.line, "hour must be a positive whole number"});
        continue;
      }
      if (!v) {
        issues.push_back({kDemandFile, row.line, "malformed load '" + csv->cell(row, "load_mw") + "'"});
        continue;
      }
      if (!seen.emplace(static_cast<int>(*h), row.line).second) {
        issues.push_back({kDemandFile, row.line, "hour " + std::to_string(*h) + " repeats line " +
                                                     std::to_string(seen[*h])});
        continue;
      }
      load[static_cast<int>(*h)] = *v;
    }
    const int T = seen.empty() ? 0 : seen.rbegin()->first;
    if (T == 0 && csv->rows.empty()) issues.push_back({kDemandFile, 0, "no demand rows"});
    check_hours(kDemandFile, "", seen, T, issues);
    sys.horizon_hours = T;
    sys.demand.assign(T, 0.0);
    for (const auto& [h, v] : load) sys.demand[h - 1] = v;
  }

  // resources.csv
  if (auto csv = read_csv(dir, kResourcesFile, {"name", "class"}, kResourceColumns, issues)) {
    std::map<std::string, int> seen;
    for (const CsvRow& row : csv->rows) {
      RowReader r{*csv, row, issues};
      ResourceSpec s = read_resource(r);
      if (!s.name.empty() && !seen.emplace(s.name, row.line).second) {
        r.fail("name", "resource '" + s.name + "' already defined on line " +
                           std::to_string(seen[s.name]));
        continue;
      }
      sys.resources.push_back(std::move(s));
    }
    if (csv->rows.empty()) issues.push_back({kResourcesFile, 0, "no resources"});
  }

  // profiles.csv
  const int T = sys.horizon_hours;
  if (auto csv = read_csv(dir, kProfilesFile, {"hour", "resource", "availability"},
                          {"hour", "resource", "availability"}, issues)) {
    std::map<std::string, std::map<int, int>> seen;
    for (const CsvRow& row : csv->rows) {
      const std::string& name = csv->cell(row, "resource");
      const int g = sys.find_resource(name);
      if (g < 0) {
        issues.push_back({kProfilesFile, row.line, "unknown resource '" + name + "'"});
        continue;
      }
      if (sys.resources[g].cls != ResourceClass::kVre) {
        issues.push_back({kProfilesFile, row.line, "resource '" + name + "' is not variable renewable"});
        continue;
      }
      auto h = parse_long(csv->cell(row, "hour"));
      auto v = parse_double(csv->cell(row, "availability"));
      if (!h || *h < 1 || *h > T) {
        issues.push_back({kProfilesFile, row.line, "hour '" + csv->cell(row, "hour") +
                                                       "' outside 1.." + std::to_string(T)});
        continue;
      }
      if (!v) {
        issues.push_back({kProfilesFile, row.line, "malformed availability '" +
                                                       csv->cell(row, "availability") + "'"});
        continue;
      }
      auto& hours = seen[name];
      if (!hours.emplace(static_cast<int>(*h), row.line).second) {
        issues.push_back({kProfilesFile, row.line, "hour " + std::to_string(*h) + " of '" + name +
                                                       "' repeats line " + std::to_string(hours[*h])});
        continue;
      }
      auto& prof = sys.vre_profiles[name];
      prof.resize(T, 0.0);
      prof[*h - 1] = *v;
    }
    for (const auto& [name, hours] : seen) check_hours(kProfilesFile, "'" + name + "': ", hours, T, issues);
  }

  read_scenario(dir, sys, in.config, issues);

  // cross references
  if (!sys.resources.empty()) {
    const int g = sys.find_resource(in.config.plant.resource);
    if (g < 0)
      issues.push_back({kScenarioFile, 0, "study_plant.resource: unknown resource '" +
                                              in.config.plant.resource + "'"});
    else if (sys.resources[g].cls != ResourceClass::kThermalUc)
      issues.push_back({kScenarioFile, 0, "study_plant.resource: '" + in.config.plant.resource +
                                              "' is not a thermal-uc resource"});
    for (const auto& [name, years] : in.config.finance.lifetime_overrides)
      if (sys.find_resource(name) < 0)
        issues.push_back({kScenarioFile, 0, "finance.lifetime_yr." + name + ": unknown resource"});
  }
  if (issues.empty())
    for (const ValidationIssue& v : validate_system(sys))
      issues.push_back({kResourcesFile, 0, v.where + ": " + v.message});
  if (!issues.empty()) throw InputError(std::move(issues));

  std::string all;
  for (const char* f : {kDemandFile, kProfilesFile, kResourcesFile, kScenarioFile}) {
    const std::string text = read_file(dir / f);
    all += std::string(f) + '\0' + std::to_string(text.size()) + '\0' + text;
  }
  in.hash = sha256_hex(all);
  return in;
}

void write_inputs(const SystemSpec& sys, const RunConfig& cfg, const fs::path& dir) {
  std::string demand = "hour,load_mw\n";
  for (int t = 0; t < sys.horizon_hours; ++t)
    demand += std::to_string(t + 1) + "," + format_number(sys.demand[t]) + "\n";
  std::string profiles = "hour,resource,availability\n";
  for (const auto& [name, prof] : sys.vre_profiles)
    for (size_t t = 0; t < prof.size(); ++t)
      profiles += std::to_string(t + 1) + "," + name + "," + format_number(prof[t]) + "\n";
  std::string resources = csv_line(kResourceColumns);
  for (const ResourceSpec& r : sys.resources) resources += csv_line(resource_row(r));
  write_file(dir / kDemandFile, demand);
  write_file(dir / kProfilesFile, profiles);
  write_file(dir / kResourcesFile, resources);
  write_file(dir / kScenarioFile, scenario_json(sys, cfg).dump(2) + "\n");
}

StagePlan make_plan(const InputBundle& in, Stage stage) {
  StagePlan plan;
  plan.stage = stage;
  plan.policies = in.config.policies;
  plan.combos = in.config.combos;
  plan.plant = in.config.plant;
  plan.bounds = in.config.bounds;
  plan.finance = in.config.finance;
  plan.solver = in.config.solver;
  plan.workers = in.config.workers;
  plan.stage_c_fixed_others = in.config.stage_c_fixed_others;
  plan.input_hash = in.hash;
  return plan;
}

// ---- results ----------------------------------------------------------------

namespace {

json capacity_json(const CapacitySet& c) {
  return {{"policy", c.policy}, {"power_mw", c.power}, {"energy_mwh", c.energy}, {"tsc_usd", c.tsc}};
}

CapacitySet capacity_from(const json& j) {
  CapacitySet c;
  c.policy = j.at("policy").get<std::string>();
  c.power = j.at("power_mw").get<std::map<std::string, double>>();
  c.energy = j.at("energy_mwh").get<std::map<std::string, double>>();
  c.tsc = j.at("tsc_usd").get<double>();
  return c;
}

json spells_json(const std::map<int, int>& m) {
  json j = json::object();
  for (const auto& [k, v] : m) j[std::to_string(k)] = v;
  return j;
}

std::map<int, int> spells_from(const json& j) {
  std::map<int, int> m;
  for (auto it = j.begin(); it != j.end(); ++it) m[std::stoi(it.key())] = it.value().get<int>();
  return m;
}

json cell_json(const SweepCell& c) {
  const ProfitStatement& p = c.profit;
  json resources = json::array();
  for (const ResourceMetrics& r : c.metrics.resources) {
    json m = {{"name", r.name},
              {"capacity_mw", r.capacity_mw},
              {"energy_capacity_mwh", r.energy_capacity_mwh},
              {"generation_mwh", r.generation_mwh},
              {"capacity_factor", r.capacity_factor},
              {"startups", r.startups},
              {"annual_startups", r.annual_startups},
              {"captured_t", r.captured_t},
              {"emitted_t", r.emitted_t},
              {"curtailed_mwh", r.curtailed_mwh}};
    if (r.spells) m["spells"] = {{"on", spells_json(r.spells->on)}, {"off", spells_json(r.spells->off)}};
    resources.push_back(m);
  }
  return {{"policy", c.policy},
          {"combo", combo_label(c.combo)},
          {"profit",
           {{"energy_revenue", p.energy_revenue},
            {"capture_credit_revenue", p.capture_credit_revenue},
            {"ptc_revenue", p.ptc_revenue},
            {"fuel_cost", p.fuel_cost},
            {"vom_cost", p.vom_cost},
            {"carbon_tax_cost", p.carbon_tax_cost},
            {"ts_cost", p.ts_cost},
            {"startup_cost", p.startup_cost},
            {"operating_profit", p.operating_profit},
            {"fom_cost", p.fom_cost}}},
          {"plant_capacity_mw", c.plant_capacity_mw},
          {"renewable_capacity_mw", c.renewable_capacity_mw},
          {"tsc_usd", c.tsc.total},
          {"tsc_excluding_transfers_usd", c.tsc.excluding_transfers},
          {"objective", nullable(c.objective)},
          {"best_bound", nullable(c.best_bound)},
          {"plant_marginal_cost", c.plant_marginal_cost},
          {"prices", c.prices},
          {"plant_output", c.plant_output},
          {"stats",
           {{"iterations", c.stats.iterations},
            {"nodes", c.stats.nodes},
            {"wall_seconds", c.stats.wall_seconds}}},
          {"metrics",
           {{"hour_weight", c.metrics.hour_weight},
            {"nse_mwh", c.metrics.nse_mwh},
            {"resources", resources}}}};
}

SweepCell cell_from(const json& j) {
  SweepCell c;
  c.policy = j.at("policy").get<std::string>();
  c.combo = parse_combo(j.at("combo").get<std::string>());
  const json& p = j.at("profit");
  c.profit.energy_revenue = p.at("energy_revenue").get<double>();
  c.profit.capture_credit_revenue = p.at("capture_credit_revenue").get<double>();
  c.profit.ptc_revenue = p.at("ptc_revenue").get<double>();
  c.profit.fuel_cost = p.at("fuel_cost").get<double>();
  c.profit.vom_cost = p.at("vom_cost").get<double>();
  c.profit.carbon_tax_cost = p.at("carbon_tax_cost").get<double>();
  c.profit.ts_cost = p.at("ts_cost").get<double>();
  c.profit.startup_cost = p.at("startup_cost").get<double>();
  c.profit.operating_profit = p.at("operating_profit").get<double>();
  c.profit.fom_cost = p.at("fom_cost").get<double>();
  c.plant_capacity_mw = j.at("plant_capacity_mw").get<double>();
  c.renewable_capacity_mw = j.at("renewable_capacity_mw").get<double>();
  c.tsc.total = j.at("tsc_usd").get<double>();
  c.tsc.excluding_transfers = j.at("tsc_excluding_transfers_usd").get<double>();
  c.objective = from_nullable(j.at("objective"));
  c.best_bound = from_nullable(j.at("best_bound"));
  c.plant_marginal_cost = j.at("plant_marginal_cost").get<double>();
  c.prices = j.at("prices").get<std::vector<double>>();
  c.plant_output = j.at("plant_output").get<std::vector<double>>();
  const json& s = j.at("stats");
  c.stats.iterations = s.at("iterations").get<long>();
  c.stats.nodes = s.at("nodes").get<long>();
  c.stats.wall_seconds = s.at("wall_seconds").get<double>();
  const json& m = j.at("metrics");
  c.metrics.hour_weight = m.at("hour_weight").get<double>();
  c.metrics.nse_mwh = m.at("nse_mwh").get<double>();
  c.metrics.system_cost = c.tsc;
  for (const json& r : m.at("resources")) {
    ResourceMetrics rm;
    rm.name = r.at("name").get<std::string>();
    rm.capacity_mw = r.at("capacity_mw").get<double>();
    rm.energy_capacity_mwh = r.at("energy_capacity_mwh").get<double>();
    rm.generation_mwh = r.at("generation_mwh").get<double>();
    rm.capacity_factor = r.at("capacity_factor").get<double>();
    rm.startups = r.at("startups").get<double>();
    rm.annual_startups = r.at("annual_startups").get<double>();
    rm.captured_t = r.at("captured_t").get<double>();
    rm.emitted_t = r.at("emitted_t").get<double>();
    rm.curtailed_mwh = r.at("curtailed_mwh").get<double>();
    if (r.contains("spells"))
      rm.spells = SpellHistogram{spells_from(r["spells"].at("on")), spells_from(r["spells"].at("off"))};
    c.metrics.resources.push_back(std::move(rm));
  }
  return c;
}

const SweepCell* find_cell(const SweepReport& rep, const std::string& policy, FlexCombo combo) {
  for (const SweepCell& c : rep.cells)
    if (c.policy == policy && c.combo == combo) return &c;
  return nullptr;
}

// One delta table in the supplementary layout: rows P1..P5, the 17 columns.
struct TableSpec {
  const char* name;
  const char* unit;
  double (*value)(const SweepCell&);
};

double profit_musd(const SweepCell& c) { return c.profit.operating_profit / 1e6; }
double capacity_gw(const SweepCell& c) { return c.plant_capacity_mw / 1e3; }
double tsc_musd(const SweepCell& c) { return c.tsc.total / 1e6; }

void emit_table(const SweepReport& rep, const TableSpec& spec, const fs::path& dir,
                std::vector<fs::path>& files) {
  const auto cols = table_columns();
  std::vector<std::string> header = {"policy", "lever"};
  for (FlexCombo c : cols) header.push_back(combo_label(c));
  std::string text = csv_line(header);
  json tables = json::array();
  for (const std::string& policy : rep.policies) {
    const SweepCell* base = find_cell(rep, policy, kNoLevers);
    if (!base) continue;
    const double b = spec.value(*base);
    json rows = json::object();
    for (int k = 1; k <= kNumLevers; ++k) {
      std::vector<std::string> line = {policy, "P" + std::to_string(k)};
      json values = json::array();
      for (FlexCombo col : cols) {
        auto target = table_cell(col, k);
        const SweepCell* c = target ? find_cell(rep, policy, *target) : nullptr;
        if (!target) {
          line.push_back("-");
          values.push_back(nullptr);
        } else if (!c) {
          line.push_back("");
          values.push_back(nullptr);
        } else {
          const std::string s = format_fixed(spec.value(*c) - b, 1);
          line.push_back(s);
          values.push_back(*parse_double(s));
        }
      }
      text += csv_line(line);
      rows["P" + std::to_string(k)] = values;
    }
    tables.push_back({{"policy", policy}, {"rows", rows}});
  }
  json cols_json = json::array();
  for (FlexCombo c : cols) cols_json.push_back(combo_label(c));
  json doc = {{"unit", spec.unit}, {"columns", cols_json}, {"tables", tables}};
  const fs::path csv = dir / (std::string(spec.name) + ".csv");
  const fs::path js = dir / (std::string(spec.name) + ".json");
  write_file(csv, text);
  write_file(js, doc.dump(2) + "\n");
  files.push_back(csv);
  files.push_back(js);
}

std::string file_safe(const std::string& s) {
  std::string out;
  for (char ch : s) out += (std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_' || ch == '+') ? ch : '_';
  return out;
}

}  // namespace

void write_capacities(const std::vector<CapacitySet>& caps, const fs::path& file) {
  json arr = json::array();
  for (const CapacitySet& c : caps) arr.push_back(capacity_json(c));
  write_file(file, arr.dump(2) + "\n");
}

std::vector<CapacitySet> read_capacities(const fs::path& file) {
  if (!fs::exists(file)) throw InputError({{file.string(), 0, "file not found"}});
  try {
    const json j = json::parse(read_file(file));
    std::vector<CapacitySet> out;
    for (const json& c : j) out.push_back(capacity_from(c));
    return out;
  } catch (const json::exception& e) {
    throw InputError({{file.string(), 0, std::string("malformed capacity file (") + e.what() + ")"}});
  }
}

std::vector<fs::path> emit_report(const SweepReport& rep, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (!fs::is_directory(dir)) throw std::runtime_error("cannot create output directory " + dir.string());
  std::vector<fs::path> files;

  if (rep.stage == Stage::kB) {
    emit_table(rep, {"delta_profit", "million USD per year", profit_musd}, dir, files);
  } else if (rep.stage == Stage::kC) {
    emit_table(rep, {"delta_capacity", "GW", capacity_gw}, dir, files);
    emit_table(rep, {"delta_tsc", "million USD per year", tsc_musd}, dir, files);
  }

  if (rep.stage != Stage::kA) {
    // delta rows with the summed singles and the all-together case
    std::string summary = "policy,case,d_profit_musd,d_capacity_gw,d_tsc_musd\n";
    std::string cells = "policy,combo,operating_profit_usd,plant_capacity_mw,renewable_capacity_mw,"
                        "tsc_usd,tsc_excluding_transfers_usd,objective_usd,best_bound_usd,"
                        "plant_generation_mwh,plant_startups,plant_marginal_cost_usd_per_mwh,nse_mwh\n";
    auto outcome = [&](const SweepCell& c) {
      return CaseOutcome{c.policy, combo_label(c.combo), combo_size(c.combo),
                         c.profit.operating_profit, c.plant_capacity_mw, c.tsc.total};
    };
    for (const std::string& policy : rep.policies) {
      const SweepCell* base = find_cell(rep, policy, kNoLevers);
      std::vector<CaseOutcome> cases;
      for (FlexCombo combo : rep.combos) {
        const SweepCell* c = find_cell(rep, policy, combo);
        if (!c) continue;
        double gen = 0, starts = 0;
        for (const ResourceMetrics& m : c->metrics.resources)
          if (m.name == rep.plant) {
            gen = m.generation_mwh;
            starts = m.startups;
          }
        cells += csv_line({policy, combo_label(combo), format_number(c->profit.operating_profit),
                           format_number(c->plant_capacity_mw), format_number(c->renewable_capacity_mw),
                           format_number(c->tsc.total), format_number(c->tsc.excluding_transfers),
                           format_number(c->objective), format_number(c->best_bound),
                           format_number(gen), format_number(starts),
                           format_number(c->plant_marginal_cost), format_number(c->metrics.nse_mwh)});
        if (combo != kNoLevers) cases.push_back(outcome(*c));
      }
      if (!base) continue;
      for (const DeltaRow& d : delta_table(outcome(*base), cases))
        summary += csv_line({policy, d.label, format_fixed(d.d_profit / 1e6, 1),
                             format_fixed(d.d_capacity / 1e3, 1), format_fixed(d.d_tsc / 1e6, 1)});
    }
    write_file(dir / "summary.csv", summary);
    write_file(dir / "cells.csv", cells);
    files.push_back(dir / "summary.csv");
    files.push_back(dir / "cells.csv");

    for (const SweepCell& c : rep.cells) {
      std::string trace = "hour,output_mw,price_usd_per_mwh,marginal_cost_usd_per_mwh\n";
      for (size_t t = 0; t < c.plant_output.size(); ++t)
        trace += csv_line({std::to_string(t + 1), format_number(c.plant_output[t]),
                           t < c.prices.size() ? format_number(c.prices[t]) : "",
                           format_number(c.plant_marginal_cost)});
      const fs::path p = dir / "traces" / file_safe(c.policy) / (file_safe(combo_label(c.combo)) + ".csv");
      write_file(p, trace);
      files.push_back(p);
    }
  }

  if (!rep.stage_a.empty()) {
    write_capacities(rep.stage_a, dir / "capacities.json");
    std::string text = "policy,resource,power_mw,energy_mwh\n";
    for (const CapacitySet& c : rep.stage_a)
      for (const auto& [name, mw] : c.power) {
        auto e = c.energy.find(name);
        text += csv_line({c.policy, name, format_number(mw),
                          e == c.energy.end() ? "" : format_number(e->second)});
      }
    write_file(dir / "capacities.csv", text);
    files.push_back(dir / "capacities.json");
    files.push_back(dir / "capacities.csv");
  }

  json cells = json::array();
  for (const SweepCell& c : rep.cells) cells.push_back(cell_json(c));
  json stage_a = json::array();
  for (const CapacitySet& c : rep.stage_a) stage_a.push_back(capacity_json(c));
  json combos = json::array();
  for (FlexCombo c : rep.combos) combos.push_back(combo_label(c));
  const json sweep = {{"stage", to_string(rep.stage)},
                      {"plant", rep.plant},
                      {"policies", rep.policies},
                      {"combos", combos},
                      {"cells", cells},
                      {"stage_a", stage_a},
                      {"provenance",
                       {{"input_hash", rep.provenance.input_hash},
                        {"solver", solver_json(rep.provenance.solver)},
                        {"started_at", rep.provenance.started_at},
                        {"finished_at", rep.provenance.finished_at}}}};
  write_file(dir / kSweepFile, sweep.dump(1) + "\n");
  files.push_back(dir / kSweepFile);

  json listing = json::object();
  for (const fs::path& f : files)
    listing[fs::relative(f, dir).generic_string()] = sha256_hex(read_file(f));
  const json manifest = {{"tool", "flexccs"},
                         {"version", FLEXCCS_VERSION},
                         {"stage", to_string(rep.stage)},
                         {"input_hash", rep.provenance.input_hash},
                         {"solver", solver_json(rep.provenance.solver)},
                         {"started_at", rep.provenance.started_at},
                         {"finished_at", rep.provenance.finished_at},
                         {"files", listing}};
  write_file(dir / kManifestFile, manifest.dump(2) + "\n");
  files.push_back(dir / kManifestFile);
  return files;
}

SweepReport read_report(const fs::path& dir) {
  const fs::path path = dir / kSweepFile;
  if (!fs::exists(path)) throw InputError({{path.string(), 0, "file not found"}});
  try {
    const json j = json::parse(read_file(path));
    SweepReport rep;
    rep.stage = parse_stage(j.at("stage").get<std::string>());
    rep.plant = j.at("plant").get<std::string>();
    rep.policies = j.at("policies").get<std::vector<std::string>>();
    for (const json& c : j.at("combos")) rep.combos.push_back(parse_combo(c.get<std::string>()));
    for (const json& c : j.at("cells")) rep.cells.push_back(cell_from(c));
    for (const json& c : j.at("stage_a")) rep.stage_a.push_back(capacity_from(c));
    const json& p = j.at("provenance");
    rep.provenance.input_hash = p.at("input_hash").get<std::string>();
    rep.provenance.started_at = p.at("started_at").get<std::string>();
    rep.provenance.finished_at = p.at("finished_at").get<std::string>();
    std::vector<InputIssue> issues;
    read_solver(JsonReader{issues}, p.at("solver"), "provenance.solver", rep.provenance.solver);
    if (!issues.empty()) throw InputError(issues);
    return rep;
  } catch (const json::exception& e) {
    throw InputError({{path.string(), 0, std::string("malformed sweep file (") + e.what() + ")"}});
  } catch (const std::invalid_argument& e) {
    throw InputError({{path.string(), 0, e.what()}});
  }
}

}  // namespace flexccs
