#include "flexccs/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace flexccs {

const char* to_string(VarKind kind) {
  switch (kind) {
    case VarKind::kCap: return "cap";
    case VarKind::kUnits: return "units";
    case VarKind::kNewCap: return "newcap";
    case VarKind::kEnergyCap: return "ecap";
    case VarKind::kNewEnergyCap: return "newecap";
    case VarKind::kPower: return "vP";
    case VarKind::kCommit: return "commit";
    case VarKind::kStart: return "start";
    case VarKind::kShut: return "shut";
    case VarKind::kCharge: return "charge";
    case VarKind::kDischarge: return "discharge";
    case VarKind::kSoc: return "soc";
    case VarKind::kNse: return "nse";
  }
  return "?";
}

VariableIndex::VariableIndex(int num_resources, int horizon)
    : resources_(num_resources), horizon_(horizon) {
  slots_.assign(static_cast<size_t>(kNumVarKinds) * (resources_ + 1) * (horizon_ + 1), -1);
}

size_t VariableIndex::slot(VarKind kind, int resource, int hour) const {
  if (resource < -1 || resource >= resources_ || hour < -1 || hour >= horizon_)
    throw std::out_of_range("variable key out of range");
  return (static_cast<size_t>(kind) * (resources_ + 1) + (resource + 1)) * (horizon_ + 1) +
         (hour + 1);
}

void VariableIndex::add(VarKey key, int col) {
  const size_t s = slot(key.kind, key.resource, key.hour);
  if (slots_[s] >= 0) throw std::logic_error("variable declared twice");
  if (col != size()) throw std::logic_error("columns must be indexed in order");
  slots_[s] = col;
  keys_.push_back(key);
  ++extent_[static_cast<int>(key.kind)];
}

int VariableIndex::find(VarKind kind, int resource, int hour) const {
  if (resource < -1 || resource >= resources_ || hour < -1 || hour >= horizon_) return -1;
  return slots_[slot(kind, resource, hour)];
}

int VariableIndex::at(VarKind kind, int resource, int hour) const {
  const int col = find(kind, resource, hour);
  if (col < 0)
    throw std::out_of_range(std::string("no variable ") + to_string(kind) + " for resource " +
                            std::to_string(resource) + " hour " + std::to_string(hour));
  return col;
}

std::vector<UcWindow> uc_windows(int duration, int horizon) {
  if (duration < 1) throw std::domain_error("window duration must be >= 1");
  if (duration > horizon) throw std::domain_error("window duration exceeds the horizon");
  std::vector<UcWindow> out;
  out.reserve(horizon);
  for (int t = 1; t <= horizon; ++t) {
    UcWindow w{t, {}};
    w.members.reserve(duration);
    for (int k = duration - 1; k >= 0; --k) w.members.push_back(((t - 1 - k) % horizon + horizon) % horizon + 1);
    out.push_back(std::move(w));
  }
  return out;
}

UcWindowRows uc_window_rows(int min_up, int min_down, int horizon) {
  return {uc_windows(min_up, horizon), uc_windows(min_down, horizon)};
}

double capacity_ceiling(const ResourceSpec& r, const SystemSpec& spec) {
  if (!r.can_expand) return r.existing_cap;
  if (r.max_cap) return *r.max_cap;
  if (r.cls != ResourceClass::kThermalUc) return kInf;
  const double peak = spec.demand.empty() ? 0.0 : *std::max_element(spec.demand.begin(), spec.demand.end());
  return r.existing_cap + std::ceil(peak / r.unit_size) * r.unit_size;
}

namespace {

std::string name1(const char* stem, const std::string& res) {
  return std::string(stem) + "(" + res + ")";
}

std::string name2(const char* stem, const std::string& res, int t) {
  return std::string(stem) + "(" + res + "," + std::to_string(t + 1) + ")";
}

struct Bounds {
  double lo;
  double hi;
};

class Builder {
 public:
  Builder(const SystemSpec& spec, const PolicyEnv& pol, const FinanceParams& fin,
          const BuildMode& mode)
      : spec_(spec), pol_(pol), fin_(fin), mode_(mode), T_(spec.horizon_hours),
        w_(spec.weight()) {
    model_.index = VariableIndex(static_cast<int>(spec.resources.size()), T_);
  }

  Model run() {
    for (int t = 0; t < T_; ++t)
      model_.balance_rows.push_back(row("bal(" + std::to_string(t + 1) + ")", RowSense::kEqual, spec_.demand[t]));
    for (int g = 0; g < static_cast<int>(spec_.resources.size()); ++g) {
      const ResourceSpec& r = spec_.resources[g];
      switch (r.cls) {
        case ResourceClass::kThermalUc: add_uc(g, r); break;
        case ResourceClass::kStorage: add_storage(g, r); break;
        case ResourceClass::kVre:
        case ResourceClass::kThermalSimple:
        case ResourceClass::kFirm: add_simple(g, r); break;
      }
    }
    std::vector<int> nse(T_);
    for (int t = 0; t < T_; ++t) {
      nse[t] = col({VarKind::kNse, -1, t}, "nse(" + std::to_string(t + 1) + ")", 0.0,
                   spec_.demand[t], false, w_ * spec_.nse_penalty);
      b_.add_entry(model_.balance_rows[t], nse[t], 1.0);
    }
    if (pol_.ces_fraction > 0) add_ces();
    model_.problem = std::move(b_).finish();
    return std::move(model_);
  }

 private:
  int col(VarKey key, std::string name, double lo, double hi, bool integer, double cost) {
    const int j = b_.add_column({std::move(name), lo, hi, integer, cost});
    model_.index.add(key, j);
    return j;
  }

  int row(std::string name, RowSense sense, double rhs) {
    return b_.add_row({std::move(name), sense, rhs});
  }

  bool dispatch() const { return mode_.kind == BuildMode::Kind::kDispatchFixed; }

  Bounds power_bounds(const ResourceSpec& r) const {
    if (dispatch()) {
      const double v = mode_.fixed_capacity.at(r.name);
      return {v, v};
    }
    double lo = r.can_retire ? 0.0 : r.existing_cap;
    if (pol_.nuclear_no_retire && r.cls == ResourceClass::kFirm) lo = r.existing_cap;
    return {lo, capacity_ceiling(r, spec_)};
  }

  Bounds energy_bounds(const ResourceSpec& r) const {
    const double existing = r.storage->existing_energy;
    if (dispatch()) {
      const double v = mode_.fixed_energy.at(r.name);
      return {v, v};
    }
    return {r.can_retire ? 0.0 : existing, r.can_expand ? kInf : existing};
  }

  double investment(const ResourceSpec& r, double capex) const {
    if (!r.can_expand) return 0.0;
    return annualize_capex(capex, fin_.wacc, fin_.lifetime(r), r.itc_fraction) * 1000.0;
  }

  // Adds the capacity column (scaled by `size` MW per column unit) and the
  // fixed-cost terms. Investment is charged only above existing capacity.
  int add_capacity(int g, const ResourceSpec& r, VarKind kind, VarKind new_kind,
                   const char* stem, const char* new_stem, Bounds mw, double existing,
                   double size, bool integer, double fom, double inv) {
    const double lo = mw.lo / size;
    const double hi = std::isinf(mw.hi) ? kInf : (integer ? std::floor(mw.hi / size + 1e-9) : mw.hi / size);
    const int c = col({kind, g, -1}, name1(stem, r.name), lo, hi, integer, 0.0);
    if (inv == 0.0 || mw.lo >= existing) {
      b_.add_cost(c, (fom + inv) * size);
      b_.add_objective_offset(-inv * existing);
      return c;
    }
    b_.add_cost(c, fom * size);
    const int n = col({new_kind, g, -1}, name1(new_stem, r.name), 0.0,
                      std::isinf(mw.hi) ? kInf : mw.hi, false, inv);
    const int def = row(name1(new_stem, r.name), RowSense::kGreaterEqual, -existing);
    b_.add_entry(def, n, 1.0);
    b_.add_entry(def, c, -size);
    return c;
  }

  int power_capacity(int g, const ResourceSpec& r, bool uc) {
    const bool integer = uc && !dispatch();
    return add_capacity(g, r, uc ? VarKind::kUnits : VarKind::kCap, VarKind::kNewCap,
                        uc ? "units" : "cap", "newcap", power_bounds(r), r.existing_cap,
                        uc ? r.unit_size : 1.0, integer, r.fom_power * 1000.0,
                        investment(r, r.capex_power));
  }

  std::vector<int> power_columns(int g, const ResourceSpec& r, double cost) {
    std::vector<int> vp(T_);
    for (int t = 0; t < T_; ++t) {
      vp[t] = col({VarKind::kPower, g, t}, name2("vP", r.name, t), 0.0, kInf, false, cost);
      b_.add_entry(model_.balance_rows[t], vp[t], 1.0);
    }
    return vp;
  }

  void add_simple(int g, const ResourceSpec& r) {
    const int cap = power_capacity(g, r, false);
    const std::vector<int> vp = power_columns(g, r, w_ * effective_marginal_cost(r, pol_));
    const bool vre = r.cls == ResourceClass::kVre;
    const std::vector<double>* profile = vre ? &spec_.vre_profiles.at(r.name) : nullptr;
    for (int t = 0; t < T_; ++t) {
      const int i = row(name2(vre ? "avail" : "pmax", r.name, t), RowSense::kLessEqual, 0.0);
      b_.add_entry(i, vp[t], 1.0);
      b_.add_entry(i, cap, vre ? -(*profile)[t] : -1.0);
    }
    qualifying_.push_back({vp, r.ces_qualifying});
  }

  void add_uc(int g, const ResourceSpec& r) {
    const FlexParams& f = *r.flex;
    const double U = r.unit_size;
    const int units = power_capacity(g, r, true);
    const double max_units = std::ceil(power_bounds(r).hi / U - 1e-9);
    const std::vector<int> vp = power_columns(g, r, w_ * effective_marginal_cost(r, pol_));
    std::vector<int> commit(T_), start(T_), shut(T_);
    for (int t = 0; t < T_; ++t)
      commit[t] = col({VarKind::kCommit, g, t}, name2("commit", r.name, t), 0.0, max_units, true, 0.0);
    const double su = w_ * U * startup_cost_per_mw(r, f, pol_);
    for (int t = 0; t < T_; ++t)
      start[t] = col({VarKind::kStart, g, t}, name2("start", r.name, t), 0.0, max_units, true, su);
    for (int t = 0; t < T_; ++t)
      shut[t] = col({VarKind::kShut, g, t}, name2("shut", r.name, t), 0.0, max_units, true, 0.0);

    const double ramp = f.effective_ramp();
    const UcWindowRows windows = uc_window_rows(f.min_up, f.min_down, T_);
    for (int t = 0; t < T_; ++t) {
      const int prev = (t + T_ - 1) % T_;
      int i = row(name2("pmax", r.name, t), RowSense::kLessEqual, 0.0);
      b_.add_entry(i, vp[t], 1.0);
      b_.add_entry(i, commit[t], -U);
      i = row(name2("pmin", r.name, t), RowSense::kGreaterEqual, 0.0);
      b_.add_entry(i, vp[t], 1.0);
      b_.add_entry(i, commit[t], -f.min_load * U);
      i = row(name2("ucap", r.name, t), RowSense::kLessEqual, 0.0);
      b_.add_entry(i, commit[t], 1.0);
      b_.add_entry(i, units, -1.0);
      i = row(name2("logic", r.name, t), RowSense::kEqual, 0.0);
      b_.add_entry(i, commit[t], 1.0);
      b_.add_entry(i, commit[prev], -1.0);
      b_.add_entry(i, start[t], -1.0);
      b_.add_entry(i, shut[t], 1.0);
      i = row(name2("minup", r.name, t), RowSense::kLessEqual, 0.0);
      for (int h : windows.up[t].members) b_.add_entry(i, start[h - 1], 1.0);
      b_.add_entry(i, commit[t], -1.0);
      i = row(name2("mindn", r.name, t), RowSense::kLessEqual, 0.0);
      for (int h : windows.down[t].members) b_.add_entry(i, shut[h - 1], 1.0);
      b_.add_entry(i, commit[t], 1.0);
      b_.add_entry(i, units, -1.0);
      // Units running in both hours move by at most ramp*U; a starting
      // unit may reach full output and a stopping unit may drop from it.
      i = row(name2("rampup", r.name, t), RowSense::kLessEqual, 0.0);
      b_.add_entry(i, vp[t], 1.0);
      b_.add_entry(i, vp[prev], -1.0);
      b_.add_entry(i, commit[t], -ramp * U);
      b_.add_entry(i, start[t], ramp * U - U);
      i = row(name2("rampdn", r.name, t), RowSense::kLessEqual, 0.0);
      b_.add_entry(i, vp[prev], 1.0);
      b_.add_entry(i, vp[t], -1.0);
      b_.add_entry(i, commit[t], -ramp * U);
      b_.add_entry(i, start[t], ramp * U);
      b_.add_entry(i, shut[t], -U);
    }
    qualifying_.push_back({vp, r.ces_qualifying});
  }

  void add_storage(int g, const ResourceSpec& r) {
    const StorageParams& s = *r.storage;
    const int cap = power_capacity(g, r, false);
    const int ecap = add_capacity(g, r, VarKind::kEnergyCap, VarKind::kNewEnergyCap, "ecap",
                                  "newecap", energy_bounds(r), s.existing_energy, 1.0, false,
                                  r.fom_energy * 1000.0, investment(r, r.capex_energy));
    if (s.duration_max) {
      const int i = row(name1("dur", r.name), RowSense::kLessEqual, 0.0);
      b_.add_entry(i, ecap, 1.0);
      b_.add_entry(i, cap, -*s.duration_max);
    }
    std::vector<int> ch(T_), dis(T_), soc(T_);
    for (int t = 0; t < T_; ++t) {
      ch[t] = col({VarKind::kCharge, g, t}, name2("charge", r.name, t), 0.0, kInf, false, 0.0);
      b_.add_entry(model_.balance_rows[t], ch[t], -1.0);
    }
    const double cost = w_ * (r.vom - r.ptc);
    for (int t = 0; t < T_; ++t) {
      dis[t] = col({VarKind::kDischarge, g, t}, name2("discharge", r.name, t), 0.0, kInf, false, cost);
      b_.add_entry(model_.balance_rows[t], dis[t], 1.0);
    }
    for (int t = 0; t < T_; ++t)
      soc[t] = col({VarKind::kSoc, g, t}, name2("soc", r.name, t), 0.0, kInf, false, 0.0);
    for (int t = 0; t < T_; ++t) {
      const int prev = (t + T_ - 1) % T_;
      int i = row(name2("socbal", r.name, t), RowSense::kEqual, 0.0);
      b_.add_entry(i, soc[t], 1.0);
      b_.add_entry(i, soc[prev], -1.0);
      b_.add_entry(i, ch[t], -s.eff_charge);
      b_.add_entry(i, dis[t], 1.0 / s.eff_discharge);
      i = row(name2("socmax", r.name, t), RowSense::kLessEqual, 0.0);
      b_.add_entry(i, soc[t], 1.0);
      b_.add_entry(i, ecap, -1.0);
      i = row(name2("chmax", r.name, t), RowSense::kLessEqual, 0.0);
      b_.add_entry(i, ch[t], 1.0);
      b_.add_entry(i, cap, -1.0);
      i = row(name2("dismax", r.name, t), RowSense::kLessEqual, 0.0);
      b_.add_entry(i, dis[t], 1.0);
      b_.add_entry(i, cap, -1.0);
    }
  }

  void add_ces() {
    double total_demand = 0.0;
    for (double d : spec_.demand) total_demand += d;
    const bool by_demand = pol_.ces_basis == CesBasis::kDemand;
    model_.ces_row = row("ces", RowSense::kGreaterEqual, by_demand ? pol_.ces_fraction * total_demand : 0.0);
    for (const auto& [vp, qualifies] : qualifying_) {
      const double coef = (qualifies ? 1.0 : 0.0) - (by_demand ? 0.0 : pol_.ces_fraction);
      for (int j : vp) b_.add_entry(model_.ces_row, j, coef);
    }
  }

  const SystemSpec& spec_;
  const PolicyEnv& pol_;
  const FinanceParams& fin_;
  const BuildMode& mode_;
  const int T_;
  const double w_;
  ProblemBuilder b_;
  Model model_;
  std::vector<std::pair<std::vector<int>, bool>> qualifying_;
};

}  // namespace

Model build_model(const SystemSpec& spec, const PolicyEnv& pol, const FinanceParams& fin,
                  const BuildMode& mode) {
  for (const ResourceSpec& r : spec.resources) {
    if (r.flex && std::max(r.flex->min_up, r.flex->min_down) > spec.horizon_hours)
      throw std::domain_error("resource '" + r.name +
                              "': minimum up/down time exceeds the horizon of " +
                              std::to_string(spec.horizon_hours) + " h");
  }
  ValidationReport report = validate_system(spec);
  for (auto& issue : validate_policy(pol)) report.push_back(issue);
  for (auto& issue : validate_finance(fin)) report.push_back(issue);
  if (!report.empty()) throw ValidationError(std::move(report));

  if (mode.kind == BuildMode::Kind::kDispatchFixed) {
    for (const ResourceSpec& r : spec.resources) {
      auto it = mode.fixed_capacity.find(r.name);
      if (it == mode.fixed_capacity.end())
        throw std::invalid_argument("dispatch mode: no fixed capacity for '" + r.name + "'");
      if (!(it->second >= 0) || !std::isfinite(it->second))
        throw std::invalid_argument("dispatch mode: capacity for '" + r.name + "' must be >= 0");
      if (r.cls == ResourceClass::kStorage) {
        auto e = mode.fixed_energy.find(r.name);
        if (e == mode.fixed_energy.end())
          throw std::invalid_argument("dispatch mode: no fixed energy capacity for '" + r.name + "'");
        if (!(e->second >= 0) || !std::isfinite(e->second))
          throw std::invalid_argument("dispatch mode: energy for '" + r.name + "' must be >= 0");
      }
    }
    for (const auto& [name, v] : mode.fixed_capacity)
      if (spec.find_resource(name) < 0)
        throw std::invalid_argument("dispatch mode: unknown resource '" + name + "'");
  }
  return Builder(spec, pol, fin, mode).run();
}

Model fix_plant_flex(const SystemSpec& spec, const PolicyEnv& pol, const FinanceParams& fin,
                     const BuildMode& mode, const std::string& plant, const FlexParams& flex) {
  const int g = spec.find_resource(plant);
  if (g < 0) throw std::invalid_argument("no resource named '" + plant + "'");
  if (spec.resources[g].cls != ResourceClass::kThermalUc)
    throw std::invalid_argument("resource '" + plant + "' is not unit-committed");
  SystemSpec copy = spec;
  copy.resources[g].flex = flex;
  return build_model(copy, pol, fin, mode);
}

double capacity_mw(const Model& model, const SystemSpec& spec, int resource,
                   const std::vector<double>& x) {
  const ResourceSpec& r = spec.resources.at(resource);
  if (r.cls == ResourceClass::kThermalUc)
    return x.at(model.index.at(VarKind::kUnits, resource)) * r.unit_size;
  return x.at(model.index.at(VarKind::kCap, resource));
}

double energy_capacity_mwh(const Model& model, int resource, const std::vector<double>& x) {
  const int j = model.index.find(VarKind::kEnergyCap, resource);
  return j < 0 ? 0.0 : x.at(j);
}

double value_at(const Model& model, const std::vector<double>& x, VarKind kind, int resource,
                int hour) {
  const int j = model.index.find(kind, resource, hour);
  return j < 0 ? 0.0 : x.at(j);
}

}  // namespace flexccs
