#include "flexccs/domain.hpp"

#include <cmath>
#include <set>
#include <utility>
#include <sstream>

namespace flexccs {

const char* to_string(ResourceClass cls) {
  switch (cls) {
    case ResourceClass::kThermalUc: return "thermal-uc";
    case ResourceClass::kThermalSimple: return "thermal-simple";
    case ResourceClass::kVre: return "vre";
    case ResourceClass::kStorage: return "storage";
    case ResourceClass::kFirm: return "firm";
  }
  return "?";
}

ResourceClass parse_resource_class(const std::string& text) {
  if (text == "thermal-uc") return ResourceClass::kThermalUc;
  if (text == "thermal-simple") return ResourceClass::kThermalSimple;
  if (text == "vre") return ResourceClass::kVre;
  if (text == "storage") return ResourceClass::kStorage;
  if (text == "firm") return ResourceClass::kFirm;
  throw std::invalid_argument("unknown resource class '" + text + "'");
}

double SystemSpec::weight() const {
  if (hour_weight) return *hour_weight;
  return horizon_hours > 0 ? 8760.0 / horizon_hours : 0.0;
}

int SystemSpec::find_resource(const std::string& name) const {
  for (size_t i = 0; i < resources.size(); ++i)
    if (resources[i].name == name) return static_cast<int>(i);
  return -1;
}

const ResourceSpec& SystemSpec::resource(const std::string& name) const {
  const int i = find_resource(name);
  if (i < 0) throw std::out_of_range("no resource named '" + name + "'");
  return resources[i];
}

double default_lifetime(ResourceClass cls) {
  return cls == ResourceClass::kStorage ? 15.0 : 30.0;
}

double FinanceParams::lifetime(const ResourceSpec& r) const {
  auto it = lifetime_overrides.find(r.name);
  if (it != lifetime_overrides.end()) return it->second;
  return r.lifetime_years.value_or(default_lifetime(r.cls));
}

namespace {

std::string join_issues(const ValidationReport& report) {
  std::ostringstream out;
  out << report.size() << " validation issue(s)";
  for (const auto& issue : report) out << "\n  " << issue.where << ": " << issue.message;
  return out.str();
}

bool valid_name(const std::string& name) {
  if (name.empty()) return false;
  for (char c : name) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '_';
    if (!ok) return false;
  }
  return true;
}

struct Checker {
  ValidationReport& out;
  std::string where;

  void fail(const std::string& msg) const { out.push_back({where, msg}); }

  void nonneg(const char* field, double v) const {
    if (!std::isfinite(v) || v < 0) fail(std::string(field) + " must be finite and >= 0");
  }
  void fraction(const char* field, double v) const {
    if (!(v >= 0 && v <= 1)) fail(std::string(field) + " must lie in [0,1]");
  }
};

void check_flex(const Checker& c, const FlexParams& f, int horizon) {
  if (!(f.min_load > 0 && f.min_load <= 1)) c.fail("min_load must lie in (0,1]");
  if (!(f.ramp_rate > 0) || !std::isfinite(f.ramp_rate)) c.fail("ramp_rate must be > 0");
  if (f.min_up < 1) c.fail("min_up must be >= 1");
  if (f.min_down < 1) c.fail("min_down must be >= 1");
  if (horizon > 0 && f.min_up > horizon) c.fail("min_up exceeds the horizon");
  if (horizon > 0 && f.min_down > horizon) c.fail("min_down exceeds the horizon");
  c.nonneg("startup_cost", f.startup_cost);
  c.nonneg("startup_fuel", f.startup_fuel);
}

}  // namespace

ValidationError::ValidationError(ValidationReport report)
    : std::runtime_error(join_issues(report)), report_(std::move(report)) {}

ValidationReport validate_system(const SystemSpec& spec) {
  ValidationReport out;
  const int T = spec.horizon_hours;
  Checker sys{out, "system"};
  if (T < 1) sys.fail("horizon_hours must be >= 1");
  if (static_cast<int>(spec.demand.size()) != T)
    sys.fail("demand has " + std::to_string(spec.demand.size()) + " hours, expected " +
             std::to_string(T));
  for (size_t t = 0; t < spec.demand.size(); ++t) {
    if (!std::isfinite(spec.demand[t]) || spec.demand[t] < 0) {
      sys.fail("demand at hour " + std::to_string(t + 1) + " must be finite and >= 0");
    }
  }
  if (!(spec.nse_penalty > 0) || !std::isfinite(spec.nse_penalty))
    sys.fail("nse_penalty must be finite and > 0");
  if (spec.hour_weight && !(*spec.hour_weight > 0 && std::isfinite(*spec.hour_weight)))
    sys.fail("hour_weight must be finite and > 0");

  std::set<std::string> names;
  for (const ResourceSpec& r : spec.resources) {
    Checker c{out, "resource '" + r.name + "'"};
    if (!valid_name(r.name)) c.fail("name must be non-empty [A-Za-z0-9_]");
    if (!names.insert(r.name).second) c.fail("duplicate resource name");

    c.nonneg("existing_cap", r.existing_cap);
    c.nonneg("capex_power", r.capex_power);
    c.nonneg("capex_energy", r.capex_energy);
    c.nonneg("fom_power", r.fom_power);
    c.nonneg("fom_energy", r.fom_energy);
    c.nonneg("vom", r.vom);
    c.nonneg("heat_rate", r.heat_rate);
    c.nonneg("fuel_price", r.fuel_price);
    c.nonneg("emission_factor", r.emission_factor);
    c.nonneg("ptc", r.ptc);
    c.fraction("capture_rate", r.capture_rate);
    c.fraction("itc_fraction", r.itc_fraction);
    if (r.capture_rate > 0 && r.cls != ResourceClass::kThermalUc &&
        r.cls != ResourceClass::kThermalSimple)
      c.fail("capture_rate > 0 is only allowed for thermal resources");
    if (r.lifetime_years && !(*r.lifetime_years >= 1))
      c.fail("lifetime_years must be >= 1");
    if (r.max_cap) {
      if (!(*r.max_cap >= r.existing_cap) || !std::isfinite(*r.max_cap))
        c.fail("max_cap must be finite and >= existing_cap");
    }

    const bool uc = r.cls == ResourceClass::kThermalUc;
    if (uc) {
      if (!(r.unit_size > 0) || !std::isfinite(r.unit_size)) {
        c.fail("unit_size must be > 0 for thermal-uc");
      } else {
        const double units = r.existing_cap / r.unit_size;
        if (std::abs(units - std::round(units)) > 1e-9 * std::max(1.0, units))
          c.fail("existing_cap must be a whole number of units");
      }
      if (!r.flex) c.fail("thermal-uc resource needs flexibility parameters");
      else check_flex(c, *r.flex, T);
    } else {
      if (r.unit_size != 0) c.fail("unit_size is only meaningful for thermal-uc");
      if (r.flex) c.fail("flexibility parameters are only meaningful for thermal-uc");
    }

    const bool st = r.cls == ResourceClass::kStorage;
    if (st) {
      if (!r.storage) {
        c.fail("storage resource needs storage parameters");
      } else {
        const StorageParams& s = *r.storage;
        c.nonneg("existing_energy", s.existing_energy);
        if (!(s.eff_charge > 0 && s.eff_charge <= 1)) c.fail("eff_charge must lie in (0,1]");
        if (!(s.eff_discharge > 0 && s.eff_discharge <= 1))
          c.fail("eff_discharge must lie in (0,1]");
        if (s.duration_max && !(*s.duration_max > 0)) c.fail("duration_max must be > 0");
      }
    } else {
      if (r.storage) c.fail("storage parameters given for a non-storage resource");
      if (r.capex_energy != 0 || r.fom_energy != 0)
        c.fail("energy costs are only meaningful for storage");
    }

    const auto prof = spec.vre_profiles.find(r.name);
    if (r.cls == ResourceClass::kVre) {
      if (prof == spec.vre_profiles.end()) c.fail("vre resource has no availability profile");
    } else if (prof != spec.vre_profiles.end()) {
      c.fail("availability profile given for a non-vre resource");
    }
  }

  for (const auto& [name, profile] : spec.vre_profiles) {
    Checker c{out, "profile '" + name + "'"};
    if (!names.count(name)) c.fail("profile references an unknown resource");
    if (static_cast<int>(profile.size()) != T)
      c.fail("profile has " + std::to_string(profile.size()) + " hours, expected " +
             std::to_string(T));
    for (size_t t = 0; t < profile.size(); ++t) {
      if (!(profile[t] >= 0 && profile[t] <= 1)) {
        c.fail("availability at hour " + std::to_string(t + 1) + " must lie in [0,1]");
        break;
      }
    }
  }
  return out;
}

ValidationReport validate_policy(const PolicyEnv& p) {
  ValidationReport out;
  Checker c{out, "policy '" + p.name + "'"};
  c.nonneg("carbon_tax", p.carbon_tax);
  c.nonneg("capture_credit", p.capture_credit);
  c.nonneg("co2_transport_storage_cost", p.co2_transport_storage_cost);
  c.fraction("ces_fraction", p.ces_fraction);
  return out;
}

ValidationReport validate_finance(const FinanceParams& f) {
  ValidationReport out;
  Checker c{out, "finance"};
  if (!(f.wacc > 0 && f.wacc < 1)) c.fail("wacc must lie in (0,1)");
  for (const auto& [name, years] : f.lifetime_overrides)
    if (!(years >= 1)) c.fail("lifetime override for '" + name + "' must be >= 1");
  return out;
}

double annualize_capex(double capex, double wacc, double lifetime, double itc_fraction) {
  if (!(lifetime >= 1)) throw std::domain_error("annualize_capex: lifetime must be >= 1");
  if (!(wacc > 0)) throw std::domain_error("annualize_capex: wacc must be > 0");
  // 1 - (1+w)^-L computed without cancellation for small w.
  const double denom = -std::expm1(-lifetime * std::log1p(wacc));
  return capex * (1.0 - itc_fraction) * wacc / denom;
}

namespace {

// Splits gross CO2 per MWh into captured and emitted parts. The larger part
// is a product and the smaller the remainder, which is exact because the
// larger part is at least half the gross, so the two sum back to the gross.
std::pair<double, double> split_co2(const ResourceSpec& r) {
  const double gross = r.heat_rate * r.emission_factor;
  if (r.capture_rate >= 0.5) {
    const double captured = gross * r.capture_rate;
    return {captured, gross - captured};
  }
  const double emitted = gross * (1.0 - r.capture_rate);
  return {gross - emitted, emitted};
}

}  // namespace

double capture_intensity(const ResourceSpec& r) { return split_co2(r).first; }

double emission_intensity(const ResourceSpec& r) { return split_co2(r).second; }

double effective_marginal_cost(const ResourceSpec& r, const PolicyEnv& pol) {
  return r.fuel_price * r.heat_rate + r.vom + pol.carbon_tax * emission_intensity(r) +
         (pol.co2_transport_storage_cost - pol.capture_credit) * capture_intensity(r) - r.ptc;
}

double startup_cost_per_mw(const ResourceSpec& r, const FlexParams& flex,
                           const PolicyEnv& pol) {
  const double co2 = flex.startup_fuel * r.emission_factor;
  const double captured = co2 * r.capture_rate;
  const double credit = pol.credit_startup_capture ? pol.capture_credit : 0.0;
  return flex.startup_cost + flex.startup_fuel * r.fuel_price +
         pol.carbon_tax * (co2 - captured) +
         (pol.co2_transport_storage_cost - credit) * captured;
}

}  // namespace flexccs
