#include "flexccs/accounting.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace flexccs {

SpellHistogram spell_histogram(const std::vector<double>& commit) {
  SpellHistogram h;
  const int T = static_cast<int>(commit.size());
  if (T == 0) return h;
  auto on = [&](int t) { return commit[((t % T) + T) % T] > 0.5; };
  int first = -1;
  for (int t = 0; t < T; ++t) {
    if (on(t) != on(t - 1)) {
      first = t;
      break;
    }
  }
  if (first < 0) {
    (on(0) ? h.on : h.off)[T] += 1;
    return h;
  }
  // Walk one full turn starting at a state change.
  int len = 0;
  for (int k = 0; k < T; ++k) {
    const int t = first + k;
    ++len;
    if (on(t) != on(t + 1)) {
      (on(t) ? h.on : h.off)[len] += 1;
      len = 0;
    }
  }
  return h;
}

const ResourceMetrics& Metrics::resource(const std::string& name) const {
  for (const auto& r : resources)
    if (r.name == name) return r;
  throw std::out_of_range("no metrics for resource '" + name + "'");
}

namespace {

double sum_kind(const Model& m, const std::vector<double>& x, VarKind kind, int g, int T) {
  double s = 0.0;
  for (int t = 0; t < T; ++t) s += value_at(m, x, kind, g, t);
  return s;
}

double startups(const Model& m, const std::vector<double>& x, int g, int T) {
  double s = sum_kind(m, x, VarKind::kStart, g, T);
  // Integer counts carry solver noise; report whole numbers.
  if (std::abs(s - std::round(s)) < 1e-6) s = std::round(s);
  return s;
}

double unit_size_of(const ResourceSpec& r) {
  return r.cls == ResourceClass::kThermalUc ? r.unit_size : 0.0;
}

double startup_fuel_of(const ResourceSpec& r) {
  return r.flex ? r.flex->startup_fuel : 0.0;
}

// Annualized fixed cost of one resource: FOM on installed capacity plus
// capital recovery on capacity above what exists.
double fixed_cost(const ResourceSpec& r, const FinanceParams& fin, double cap, double ecap,
                  bool with_itc) {
  double c = r.fom_power * 1000.0 * cap;
  const double itc = with_itc ? r.itc_fraction : 0.0;
  if (r.can_expand) {
    const double life = fin.lifetime(r);
    c += annualize_capex(r.capex_power, fin.wacc, life, itc) * 1000.0 *
         std::max(0.0, cap - r.existing_cap);
  }
  if (r.storage) {
    c += r.fom_energy * 1000.0 * ecap;
    if (r.can_expand) {
      c += annualize_capex(r.capex_energy, fin.wacc, fin.lifetime(r), itc) * 1000.0 *
           std::max(0.0, ecap - r.storage->existing_energy);
    }
  }
  return c;
}

double tsc_with(const SystemSpec& spec, const PolicyEnv& pol, const FinanceParams& fin,
                const Model& m, const std::vector<double>& x, bool transfers) {
  const int T = spec.horizon_hours;
  const double w = spec.weight();
  const double tax = transfers ? pol.carbon_tax : 0.0;
  const double credit = transfers ? pol.capture_credit : 0.0;
  const double startup_credit = transfers && pol.credit_startup_capture ? pol.capture_credit : 0.0;
  double total = 0.0;
  for (int g = 0; g < static_cast<int>(spec.resources.size()); ++g) {
    const ResourceSpec& r = spec.resources[g];
    const double cap = capacity_mw(m, spec, g, x);
    const double ecap = energy_capacity_mwh(m, g, x);
    total += fixed_cost(r, fin, cap, ecap, transfers);
    const double ptc = transfers ? r.ptc : 0.0;
    if (r.cls == ResourceClass::kStorage) {
      total += w * (r.vom - ptc) * sum_kind(m, x, VarKind::kDischarge, g, T);
      continue;
    }
    const double gen = sum_kind(m, x, VarKind::kPower, g, T);
    const double gross = r.heat_rate * r.emission_factor;
    const double captured = gross * r.capture_rate;
    const double emitted = gross - captured;
    const double per_mwh = r.fuel_price * r.heat_rate + r.vom + tax * emitted +
                           (pol.co2_transport_storage_cost - credit) * captured - ptc;
    total += w * per_mwh * gen;
    if (r.flex) {
      const FlexParams& f = *r.flex;
      const double co2 = f.startup_fuel * r.emission_factor;
      const double cap_co2 = co2 * r.capture_rate;
      const double per_mw = f.startup_cost + f.startup_fuel * r.fuel_price +
                            tax * (co2 - cap_co2) +
                            (pol.co2_transport_storage_cost - startup_credit) * cap_co2;
      total += w * r.unit_size * per_mw * sum_kind(m, x, VarKind::kStart, g, T);
    }
  }
  total += w * spec.nse_penalty * sum_kind(m, x, VarKind::kNse, -1, T);
  return total;
}

}  // namespace

TotalSystemCost total_system_cost(const SystemSpec& spec, const PolicyEnv& pol,
                                  const FinanceParams& fin, const Model& model,
                                  const Solution& solution) {
  if (solution.x.size() != static_cast<size_t>(model.problem.num_cols()))
    throw std::invalid_argument("total_system_cost: solution does not match the model");
  return {tsc_with(spec, pol, fin, model, solution.x, true),
          tsc_with(spec, pol, fin, model, solution.x, false)};
}

Metrics compute_metrics(const SystemSpec& spec, const PolicyEnv& pol, const FinanceParams& fin,
                        const Model& model, const Solution& solution) {
  if (!solution.optimal())
    throw std::invalid_argument(std::string("compute_metrics: solution status is ") +
                                to_string(solution.status));
  if (solution.x.size() != static_cast<size_t>(model.problem.num_cols()))
    throw std::invalid_argument("compute_metrics: solution does not match the model");
  const std::vector<double>& x = solution.x;
  const int T = spec.horizon_hours;
  Metrics out;
  out.hour_weight = spec.weight();
  for (int g = 0; g < static_cast<int>(spec.resources.size()); ++g) {
    const ResourceSpec& r = spec.resources[g];
    ResourceMetrics rm;
    rm.name = r.name;
    rm.capacity_mw = capacity_mw(model, spec, g, x);
    rm.energy_capacity_mwh = energy_capacity_mwh(model, g, x);
    rm.generation_mwh = sum_kind(model, x, r.cls == ResourceClass::kStorage ? VarKind::kDischarge
                                                                           : VarKind::kPower,
                                 g, T);
    if (rm.capacity_mw > 1e-9)
      rm.capacity_factor = std::clamp(rm.generation_mwh / (rm.capacity_mw * T), 0.0, 1.0);
    if (r.cls == ResourceClass::kThermalUc) {
      rm.startups = startups(model, x, g, T);
      rm.annual_startups = rm.startups * out.hour_weight;
      std::vector<double> commit(T);
      for (int t = 0; t < T; ++t) commit[t] = value_at(model, x, VarKind::kCommit, g, t);
      rm.spells = spell_histogram(commit);
    }
    const double start_co2 = rm.startups * unit_size_of(r) * startup_fuel_of(r) * r.emission_factor;
    const double op_co2 = rm.generation_mwh * r.heat_rate * r.emission_factor;
    if (r.cls != ResourceClass::kStorage) {
      rm.captured_t = (op_co2 + start_co2) * r.capture_rate;
      rm.emitted_t = (op_co2 + start_co2) - rm.captured_t;
    }
    if (r.cls == ResourceClass::kVre) {
      const auto& prof = spec.vre_profiles.at(r.name);
      for (int t = 0; t < T; ++t)
        rm.curtailed_mwh += std::max(0.0, prof[t] * rm.capacity_mw - value_at(model, x, VarKind::kPower, g, t));
    }
    out.resources.push_back(std::move(rm));
  }
  out.nse_mwh = sum_kind(model, x, VarKind::kNse, -1, T);
  out.system_cost = total_system_cost(spec, pol, fin, model, solution);
  return out;
}

std::vector<double> hourly_prices(const SystemSpec& spec, const Model& model,
                                  const Solution& priced) {
  if (!priced.has_duals()) throw std::invalid_argument("hourly_prices: solution carries no duals");
  const double w = spec.weight();
  std::vector<double> p;
  p.reserve(model.balance_rows.size());
  for (int row : model.balance_rows) p.push_back(priced.duals.at(row) / w);
  return p;
}

ProfitStatement operating_profit(const SystemSpec& spec, const PolicyEnv& pol,
                                 const std::string& resource, const Model& model,
                                 const Solution& solution, const std::vector<double>& prices) {
  const int T = spec.horizon_hours;
  if (static_cast<int>(prices.size()) != T)
    throw std::invalid_argument("operating_profit: " + std::to_string(prices.size()) +
                                " prices for a horizon of " + std::to_string(T));
  if (solution.x.size() != static_cast<size_t>(model.problem.num_cols()))
    throw std::invalid_argument("operating_profit: solution does not match the model");
  const int g = spec.find_resource(resource);
  if (g < 0) throw std::invalid_argument("operating_profit: unknown resource '" + resource + "'");
  const ResourceSpec& r = spec.resources[g];
  const std::vector<double>& x = solution.x;
  const double w = spec.weight();

  ProfitStatement p;
  const VarKind out_kind = r.cls == ResourceClass::kStorage ? VarKind::kDischarge : VarKind::kPower;
  double gen = 0.0;
  for (int t = 0; t < T; ++t) {
    const double q = value_at(model, x, out_kind, g, t) -
                     value_at(model, x, VarKind::kCharge, g, t);
    p.energy_revenue += w * prices[t] * q;
    gen += value_at(model, x, out_kind, g, t);
  }
  const double starts = r.flex ? startups(model, x, g, T) : 0.0;
  const double start_mw = starts * unit_size_of(r);
  const double start_fuel = start_mw * startup_fuel_of(r);
  const double op_co2 = gen * r.heat_rate * r.emission_factor;
  const double start_co2 = start_fuel * r.emission_factor;
  const double op_captured = op_co2 * r.capture_rate;
  const double start_captured = start_co2 * r.capture_rate;

  p.capture_credit_revenue =
      w * pol.capture_credit * (op_captured + (pol.credit_startup_capture ? start_captured : 0.0));
  p.ptc_revenue = w * r.ptc * gen;
  p.fuel_cost = w * r.fuel_price * r.heat_rate * gen;
  p.vom_cost = w * r.vom * gen;
  p.carbon_tax_cost = w * pol.carbon_tax * ((op_co2 - op_captured) + (start_co2 - start_captured));
  p.ts_cost = w * pol.co2_transport_storage_cost * (op_captured + start_captured);
  if (r.flex)
    p.startup_cost = w * start_mw * r.flex->startup_cost + w * start_fuel * r.fuel_price;
  // Field order, so the statement adds up exactly as printed.
  p.operating_profit = p.energy_revenue + p.capture_credit_revenue + p.ptc_revenue - p.fuel_cost -
                       p.vom_cost - p.carbon_tax_cost - p.ts_cost - p.startup_cost;
  p.fom_cost = r.fom_power * 1000.0 * capacity_mw(model, spec, g, x);
  return p;
}

std::vector<std::string> verify_operations(const SystemSpec& spec, const Model& model,
                                           const std::vector<double>& x, double tol) {
  std::vector<std::string> issues;
  if (x.size() != static_cast<size_t>(model.problem.num_cols())) {
    issues.push_back("solution length does not match the model");
    return issues;
  }
  const int T = spec.horizon_hours;
  auto fail = [&](const std::string& what, const std::string& res, int t, double lhs, double rhs) {
    std::ostringstream s;
    s << what << " violated";
    if (!res.empty()) s << " for " << res;
    if (t >= 0) s << " at hour " << t + 1;
    s << ": " << lhs << " vs " << rhs;
    issues.push_back(s.str());
  };
  auto le = [&](double lhs, double rhs, double scale) {
    return lhs <= rhs + tol * std::max({1.0, std::abs(scale), std::abs(rhs)});
  };
  auto v = [&](VarKind k, int g, int t) { return value_at(model, x, k, g, t); };

  double supply_total = 0.0, use_total = 0.0;
  for (int t = 0; t < T; ++t) {
    double supply = v(VarKind::kNse, -1, t);
    double use = spec.demand[t];
    if (supply < -tol || !le(supply, spec.demand[t], 0)) fail("unserved energy bounds", "", t, supply, spec.demand[t]);
    for (int g = 0; g < static_cast<int>(spec.resources.size()); ++g) {
      supply += v(VarKind::kPower, g, t) + v(VarKind::kDischarge, g, t);
      use += v(VarKind::kCharge, g, t);
    }
    if (std::abs(supply - use) > tol * std::max(1.0, use)) fail("energy balance", "", t, supply, use);
    supply_total += supply;
    use_total += use;
  }
  if (std::abs(supply_total - use_total) > tol * std::max(1.0, use_total) * T)
    fail("energy conservation", "", -1, supply_total, use_total);

  for (int g = 0; g < static_cast<int>(spec.resources.size()); ++g) {
    const ResourceSpec& r = spec.resources[g];
    const double cap = capacity_mw(model, spec, g, x);
    for (int t = 0; t < T; ++t) {
      for (VarKind k : {VarKind::kPower, VarKind::kCharge, VarKind::kDischarge, VarKind::kSoc})
        if (v(k, g, t) < -tol) fail(std::string(to_string(k)) + " sign", r.name, t, v(k, g, t), 0);
    }
    switch (r.cls) {
      case ResourceClass::kThermalSimple:
      case ResourceClass::kFirm:
        for (int t = 0; t < T; ++t)
          if (!le(v(VarKind::kPower, g, t), cap, cap)) fail("capacity", r.name, t, v(VarKind::kPower, g, t), cap);
        break;
      case ResourceClass::kVre: {
        const auto& prof = spec.vre_profiles.at(r.name);
        for (int t = 0; t < T; ++t)
          if (!le(v(VarKind::kPower, g, t), prof[t] * cap, cap))
            fail("availability", r.name, t, v(VarKind::kPower, g, t), prof[t] * cap);
        break;
      }
      case ResourceClass::kStorage: {
        const StorageParams& s = *r.storage;
        const double ecap = energy_capacity_mwh(model, g, x);
        for (int t = 0; t < T; ++t) {
          const int prev = t == 0 ? T - 1 : t - 1;
          const double expect = v(VarKind::kSoc, g, prev) + s.eff_charge * v(VarKind::kCharge, g, t) -
                                v(VarKind::kDischarge, g, t) / s.eff_discharge;
          if (std::abs(v(VarKind::kSoc, g, t) - expect) > tol * std::max(1.0, ecap))
            fail("state of charge recursion", r.name, t, v(VarKind::kSoc, g, t), expect);
          if (!le(v(VarKind::kSoc, g, t), ecap, ecap)) fail("energy capacity", r.name, t, v(VarKind::kSoc, g, t), ecap);
          if (!le(v(VarKind::kCharge, g, t), cap, cap)) fail("charge limit", r.name, t, v(VarKind::kCharge, g, t), cap);
          if (!le(v(VarKind::kDischarge, g, t), cap, cap))
            fail("discharge limit", r.name, t, v(VarKind::kDischarge, g, t), cap);
        }
        if (s.duration_max && !le(ecap, *s.duration_max * cap, ecap))
          fail("duration limit", r.name, -1, ecap, *s.duration_max * cap);
        break;
      }
      case ResourceClass::kThermalUc: {
        const FlexParams& f = *r.flex;
        const double U = r.unit_size;
        const double units = cap / U;
        const double ramp = std::min(1.0, f.ramp_rate);
        std::vector<double> c(T), su(T), sd(T), p(T);
        for (int t = 0; t < T; ++t) {
          c[t] = v(VarKind::kCommit, g, t);
          su[t] = v(VarKind::kStart, g, t);
          sd[t] = v(VarKind::kShut, g, t);
          p[t] = v(VarKind::kPower, g, t);
          for (double val : {c[t], su[t], sd[t]})
            if (std::abs(val - std::round(val)) > 1e-5) fail("integral commitment", r.name, t, val, std::round(val));
          if (su[t] < -tol || sd[t] < -tol) fail("start/shut sign", r.name, t, std::min(su[t], sd[t]), 0);
        }
        for (int t = 0; t < T; ++t) {
          const int prev = t == 0 ? T - 1 : t - 1;
          if (!le(c[t], units, units)) fail("committed units", r.name, t, c[t], units);
          if (!le(p[t], U * c[t], U)) fail("maximum output", r.name, t, p[t], U * c[t]);
          if (!le(f.min_load * U * c[t], p[t], U)) fail("minimum load", r.name, t, p[t], f.min_load * U * c[t]);
          if (std::abs(c[t] - c[prev] - su[t] + sd[t]) > tol)
            fail("commitment transition", r.name, t, c[t] - c[prev], su[t] - sd[t]);
          double recent_starts = 0.0, recent_shuts = 0.0;
          for (int k = 0; k < f.min_up; ++k) recent_starts += su[(t - k + T * f.min_up) % T];
          for (int k = 0; k < f.min_down; ++k) recent_shuts += sd[(t - k + T * f.min_down) % T];
          if (!le(recent_starts, c[t], 1)) fail("minimum up time", r.name, t, recent_starts, c[t]);
          if (!le(recent_shuts, units - c[t], units)) fail("minimum down time", r.name, t, recent_shuts, units - c[t]);
          const double steady = c[t] - su[t];
          const double up_limit = ramp * U * steady + U * su[t];
          const double down_limit = ramp * U * steady + U * sd[t];
          if (!le(p[t] - p[prev], up_limit, U)) fail("ramp up", r.name, t, p[t] - p[prev], up_limit);
          if (!le(p[prev] - p[t], down_limit, U)) fail("ramp down", r.name, t, p[prev] - p[t], down_limit);
        }
        break;
      }
    }
  }
  return issues;
}

std::vector<DeltaRow> delta_table(const CaseOutcome& baseline,
                                  const std::vector<CaseOutcome>& cases) {
  std::vector<DeltaRow> rows;
  DeltaRow singles{kSumOfSinglesLabel, 0, 0, 0, true};
  bool any_single = false;
  const CaseOutcome* all = nullptr;
  for (const CaseOutcome& c : cases) {
    if (c.scenario != baseline.scenario)
      throw std::invalid_argument("delta_table: case '" + c.label + "' belongs to scenario '" +
                                  c.scenario + "', baseline is '" + baseline.scenario + "'");
    DeltaRow d{c.label, c.profit - baseline.profit, c.capacity - baseline.capacity,
               c.tsc - baseline.tsc, false};
    if (c.levers == 1) {
      any_single = true;
      singles.d_profit += d.d_profit;
      singles.d_capacity += d.d_capacity;
      singles.d_tsc += d.d_tsc;
    }
    if (c.levers == 5) all = &c;
    rows.push_back(d);
  }
  if (any_single) rows.push_back(singles);
  if (all) {
    rows.push_back({kAllTogetherLabel, all->profit - baseline.profit,
                    all->capacity - baseline.capacity, all->tsc - baseline.tsc, false});
  }
  return rows;
}

}  // namespace flexccs
