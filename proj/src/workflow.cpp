#include "flexccs/workflow.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <ctime>
#include <exception>
#include <thread>

namespace flexccs {

FlexParams flex_combo(FlexCombo combo, const FlexBounds& bounds) {
  if (combo > kAllLevers) throw std::invalid_argument("flex_combo: unknown lever in combination");
  FlexParams f = bounds.inflexible;
  const FlexParams& hi = bounds.flexible;
  if (combo & 1) f.startup_cost = hi.startup_cost;
  if (combo & 2) f.min_load = hi.min_load;
  if (combo & 4) f.ramp_rate = hi.ramp_rate;
  if (combo & 8) f.min_down = hi.min_down;
  if (combo & 16) f.min_up = hi.min_up;
  return f;
}

FlexCombo parse_combo(const std::string& text) {
  if (text.empty() || text == "None" || text == "none") return kNoLevers;
  if (text == "all" || text == "All") return kAllLevers;
  FlexCombo out = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    const size_t end = std::min(text.find('+', pos), text.size());
    const std::string item = text.substr(pos, end - pos);
    if (item.size() != 2 || (item[0] != 'P' && item[0] != 'p') || item[1] < '1' || item[1] > '5')
      throw std::invalid_argument("unknown flexibility parameter '" + item + "' in '" + text + "'");
    out |= static_cast<FlexCombo>(1u << (item[1] - '1'));
    pos = end + 1;
  }
  return out;
}

std::string combo_label(FlexCombo combo) {
  if (combo == kNoLevers) return "None";
  std::string s;
  for (int k = 0; k < kNumLevers; ++k) {
    if (!(combo & (1u << k))) continue;
    if (!s.empty()) s += '+';
    s += 'P';
    s += static_cast<char>('1' + k);
  }
  return s;
}

int combo_size(FlexCombo combo) { return std::popcount(static_cast<unsigned>(combo)); }

bool is_subset(FlexCombo a, FlexCombo b) { return (a & ~b) == 0; }

namespace {

// Lexicographic order on the sorted lever lists, shorter lists first.
bool combo_before(FlexCombo a, FlexCombo b) {
  if (combo_size(a) != combo_size(b)) return combo_size(a) < combo_size(b);
  for (int k = 0; k < kNumLevers; ++k) {
    const bool ia = a & (1u << k), ib = b & (1u << k);
    if (ia != ib) return ia;
  }
  return false;
}

}  // namespace

std::vector<FlexCombo> all_combos() {
  std::vector<FlexCombo> out;
  for (int c = 0; c <= kAllLevers; ++c) out.push_back(static_cast<FlexCombo>(c));
  std::sort(out.begin(), out.end(), combo_before);
  return out;
}

std::vector<FlexCombo> single_combos() { return {0, 1, 2, 4, 8, 16}; }

std::vector<FlexCombo> table_columns() {
  std::vector<FlexCombo> out = single_combos();
  std::vector<FlexCombo> rest;
  for (int c = 0; c < 16; ++c)
    if (combo_size(static_cast<FlexCombo>(c)) >= 2) rest.push_back(static_cast<FlexCombo>(c));
  std::sort(rest.begin(), rest.end(), combo_before);
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

std::optional<FlexCombo> table_cell(FlexCombo column, int lever) {
  if (lever < 1 || lever > kNumLevers) throw std::invalid_argument("lever must be 1..5");
  if (column >> (lever - 1)) return std::nullopt;
  return static_cast<FlexCombo>(column | (1u << (lever - 1)));
}

const char* to_string(Stage stage) {
  switch (stage) {
    case Stage::kA: return "a";
    case Stage::kB: return "b";
    case Stage::kC: return "c";
  }
  return "?";
}

Stage parse_stage(const std::string& text) {
  if (text == "a" || text == "A") return Stage::kA;
  if (text == "b" || text == "B") return Stage::kB;
  if (text == "c" || text == "C") return Stage::kC;
  throw std::invalid_argument("unknown stage '" + text + "' (expected a, b or c)");
}

const SweepCell& SweepReport::cell(const std::string& policy, FlexCombo combo) const {
  for (const SweepCell& c : cells)
    if (c.policy == policy && c.combo == combo) return c;
  throw std::out_of_range("no cell for " + policy + " / " + combo_label(combo));
}

SystemSpec without_resource(const SystemSpec& spec, const std::string& name) {
  SystemSpec out = spec;
  std::erase_if(out.resources, [&](const ResourceSpec& r) { return r.name == name; });
  out.vre_profiles.erase(name);
  return out;
}

namespace {

ResourceSpec& plant_of(SystemSpec& spec, const StudyPlant& plant) {
  const int g = spec.find_resource(plant.resource);
  if (g < 0) throw std::invalid_argument("study plant '" + plant.resource + "' is not in the system");
  ResourceSpec& r = spec.resources[g];
  if (r.cls != ResourceClass::kThermalUc)
    throw std::invalid_argument("study plant '" + plant.resource + "' is not unit-committed");
  return r;
}

}  // namespace

std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

namespace {

std::string scenario_id(const std::string& policy, std::optional<FlexCombo> combo) {
  return combo ? "policy '" + policy + "', combo " + combo_label(*combo) : "policy '" + policy + "'";
}

Solution solve_checked(const Problem& p, const SolverOptions& opts, const std::string& id) {
  Solution sol;
  try {
    sol = solve(p, opts);
  } catch (const std::exception& e) {
    throw WorkflowError(id, e.what());
  }
  if (!sol.optimal())
    throw WorkflowError(id, std::string("solver finished with status ") + to_string(sol.status));
  return sol;
}

std::vector<FlexCombo> planned_combos(const StagePlan& plan) {
  std::vector<FlexCombo> out;
  out.push_back(kNoLevers);
  for (FlexCombo c : plan.combos) {
    if (c > kAllLevers) throw std::invalid_argument("combination outside P1..P5");
    if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
  }
  return out;
}

void check_policies(const StagePlan& plan) {
  if (plan.policies.empty()) throw std::invalid_argument("the plan has no policies");
  for (size_t i = 0; i < plan.policies.size(); ++i)
    for (size_t j = 0; j < i; ++j)
      if (plan.policies[i].name == plan.policies[j].name)
        throw std::invalid_argument("duplicate policy name '" + plan.policies[i].name + "'");
}

const CapacitySet& capacities_for(const std::vector<CapacitySet>& caps, const std::string& policy) {
  for (const CapacitySet& c : caps)
    if (c.policy == policy) return c;
  throw std::invalid_argument("no stage-A capacities for policy '" + policy + "'");
}

SweepCell evaluate(const SystemSpec& s, const PolicyEnv& pol, const BuildMode& mode,
                   const StagePlan& plan, FlexCombo combo) {
  const std::string id = scenario_id(pol.name, combo);
  const Model model = build_model(s, pol, plan.finance, mode);
  const Solution sol = solve_checked(model.problem, plan.solver, id);
  const Solution priced = fix_and_price(model.problem, sol, plan.solver);
  if (!priced.optimal())
    throw WorkflowError(id, std::string("pricing LP finished with status ") + to_string(priced.status));

  SweepCell cell;
  cell.policy = pol.name;
  cell.combo = combo;
  cell.prices = hourly_prices(s, model, priced);
  cell.metrics = compute_metrics(s, pol, plan.finance, model, sol);
  cell.profit = operating_profit(s, pol, plan.plant.resource, model, sol, cell.prices);
  cell.tsc = cell.metrics.system_cost;
  cell.objective = sol.objective;
  cell.best_bound = sol.best_bound;
  cell.stats = sol.stats;
  const int g = s.find_resource(plan.plant.resource);
  cell.plant_capacity_mw = capacity_mw(model, s, g, sol.x);
  cell.plant_marginal_cost = effective_marginal_cost(s.resources[g], pol);
  for (int t = 0; t < s.horizon_hours; ++t)
    cell.plant_output.push_back(value_at(model, sol.x, VarKind::kPower, g, t));
  for (const ResourceMetrics& rm : cell.metrics.resources)
    if (s.resource(rm.name).cls == ResourceClass::kVre) cell.renewable_capacity_mw += rm.capacity_mw;
  return cell;
}

SweepReport sweep(const StagePlan& plan, Stage stage,
                  const std::function<SweepCell(const PolicyEnv&, FlexCombo)>& run_cell) {
  check_policies(plan);
  SweepReport report;
  report.stage = stage;
  report.plant = plan.plant.resource;
  report.combos = planned_combos(plan);
  for (const PolicyEnv& p : plan.policies) report.policies.push_back(p.name);
  report.provenance.input_hash = plan.input_hash;
  report.provenance.solver = plan.solver;
  report.provenance.started_at = utc_timestamp();
  const int nc = static_cast<int>(report.combos.size());
  const int n = static_cast<int>(plan.policies.size()) * nc;
  report.cells.resize(n);
  run_parallel(n, plan.workers, [&](int job) {
    report.cells[job] = run_cell(plan.policies[job / nc], report.combos[job % nc]);
  });
  report.provenance.finished_at = utc_timestamp();
  return report;
}

}  // namespace

SystemSpec with_fixed_plant(const SystemSpec& spec, const StudyPlant& plant, const FlexParams& flex) {
  SystemSpec out = spec;
  ResourceSpec& r = plant_of(out, plant);
  r.existing_cap = plant.capacity_mw;
  r.max_cap = plant.capacity_mw;
  r.can_expand = false;
  r.can_retire = false;
  r.flex = flex;
  return out;
}

SystemSpec with_expandable_plant(const SystemSpec& spec, const StudyPlant& plant,
                                 const FlexParams& flex) {
  SystemSpec out = spec;
  ResourceSpec& r = plant_of(out, plant);
  r.existing_cap = 0.0;
  r.can_expand = true;
  r.can_retire = false;
  r.flex = flex;
  return out;
}

SystemSpec with_frozen_capacities(const SystemSpec& spec, const CapacitySet& caps,
                                  const std::string& except) {
  SystemSpec out = spec;
  for (ResourceSpec& r : out.resources) {
    if (r.name == except) continue;
    auto it = caps.power.find(r.name);
    if (it == caps.power.end())
      throw std::invalid_argument("no capacity for '" + r.name + "' in policy '" + caps.policy + "'");
    r.existing_cap = it->second;
    r.max_cap = it->second;
    r.can_expand = false;
    r.can_retire = false;
    if (r.storage) {
      auto e = caps.energy.find(r.name);
      if (e == caps.energy.end())
        throw std::invalid_argument("no energy capacity for '" + r.name + "'");
      r.storage->existing_energy = e->second;
    }
  }
  return out;
}

void run_parallel(int n, int workers, const std::function<void(int)>& job) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < n; i = next++) {
      try {
        job(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int threads = std::clamp(workers, 1, std::max(1, n));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::vector<CapacitySet> run_stage_a(const SystemSpec& spec, const StagePlan& plan) {
  check_policies(plan);
  const SystemSpec base = without_resource(spec, plan.plant.resource);
  std::vector<CapacitySet> out(plan.policies.size());
  run_parallel(static_cast<int>(out.size()), plan.workers, [&](int i) {
    const PolicyEnv& pol = plan.policies[i];
    const std::string id = scenario_id(pol.name, std::nullopt);
    Model model;
    try {
      model = build_model(base, pol, plan.finance, BuildMode::expansion());
    } catch (const std::exception& e) {
      throw WorkflowError(id, e.what());
    }
    const Solution sol = solve_checked(model.problem, plan.solver, id);
    CapacitySet caps;
    caps.policy = pol.name;
    for (int g = 0; g < static_cast<int>(base.resources.size()); ++g) {
      const ResourceSpec& r = base.resources[g];
      double mw = capacity_mw(model, base, g, sol.x);
      // Integer unit counts come back with solver noise.
      if (r.cls == ResourceClass::kThermalUc) mw = std::round(mw / r.unit_size) * r.unit_size;
      caps.power[r.name] = mw;
      if (r.storage) caps.energy[r.name] = energy_capacity_mwh(model, g, sol.x);
    }
    caps.tsc = total_system_cost(base, pol, plan.finance, model, sol).total;
    out[i] = std::move(caps);
  });
  return out;
}

SweepReport run_stage_b(const SystemSpec& spec, const std::vector<CapacitySet>& capacities,
                        const StagePlan& plan) {
  for (const PolicyEnv& pol : plan.policies) {
    const CapacitySet& caps = capacities_for(capacities, pol.name);
    for (const ResourceSpec& r : spec.resources) {
      if (r.name == plan.plant.resource) continue;
      if (!caps.power.count(r.name))
        throw std::invalid_argument("stage-A capacities for policy '" + pol.name +
                                    "' miss resource '" + r.name + "'");
    }
  }
  SweepReport report = sweep(plan, Stage::kB, [&](const PolicyEnv& pol, FlexCombo combo) {
    const CapacitySet& caps = capacities_for(capacities, pol.name);
    const SystemSpec s = with_fixed_plant(spec, plan.plant, flex_combo(combo, plan.bounds));
    std::map<std::string, double> power = caps.power;
    power[plan.plant.resource] = plan.plant.capacity_mw;
    try {
      return evaluate(s, pol, BuildMode::dispatch(power, caps.energy), plan, combo);
    } catch (const WorkflowError&) {
      throw;
    } catch (const std::exception& e) {
      throw WorkflowError(scenario_id(pol.name, combo), e.what());
    }
  });
  report.stage_a = capacities;
  return report;
}

SweepReport run_stage_c(const SystemSpec& spec, const StagePlan& plan,
                        const std::vector<CapacitySet>& capacities) {
  if (plan.stage_c_fixed_others)
    for (const PolicyEnv& pol : plan.policies) capacities_for(capacities, pol.name);
  SweepReport report = sweep(plan, Stage::kC, [&](const PolicyEnv& pol, FlexCombo combo) {
    SystemSpec s = with_expandable_plant(spec, plan.plant, flex_combo(combo, plan.bounds));
    if (plan.stage_c_fixed_others)
      s = with_frozen_capacities(s, capacities_for(capacities, pol.name), plan.plant.resource);
    try {
      return evaluate(s, pol, BuildMode::expansion(), plan, combo);
    } catch (const WorkflowError&) {
      throw;
    } catch (const std::exception& e) {
      throw WorkflowError(scenario_id(pol.name, combo), e.what());
    }
  });
  report.stage_a = capacities;
  return report;
}

}  // namespace flexccs
