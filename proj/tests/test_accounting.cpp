#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "flexccs/accounting.hpp"
#include "flexccs/model.hpp"
#include "flexccs/solver.hpp"

using namespace flexccs;
using fixtures::existing_caps;
using fixtures::existing_energy;

namespace {

// Mixed system where every resource may grow and some may retire.
SystemSpec expandable(int T, unsigned seed) {
  SystemSpec s = fixtures::mixed(T, seed);
  for (ResourceSpec& r : s.resources) {
    r.can_expand = true;
    r.capex_power = r.capex_power > 0 ? r.capex_power : 900;
    r.fom_power = r.fom_power > 0 ? r.fom_power : 20;
  }
  s.resources[0].max_cap = 1000;
  s.resources[1].max_cap = 1000;
  s.resources[2].can_retire = true;
  s.resources[3].max_cap = 2000;
  s.resources[3].capex_power = 1300;
  s.resources[3].ptc = 15;
  s.resources[4].capex_energy = 250;
  s.resources[4].fom_energy = 5;
  s.resources[4].itc_fraction = 0.3;
  s.resources[4].can_retire = true;
  s.hour_weight = 8760.0 / T;
  return s;
}

Solution fake_optimal(const Model& m) {
  Solution s;
  s.status = SolveStatus::kOptimal;
  s.x.assign(m.problem.num_cols(), 0.0);
  return s;
}

}  // namespace

TEST_CASE("spell histogram joins spells across the wrap") {
  SpellHistogram h = spell_histogram({1, 1, 0, 0, 1, 1});
  CHECK(h.on == std::map<int, int>{{4, 1}});
  CHECK(h.off == std::map<int, int>{{2, 1}});
  h = spell_histogram({1, 1, 1});
  CHECK(h.on == std::map<int, int>{{3, 1}});
  CHECK(h.off.empty());
  h = spell_histogram({0, 0});
  CHECK(h.off == std::map<int, int>{{2, 1}});
  h = spell_histogram({0, 1, 0, 1, 1, 0, 0, 0});
  CHECK(h.on == std::map<int, int>{{1, 1}, {2, 1}});
  CHECK(h.off == std::map<int, int>{{1, 1}, {4, 1}});

  std::mt19937 rng(3);
  for (int k = 0; k < 300; ++k) {
    const int T = 1 + static_cast<int>(rng() % 40);
    std::vector<double> c(T);
    for (double& v : c) v = static_cast<double>(rng() % 3);
    h = spell_histogram(c);
    int total = 0, on_spells = 0, off_spells = 0;
    for (auto [len, n] : h.on) total += len * n, on_spells += n;
    for (auto [len, n] : h.off) total += len * n, off_spells += n;
    CHECK(total == T);
    if (!h.on.empty() && !h.off.empty()) CHECK(on_spells == off_spells);
  }
}

TEST_CASE("metrics for a plant at full output") {
  ResourceSpec plant = fixtures::ccs_plant();
  plant.flex->min_up = 2;
  plant.flex->min_down = 2;
  SystemSpec s = fixtures::system_with({500, 500, 500, 500, 500, 500}, {plant});
  const Model m = build_model(s, PolicyEnv{}, FinanceParams{},
                              BuildMode::dispatch(existing_caps(s)));
  const Solution sol = solve_milp(m.problem);
  REQUIRE(sol.optimal());
  const Metrics met = compute_metrics(s, PolicyEnv{}, FinanceParams{}, m, sol);
  const ResourceMetrics& r = met.resource("ccs");
  CHECK(r.capacity_factor == doctest::Approx(1.0));
  CHECK(r.startups == 0);
  REQUIRE(r.spells);
  CHECK(r.spells->on == std::map<int, int>{{6, 1}});
  CHECK(r.captured_t == doctest::Approx(3000 * 0.340199496));
  CHECK(r.captured_t + r.emitted_t == doctest::Approx(3000 * 7.124 * 0.05306));
  CHECK(met.nse_mwh == doctest::Approx(0.0));
}

TEST_CASE("metrics from a commitment pattern") {
  ResourceSpec plant = fixtures::ccs_plant();
  plant.flex->min_up = 2;
  plant.flex->min_down = 2;
  plant.flex->min_load = 0.3;
  SystemSpec s = fixtures::system_with({300, 300, 300, 300, 300, 300}, {plant});
  const Model m = build_model(s, PolicyEnv{}, FinanceParams{},
                              BuildMode::dispatch(existing_caps(s)));
  Solution sol = fake_optimal(m);
  const int pattern[6] = {1, 1, 0, 0, 1, 1};
  for (int t = 0; t < 6; ++t) {
    sol.x[m.index.at(VarKind::kCommit, 0, t)] = pattern[t];
    sol.x[m.index.at(VarKind::kPower, 0, t)] = 300 * pattern[t];
    sol.x[m.index.at(VarKind::kNse, -1, t)] = 300 * (1 - pattern[t]);
  }
  sol.x[m.index.at(VarKind::kStart, 0, 4)] = 1;
  sol.x[m.index.at(VarKind::kShut, 0, 2)] = 1;
  sol.x[m.index.at(VarKind::kUnits, 0)] = 1;
  CHECK(check_point(m.problem, sol.x).empty());
  CHECK(verify_operations(s, m, sol.x).empty());
  const Metrics met = compute_metrics(s, PolicyEnv{}, FinanceParams{}, m, sol);
  const ResourceMetrics& r = met.resource("ccs");
  CHECK(r.startups == 1);
  CHECK(r.spells->on == std::map<int, int>{{4, 1}});
  CHECK(r.spells->off == std::map<int, int>{{2, 1}});
  CHECK(r.capacity_factor == doctest::Approx(1200.0 / 3000.0));

  sol.status = SolveStatus::kLimit;
  CHECK_THROWS_AS(compute_metrics(s, PolicyEnv{}, FinanceParams{}, m, sol), std::invalid_argument);
}

TEST_CASE("operating profit of one hour at a known margin") {
  ResourceSpec plant = fixtures::ccs_plant();
  plant.heat_rate = 0;
  plant.fuel_price = 0;
  plant.vom = 29.9;
  plant.capture_rate = 0;
  plant.flex->min_up = 1;
  plant.flex->min_down = 1;
  SystemSpec s = fixtures::system_with({500}, {plant});
  const Model m = build_model(s, PolicyEnv{}, FinanceParams{}, BuildMode::dispatch(existing_caps(s)));
  Solution sol = fake_optimal(m);
  sol.x[m.index.at(VarKind::kCommit, 0, 0)] = 1;
  sol.x[m.index.at(VarKind::kPower, 0, 0)] = 500;
  sol.x[m.index.at(VarKind::kUnits, 0)] = 1;
  const ProfitStatement p = operating_profit(s, PolicyEnv{}, "ccs", m, sol, {30.0});
  CHECK(p.operating_profit == doctest::Approx(50.0));
  CHECK(p.energy_revenue == doctest::Approx(15000));
  CHECK(p.vom_cost == doctest::Approx(14950));

  const ProfitStatement idle = operating_profit(s, PolicyEnv{}, "ccs", m, fake_optimal(m), {30.0});
  CHECK(idle.energy_revenue == 0);
  CHECK(idle.costs() == 0);
  CHECK(idle.operating_profit == 0);
  CHECK_THROWS_AS(operating_profit(s, PolicyEnv{}, "ccs", m, sol, {30.0, 1.0}), std::invalid_argument);
}

TEST_CASE("profit statement fields sum to the profit") {
  for (unsigned seed = 0; seed < 4; ++seed) {
    SystemSpec s = fixtures::mixed(12, seed);
    PolicyEnv pol;
    pol.capture_credit = 85;
    pol.carbon_tax = seed * 30.0;
    const Model m = build_model(s, pol, FinanceParams{},
                                BuildMode::dispatch(existing_caps(s), existing_energy(s)));
    const Solution sol = solve_milp(m.problem);
    REQUIRE(sol.optimal());
    const Solution priced = fix_and_price(m.problem, sol);
    REQUIRE(priced.optimal());
    const auto prices = hourly_prices(s, m, priced);
    for (const char* name : {"ccs", "fleet", "ct"}) {
      const ProfitStatement p = operating_profit(s, pol, name, m, sol, prices);
      CHECK(p.operating_profit == p.energy_revenue + p.capture_credit_revenue + p.ptc_revenue -
                                      p.fuel_cost - p.vom_cost - p.carbon_tax_cost - p.ts_cost -
                                      p.startup_cost);
    }
  }
}

TEST_CASE("recomputed system cost matches the solver objective") {
  for (unsigned seed = 0; seed < 8; ++seed) {
    SystemSpec s = expandable(8, seed);
    PolicyEnv pol;
    if (seed % 2) {
      pol.carbon_tax = 120;
    } else {
      pol.ces_fraction = 0.5;
      pol.capture_credit = 85;
      pol.credit_startup_capture = seed % 4 == 0;
    }
    for (bool dispatch : {false, true}) {
      const BuildMode mode = dispatch ? BuildMode::dispatch(existing_caps(s), existing_energy(s))
                                      : BuildMode::expansion();
      const Model m = build_model(s, pol, FinanceParams{}, mode);
      const Solution sol = solve_milp(m.problem);
      REQUIRE(sol.optimal());
      const TotalSystemCost tsc = total_system_cost(s, pol, FinanceParams{}, m, sol);
      CHECK(tsc.total == doctest::Approx(sol.objective).epsilon(1e-6));
      CHECK(verify_operations(s, m, sol.x).empty());
      const Metrics met = compute_metrics(s, pol, FinanceParams{}, m, sol);
      CHECK(met.system_cost.total == tsc.total);
    }
  }
}

TEST_CASE("system cost without transfers drops taxes and credits") {
  SystemSpec s = expandable(6, 11);
  for (auto& r : s.resources) {
    r.ptc = 0;
    r.itc_fraction = 0;
  }
  const Model m = build_model(s, PolicyEnv{}, FinanceParams{}, BuildMode::expansion());
  const Solution sol = solve_milp(m.problem);
  REQUIRE(sol.optimal());
  const TotalSystemCost tsc = total_system_cost(s, PolicyEnv{}, FinanceParams{}, m, sol);
  CHECK(tsc.total == doctest::Approx(tsc.excluding_transfers).epsilon(1e-12));

  PolicyEnv tax;
  tax.carbon_tax = 100;
  const Model mt = build_model(s, tax, FinanceParams{}, BuildMode::expansion());
  const Solution st = solve_milp(mt.problem);
  REQUIRE(st.optimal());
  const TotalSystemCost t2 = total_system_cost(s, tax, FinanceParams{}, mt, st);
  CHECK(t2.total > t2.excluding_transfers);
}

TEST_CASE("zero demand costs only the fixed charges of capacity that must stay") {
  SystemSpec s = fixtures::mixed(6, 2);
  s.demand.assign(6, 0.0);
  s.resources[2].can_retire = true;  // ct may go
  const Model m = build_model(s, PolicyEnv{}, FinanceParams{}, BuildMode::expansion());
  const Solution sol = solve_milp(m.problem);
  REQUIRE(sol.optimal());
  double fixed = 0.0;
  for (const auto& r : s.resources)
    if (!r.can_retire) fixed += r.fom_power * 1000 * r.existing_cap + r.fom_energy * 1000 * (r.storage ? r.storage->existing_energy : 0);
  CHECK(total_system_cost(s, PolicyEnv{}, FinanceParams{}, m, sol).total == doctest::Approx(fixed));
  CHECK(sol.objective == doctest::Approx(fixed));
}

TEST_CASE("operations verifier catches perturbed dispatches") {
  SystemSpec s = fixtures::mixed(12, 4);
  const Model m = build_model(s, PolicyEnv{}, FinanceParams{},
                              BuildMode::dispatch(existing_caps(s), existing_energy(s)));
  const Solution sol = solve_milp(m.problem);
  REQUIRE(sol.optimal());
  REQUIRE(verify_operations(s, m, sol.x).empty());

  std::vector<double> x = sol.x;
  x[m.index.at(VarKind::kNse, -1, 3)] += 5;
  CHECK_FALSE(verify_operations(s, m, x).empty());

  x = sol.x;
  x[m.index.at(VarKind::kSoc, 4, 5)] += 3;
  const auto soc_issues = verify_operations(s, m, x);
  REQUIRE_FALSE(soc_issues.empty());
  CHECK(soc_issues[0].find("state of charge") != std::string::npos);

  // Move the fleet's output sharply within a committed stretch.
  x = sol.x;
  int t = -1;
  for (int h = 1; h < 12; ++h) {
    if (x[m.index.at(VarKind::kCommit, 0, h)] > 0.5 && x[m.index.at(VarKind::kStart, 0, h)] < 0.5) {
      t = h;
      break;
    }
  }
  if (t > 0) {
    const double committed = x[m.index.at(VarKind::kCommit, 0, t)];
    x[m.index.at(VarKind::kPower, 0, t)] = 200 * committed;
    x[m.index.at(VarKind::kPower, 0, t - 1)] = 200 * 0.7 * x[m.index.at(VarKind::kCommit, 0, t - 1)];
    bool ramp = false;
    for (const auto& msg : verify_operations(s, m, x)) ramp = ramp || msg.find("ramp") != std::string::npos;
    CHECK(ramp == (committed * 200 * 0.3 > 0.36 * 200 * committed + 1e-9));
  }
}

TEST_CASE("prices follow the marginal resource") {
  // Study plant strictly between its limits, a shortage hour and a
  // curtailment hour.
  ResourceSpec plant = fixtures::ccs_plant();
  plant.flex->min_up = 1;
  plant.flex->min_down = 1;
  plant.flex->min_load = 0.3;
  plant.flex->ramp_rate = 1.0;
  SystemSpec s = fixtures::system_with({400, 300, 350, 900, 100, 400},
                                       {plant, fixtures::vre("wind", 300)});
  s.vre_profiles["wind"] = {0.0, 0.0, 0.0, 0.0, 1.0, 0.0};
  s.resources[0].flex->startup_cost = 0;
  s.resources[0].flex->startup_fuel = 0;
  PolicyEnv pol;
  pol.co2_transport_storage_cost = 0;
  const Model m = build_model(s, pol, FinanceParams{}, BuildMode::dispatch(existing_caps(s)));
  const Solution sol = solve_milp(m.problem);
  REQUIRE(sol.optimal());
  const Solution priced = fix_and_price(m.problem, sol);
  REQUIRE(priced.optimal());
  CHECK(priced.objective == doctest::Approx(sol.objective).epsilon(1e-9));
  const auto pi = hourly_prices(s, m, priced);
  const double mc = effective_marginal_cost(s.resources[0], pol);
  CHECK(pi[1] == doctest::Approx(mc).epsilon(1e-9));
  CHECK(pi[2] == doctest::Approx(mc).epsilon(1e-9));
  CHECK(pi[3] == doctest::Approx(9000).epsilon(1e-9));
  CHECK(pi[4] == doctest::Approx(0.0));
}

TEST_CASE("delta table rows") {
  CaseOutcome base{"tax200", "None", 0, 1.0, 10, 100};
  auto same = delta_table(base, {base});
  REQUIRE(same.size() == 1);
  CHECK(same[0].d_profit == 0);
  CHECK(same[0].d_capacity == 0);
  CHECK(same[0].d_tsc == 0);

  std::vector<CaseOutcome> cases = {{"tax200", "P1", 1, 1.0, 10, 100},
                                    {"tax200", "P2", 1, 2.0, 12, 99},
                                    {"tax200", "P1+P2+P3+P4+P5", 5, 4.0, 15, 97}};
  const auto rows = delta_table(base, cases);
  REQUIRE(rows.size() == 5);
  CHECK(rows[0].d_profit == 0);
  CHECK(rows[1].d_profit == 1);
  CHECK(rows[2].d_profit == 3);
  CHECK(rows[3].label == kSumOfSinglesLabel);
  CHECK(rows[3].synthetic);
  CHECK(rows[3].d_profit == 1);
  CHECK(rows[3].d_capacity == 2);
  CHECK(rows[4].label == kAllTogetherLabel);
  CHECK(rows[4].d_tsc == -3);

  cases[1].scenario = "ces90";
  CHECK_THROWS_AS(delta_table(base, cases), std::invalid_argument);
}
