#include <doctest.h>

#include <atomic>
#include <set>

#include "fixtures.hpp"
#include "flexccs/accounting.hpp"
#include "flexccs/io.hpp"
#include "flexccs/workflow.hpp"

using namespace flexccs;

namespace {

SystemSpec study_system(int T = 24, unsigned seed = 3) {
  SystemSpec s = fixtures::mixed(T, seed);
  for (auto& r : s.resources) {
    if (r.name == "wind") {
      r.can_expand = true;
      r.max_cap = 2000;
      r.capex_power = 1400;
      r.fom_power = 40;
    }
    if (r.name == "ct") {
      r.can_expand = true;
      r.max_cap = 1500;
      r.capex_power = 900;
      r.fom_power = 15;
    }
  }
  // per-hour weights scaled so investment competes with a short horizon
  s.hour_weight = 8760.0 / T;
  return s;
}

StagePlan small_plan() {
  StagePlan plan;
  PolicyEnv tax;
  tax.name = "tax";
  tax.carbon_tax = 100;
  PolicyEnv ces;
  ces.name = "ces";
  ces.ces_fraction = 0.6;
  ces.capture_credit = 85;
  plan.policies = {tax, ces};
  plan.combos = {parse_combo("P1"), parse_combo("P2"), kAllLevers};
  plan.plant.resource = "ccs";
  return plan;
}

}  // namespace

TEST_CASE("lever combinations map onto parameter sets") {
  CHECK(flex_combo(kNoLevers) == FlexParams::inflexible());
  CHECK(flex_combo(kAllLevers) == FlexParams::flexible());
  FlexParams p2 = flex_combo(parse_combo("P2"));
  FlexParams expect = FlexParams::inflexible();
  expect.min_load = 0.30;
  CHECK(p2 == expect);
  FlexParams p1p5 = flex_combo(parse_combo("P1+P5"));
  CHECK(p1p5.startup_cost == 106);
  CHECK(p1p5.min_up == 4);
  CHECK(p1p5.min_down == 18);
  CHECK(p1p5.ramp_rate == doctest::Approx(0.36));
  CHECK_THROWS_AS(flex_combo(0x20), std::invalid_argument);
}

TEST_CASE("combo labels round trip") {
  for (FlexCombo c : all_combos()) CHECK(parse_combo(combo_label(c)) == c);
  CHECK(combo_label(kNoLevers) == "None");
  CHECK(combo_label(0b10101) == "P1+P3+P5");
  CHECK(parse_combo("all") == kAllLevers);
  CHECK(parse_combo("P3+P1") == 0b101);
  CHECK_THROWS_AS(parse_combo("P6"), std::invalid_argument);
  CHECK_THROWS_AS(parse_combo("P1+"), std::invalid_argument);
  CHECK_THROWS_AS(parse_combo("Q1"), std::invalid_argument);
}

TEST_CASE("all 32 combinations, ordered by size") {
  auto combos = all_combos();
  REQUIRE(combos.size() == 32);
  CHECK(std::set<FlexCombo>(combos.begin(), combos.end()).size() == 32);
  CHECK(combos.front() == kNoLevers);
  CHECK(combos.back() == kAllLevers);
  for (size_t i = 1; i < combos.size(); ++i)
    CHECK(combo_size(combos[i - 1]) <= combo_size(combos[i]));
  CHECK(combos[1] == 1);
  CHECK(combos[6] == 0b00011);
  CHECK(is_subset(0b011, 0b111));
  CHECK_FALSE(is_subset(0b100, 0b011));
}

TEST_CASE("supplementary table layout covers every non-empty combination once") {
  auto cols = table_columns();
  REQUIRE(cols.size() == 17);
  CHECK(combo_label(cols[0]) == "None");
  CHECK(combo_label(cols[5]) == "P5");
  CHECK(combo_label(cols[6]) == "P1+P2");
  CHECK(combo_label(cols[11]) == "P3+P4");
  CHECK(combo_label(cols[12]) == "P1+P2+P3");
  CHECK(combo_label(cols[16]) == "P1+P2+P3+P4");
  std::multiset<FlexCombo> seen;
  for (FlexCombo c : cols)
    for (int k = 1; k <= 5; ++k)
      if (auto cell = table_cell(c, k)) seen.insert(*cell);
  CHECK(seen.size() == 31);
  CHECK(std::set<FlexCombo>(seen.begin(), seen.end()).size() == 31);
  CHECK(table_cell(cols[0], 3) == FlexCombo{0b100});
  CHECK_FALSE(table_cell(parse_combo("P3"), 2).has_value());
  CHECK(table_cell(parse_combo("P1+P2"), 5) == parse_combo("P1+P2+P5"));
}

TEST_CASE("stage names") {
  CHECK(parse_stage("b") == Stage::kB);
  CHECK(std::string(to_string(Stage::kC)) == "c");
  CHECK_THROWS_AS(parse_stage("d"), std::invalid_argument);
}

TEST_CASE("parallel runner visits each job and rethrows in job order") {
  std::atomic<int> sum{0};
  run_parallel(50, 4, [&](int i) { sum += i; });
  CHECK(sum == 1225);
  try {
    run_parallel(10, 3, [](int i) {
      if (i == 7 || i == 4) throw std::runtime_error("job " + std::to_string(i));
    });
    FAIL("expected a throw");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "job 4");
  }
}

TEST_CASE("stage transforms") {
  SystemSpec s = study_system();
  StudyPlant plant{"ccs", 500};
  SystemSpec no_plant = without_resource(s, "ccs");
  CHECK(no_plant.find_resource("ccs") < 0);
  CHECK(no_plant.resources.size() == s.resources.size() - 1);

  SystemSpec fixed = with_fixed_plant(s, plant, FlexParams::flexible());
  const auto& f = fixed.resource("ccs");
  CHECK(f.existing_cap == 500);
  CHECK_FALSE(f.can_expand);
  CHECK(*f.flex == FlexParams::flexible());

  SystemSpec open = with_expandable_plant(s, plant, FlexParams::inflexible());
  CHECK(open.resource("ccs").existing_cap == 0);
  CHECK(open.resource("ccs").can_expand);

  CapacitySet caps{"x", {{"fleet", 200}, {"ct", 50}, {"wind", 10}, {"bat", 5}}, {{"bat", 20}}, 0};
  SystemSpec frozen = with_frozen_capacities(open, caps, "ccs");
  CHECK(frozen.resource("ct").existing_cap == 50);
  CHECK_FALSE(frozen.resource("ct").can_expand);
  CHECK(frozen.resource("bat").storage->existing_energy == 20);
  CHECK(frozen.resource("ccs").can_expand);
  caps.power.erase("ct");
  CHECK_THROWS_AS(with_frozen_capacities(open, caps, "ccs"), std::invalid_argument);
  CHECK_THROWS_AS(with_fixed_plant(s, StudyPlant{"ct", 500}, FlexParams{}), std::invalid_argument);
}

TEST_CASE("three stages on a small system") {
  SystemSpec s = study_system();
  StagePlan plan = small_plan();

  auto caps = run_stage_a(s, plan);
  REQUIRE(caps.size() == 2);
  CHECK(caps[0].policy == "tax");
  CHECK(caps[0].power.count("ccs") == 0);
  CHECK(caps[0].power.at("fleet") == doctest::Approx(400));
  CHECK(caps[0].energy.count("bat") == 1);

  SweepReport b = run_stage_b(s, caps, plan);
  CHECK(b.stage == Stage::kB);
  REQUIRE(b.combos.size() == 4);
  CHECK(b.combos[0] == kNoLevers);
  REQUIRE(b.cells.size() == 8);
  for (const SweepCell& c : b.cells) {
    CHECK(c.plant_capacity_mw == doctest::Approx(500));
    CHECK(c.prices.size() == 24);
    CHECK(c.plant_output.size() == 24);
    CHECK(c.tsc.total == doctest::Approx(c.objective).epsilon(1e-6));
    CHECK(c.best_bound <= c.objective + 1e-6 * std::abs(c.objective) + 1e-6);
  }
  // more operating freedom never costs the system more, up to the gap
  for (const std::string& pol : {"tax", "ces"}) {
    const double base = b.cell(pol, kNoLevers).objective;
    const double all = b.cell(pol, kAllLevers).objective;
    CHECK(all <= base * (1 + 2 * plan.solver.mip_gap));
  }
  CHECK(b.stage_a.size() == 2);
  CHECK_FALSE(b.provenance.started_at.empty());

  plan.workers = 3;
  SweepReport b3 = run_stage_b(s, caps, plan);
  for (size_t i = 0; i < b.cells.size(); ++i) {
    CHECK(b3.cells[i].policy == b.cells[i].policy);
    CHECK(b3.cells[i].combo == b.cells[i].combo);
    CHECK(b3.cells[i].objective == b.cells[i].objective);
    CHECK(b3.cells[i].profit.operating_profit == b.cells[i].profit.operating_profit);
  }

  SweepReport c = run_stage_c(s, plan);
  REQUIRE(c.cells.size() == 8);
  for (const SweepCell& cell : c.cells) {
    const double mw = cell.plant_capacity_mw;
    CHECK((mw == doctest::Approx(0) || mw == doctest::Approx(500)));
  }
  plan.stage_c_fixed_others = true;
  SweepReport cf = run_stage_c(s, plan, caps);
  for (const SweepCell& cell : cf.cells) {
    const CapacitySet& a = cell.policy == "tax" ? caps[0] : caps[1];
    CHECK(cell.metrics.resource("ct").capacity_mw == doctest::Approx(a.power.at("ct")));
  }
}

TEST_CASE("failures name the scenario") {
  SystemSpec s = study_system();
  StagePlan plan = small_plan();
  auto caps = run_stage_a(s, plan);
  CHECK_THROWS_AS(run_stage_b(s, {caps[0]}, plan), std::invalid_argument);
  plan.solver.iteration_limit = 1;
  try {
    run_stage_b(s, caps, plan);
    FAIL("expected a throw");
  } catch (const WorkflowError& e) {
    CHECK(e.scenario().find("tax") != std::string::npos);
    CHECK(e.scenario().find("None") != std::string::npos);
  }
  StagePlan dup = small_plan();
  dup.policies.push_back(dup.policies[0]);
  CHECK_THROWS_AS(run_stage_a(s, dup), std::invalid_argument);
}

TEST_CASE("stage A on the toy: repeatable, firm kept, cleaner as the tax rises") {
  InputBundle in = load_inputs("examples/texas-toy");
  StagePlan plan = make_plan(in, Stage::kA);
  plan.solver.mip_gap = 1e-6;
  const SystemSpec base = without_resource(in.system, plan.plant.resource);
  double last_share = -1.0;
  for (double tax : {0.0, 50.0, 100.0, 200.0}) {
    PolicyEnv pol;
    pol.name = "tax";
    pol.carbon_tax = tax;
    pol.nuclear_no_retire = true;
    plan.policies = {pol};
    const auto caps = run_stage_a(in.system, plan);
    REQUIRE(caps.size() == 1);
    CHECK(caps[0].power.at("nuclear") >= base.resource("nuclear").existing_cap - 1e-6);
    CHECK(caps[0].power.count(plan.plant.resource) == 0);
    const auto again = run_stage_a(in.system, plan);
    CHECK(again[0].power == caps[0].power);
    CHECK(again[0].tsc == caps[0].tsc);

    const Model m = build_model(base, pol, plan.finance, BuildMode::expansion());
    const Solution sol = solve(m.problem, plan.solver);
    REQUIRE(sol.optimal());
    const Metrics met = compute_metrics(base, pol, plan.finance, m, sol);
    double clean = 0.0, total = 0.0;
    for (const ResourceSpec& r : base.resources) {
      if (r.cls == ResourceClass::kStorage) continue;
      const double g = met.resource(r.name).generation_mwh;
      total += g;
      if (r.ces_qualifying) clean += g;
    }
    const double share = clean / total;
    CAPTURE(tax);
    CHECK(share >= last_share - 1e-6);
    last_share = share;
  }
}
