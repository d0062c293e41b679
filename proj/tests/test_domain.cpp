#include <chrono>
#include <cmath>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "flexccs/domain.hpp"

using namespace flexccs;

namespace {

// Capital recovery written out term by term, no shared code with the library.
double crf_reference(double w, double years) {
  double disc = 1.0;
  for (int k = 0; k < static_cast<int>(years); ++k) disc /= (1.0 + w);
  return w / (1.0 - disc);
}

bool has_issue(const ValidationReport& report, const std::string& needle) {
  for (const auto& i : report)
    if (i.where.find(needle) != std::string::npos || i.message.find(needle) != std::string::npos)
      return true;
  return false;
}

SystemSpec small_valid_system() {
  auto s = fixtures::system_with({100, 200, 150},
                                 {fixtures::ccs_plant(), fixtures::vre("wind", 300),
                                  fixtures::battery("bat", 50, 200)});
  s.vre_profiles["wind"] = {0.1, 0.5, 0.9};
  s.resources[0].flex->min_up = 2;
  s.resources[0].flex->min_down = 3;
  return s;
}

}  // namespace

TEST_CASE("annualize_capex matches a term-by-term capital recovery factor") {
  CHECK(annualize_capex(2310, 0.065, 30, 0) == doctest::Approx(2310 * crf_reference(0.065, 30)).epsilon(1e-12));
  CHECK(annualize_capex(2310, 0.065, 30, 0) == doctest::Approx(176.9).epsilon(5e-4));
  CHECK(annualize_capex(1000, 1e-9, 20, 0) == doctest::Approx(50.0).epsilon(1e-6));
  CHECK(annualize_capex(1234, 0.08, 17, 1.0) == 0.0);
  CHECK(annualize_capex(1000, 0.05, 20, 0.3) ==
        doctest::Approx(0.7 * annualize_capex(1000, 0.05, 20, 0)).epsilon(1e-14));
  CHECK_THROWS_AS(annualize_capex(1000, 0.05, 0.5, 0), std::domain_error);
  CHECK_THROWS_AS(annualize_capex(1000, 0.0, 20, 0), std::domain_error);
}

TEST_CASE("annualize_capex is increasing in wacc and decreasing in lifetime") {
  double prev = 0.0;
  for (double w = 0.01; w < 0.3; w += 0.01) {
    const double v = annualize_capex(1000, w, 25, 0);
    CHECK(v > prev);
    prev = v;
  }
  prev = 1e18;
  for (int life = 1; life <= 60; ++life) {
    const double v = annualize_capex(1000, 0.065, life, 0);
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("capture and emission intensity") {
  ResourceSpec r = fixtures::ccs_plant();
  CHECK(capture_intensity(r) == doctest::Approx(0.3402).epsilon(1e-4));
  r.capture_rate = 0;
  CHECK(capture_intensity(r) == 0.0);
  r.capture_rate = 1;
  CHECK(capture_intensity(r) == r.heat_rate * r.emission_factor);

  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    r.heat_rate = 5 + 10 * u(rng);
    r.emission_factor = 0.05 + 0.05 * u(rng);
    r.capture_rate = u(rng);
    CHECK(capture_intensity(r) + emission_intensity(r) == r.heat_rate * r.emission_factor);
  }
}

TEST_CASE("effective marginal cost anchors") {
  const ResourceSpec ccs = fixtures::ccs_plant();
  PolicyEnv none;
  none.co2_transport_storage_cost = 0;
  CHECK(effective_marginal_cost(ccs, none) == doctest::Approx(29.9472).epsilon(1e-9));

  PolicyEnv credit;
  credit.capture_credit = 85;
  credit.co2_transport_storage_cost = 10;
  const double subsidy = effective_marginal_cost(ccs, none) - effective_marginal_cost(ccs, credit);
  CHECK(subsidy == doctest::Approx(75 * 0.340199496).epsilon(1e-9));
  CHECK(effective_marginal_cost(ccs, credit) == doctest::Approx(4.4322378).epsilon(1e-6));

  ResourceSpec wind = fixtures::vre("w", 10);
  PolicyEnv tax;
  tax.carbon_tax = 200;
  CHECK(effective_marginal_cost(wind, tax) == 0.0);
  wind.ptc = 27.5;
  CHECK(effective_marginal_cost(wind, tax) == -27.5);
}

TEST_CASE("effective marginal cost is affine in tax and credit") {
  ResourceSpec r = fixtures::ccs_plant();
  r.capture_rate = 0.85;
  PolicyEnv a, b;
  a.carbon_tax = 50;
  b.carbon_tax = 200;
  const double slope_tax =
      (effective_marginal_cost(r, b) - effective_marginal_cost(r, a)) / (b.carbon_tax - a.carbon_tax);
  CHECK(slope_tax == doctest::Approx(emission_intensity(r)).epsilon(1e-10));
  PolicyEnv c, d;
  c.capture_credit = 10;
  d.capture_credit = 85;
  const double slope_credit = (effective_marginal_cost(r, d) - effective_marginal_cost(r, c)) /
                              (d.capture_credit - c.capture_credit);
  CHECK(slope_credit == doctest::Approx(-capture_intensity(r)).epsilon(1e-10));
}

TEST_CASE("startup cost per MW combines the fixed charge with fuel and CO2 terms") {
  const ResourceSpec r = fixtures::ccs_plant();
  PolicyEnv pol;
  pol.co2_transport_storage_cost = 0;
  CHECK(startup_cost_per_mw(r, FlexParams::inflexible(), pol) == doctest::Approx(159 + 2 * 2.8));
  CHECK(startup_cost_per_mw(r, FlexParams::flexible(), pol) == doctest::Approx(106 + 2 * 2.8));
  pol.carbon_tax = 100;
  const double co2 = 2 * 0.05306;
  CHECK(startup_cost_per_mw(r, FlexParams::inflexible(), pol) ==
        doctest::Approx(159 + 5.6 + 100 * co2 * 0.1));
  PolicyEnv credit;
  credit.capture_credit = 85;
  credit.co2_transport_storage_cost = 10;
  CHECK(startup_cost_per_mw(r, FlexParams::inflexible(), credit) ==
        doctest::Approx(159 + 5.6 - 75 * co2 * 0.9));
  credit.credit_startup_capture = false;
  CHECK(startup_cost_per_mw(r, FlexParams::inflexible(), credit) ==
        doctest::Approx(159 + 5.6 + 10 * co2 * 0.9));
}

TEST_CASE("flexibility extremes") {
  const FlexParams lo = FlexParams::inflexible();
  CHECK(lo.ramp_rate == 0.36);
  CHECK(lo.min_up == 12);
  CHECK(lo.min_down == 18);
  CHECK(lo.min_load == 0.70);
  CHECK(lo.startup_cost == 159);
  const FlexParams hi = FlexParams::flexible();
  CHECK(hi.ramp_rate == 1.0);
  CHECK(hi.min_up == 4);
  CHECK(hi.min_down == 4);
  CHECK(hi.min_load == 0.30);
  CHECK(hi.startup_cost == 106);
  CHECK(lo.startup_fuel == hi.startup_fuel);
  FlexParams fast = hi;
  fast.ramp_rate = 2.5;
  CHECK(fast.effective_ramp() == 1.0);
}

TEST_CASE("validate_system accepts a well-formed system") {
  const SystemSpec s = small_valid_system();
  CHECK(validate_system(s).empty());
  const SystemSpec copy = s;
  validate_system(s);
  CHECK(s == copy);
  CHECK(validate_system(s).size() == validate_system(s).size());
}

TEST_CASE("validate_system reports each kind of violation") {
  {
    SystemSpec s = small_valid_system();
    s.vre_profiles["wind"].pop_back();
    const auto rep = validate_system(s);
    REQUIRE(rep.size() == 1);
    CHECK(rep[0].where.find("wind") != std::string::npos);
  }
  {
    SystemSpec s = small_valid_system();
    s.resources[0].capture_rate = 1.2;
    const auto rep = validate_system(s);
    REQUIRE(rep.size() == 1);
    CHECK(rep[0].message.find("capture_rate") != std::string::npos);
  }
  SystemSpec s = small_valid_system();
  s.demand[1] = -1;
  CHECK(has_issue(validate_system(s), "demand at hour 2"));

  s = small_valid_system();
  s.demand.push_back(3);
  CHECK(has_issue(validate_system(s), "demand has 4 hours"));

  s = small_valid_system();
  s.vre_profiles.erase("wind");
  CHECK(has_issue(validate_system(s), "no availability profile"));

  s = small_valid_system();
  s.vre_profiles["ccs"] = {1, 1, 1};
  CHECK(has_issue(validate_system(s), "non-vre"));

  s = small_valid_system();
  s.resources.push_back(fixtures::vre("wind", 1));
  CHECK(has_issue(validate_system(s), "duplicate"));

  s = small_valid_system();
  s.resources[1].capture_rate = 0.5;
  CHECK(has_issue(validate_system(s), "only allowed for thermal"));

  s = small_valid_system();
  s.resources[0].unit_size = 0;
  CHECK(has_issue(validate_system(s), "unit_size"));

  s = small_valid_system();
  s.resources[2].storage.reset();
  CHECK(has_issue(validate_system(s), "needs storage"));

  s = small_valid_system();
  s.resources[1].storage = StorageParams{};
  CHECK(has_issue(validate_system(s), "non-storage"));

  s = small_valid_system();
  s.resources[0].vom = -1;
  CHECK(has_issue(validate_system(s), "vom"));

  s = small_valid_system();
  s.resources[0].flex->min_load = 0;
  CHECK(has_issue(validate_system(s), "min_load"));

  s = small_valid_system();
  s.resources[0].flex->min_down = 4;
  CHECK(has_issue(validate_system(s), "min_down exceeds"));

  s = small_valid_system();
  s.resources[0].existing_cap = 750;
  s.resources[0].max_cap = 1000;
  CHECK(has_issue(validate_system(s), "whole number of units"));

  s = small_valid_system();
  s.resources[1].name = "bad name";
  CHECK(has_issue(validate_system(s), "name must be"));
}

TEST_CASE("policy and finance validation") {
  PolicyEnv p;
  CHECK(validate_policy(p).empty());
  p.ces_fraction = 1.1;
  CHECK(validate_policy(p).size() == 1);
  p.ces_fraction = 0.9;
  p.capture_credit = -1;
  CHECK(validate_policy(p).size() == 1);
  FinanceParams f;
  CHECK(validate_finance(f).empty());
  f.wacc = 1.0;
  CHECK(validate_finance(f).size() == 1);
  f.wacc = 0.065;
  f.lifetime_overrides["bat"] = 0.5;
  CHECK(validate_finance(f).size() == 1);
}

TEST_CASE("lifetime defaults and overrides") {
  FinanceParams f;
  CHECK(f.lifetime(fixtures::battery("b", 1, 4)) == 15);
  CHECK(f.lifetime(fixtures::ccs_plant()) == 30);
  f.lifetime_overrides["ccs"] = 25;
  CHECK(f.lifetime(fixtures::ccs_plant()) == 25);
}

TEST_CASE("hour weight defaults to a year spread over the horizon") {
  SystemSpec s = small_valid_system();
  CHECK(s.weight() == 1.0);
  s.hour_weight.reset();
  CHECK(s.weight() == doctest::Approx(8760.0 / 3));
}
