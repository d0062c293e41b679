#pragma once

// Small hand-built systems shared by the unit tests.

#include <algorithm>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "flexccs/domain.hpp"

namespace fixtures {

using namespace flexccs;

// The study plant as parameterized in the defaults: 500 MW single unit.
inline ResourceSpec ccs_plant(const std::string& name = "ccs", double existing = 500.0) {
  ResourceSpec r;
  r.name = name;
  r.cls = ResourceClass::kThermalUc;
  r.existing_cap = existing;
  r.unit_size = 500.0;
  r.max_cap = existing > 0 ? existing : 500.0;
  r.capex_power = 2310;
  r.fom_power = 67;
  r.vom = 10;
  r.heat_rate = 7.124;
  r.fuel_price = 2.8;
  r.emission_factor = 0.05306;
  r.capture_rate = 0.90;
  r.ces_qualifying = true;
  r.flex = FlexParams::inflexible();
  return r;
}

inline ResourceSpec simple_thermal(const std::string& name, double cap, double fuel,
                                   double heat_rate, double vom) {
  ResourceSpec r;
  r.name = name;
  r.cls = ResourceClass::kThermalSimple;
  r.existing_cap = cap;
  r.heat_rate = heat_rate;
  r.fuel_price = fuel;
  r.vom = vom;
  r.emission_factor = 0.05306;
  return r;
}

inline ResourceSpec vre(const std::string& name, double cap) {
  ResourceSpec r;
  r.name = name;
  r.cls = ResourceClass::kVre;
  r.existing_cap = cap;
  r.ces_qualifying = true;
  return r;
}

inline ResourceSpec battery(const std::string& name, double power, double energy) {
  ResourceSpec r;
  r.name = name;
  r.cls = ResourceClass::kStorage;
  r.existing_cap = power;
  r.vom = 0.5;
  r.storage = StorageParams{energy, 0.92, 0.92, std::nullopt};
  return r;
}

inline SystemSpec system_with(std::vector<double> demand, std::vector<ResourceSpec> resources) {
  SystemSpec s;
  s.horizon_hours = static_cast<int>(demand.size());
  s.demand = std::move(demand);
  s.resources = std::move(resources);
  s.hour_weight = 1.0;
  return s;
}

// Mixed system: one clustered uc fleet, the study plant, gas, wind, storage.
inline SystemSpec mixed(int T, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> demand(T);
  for (int t = 0; t < T; ++t) demand[t] = 400 + 500 * u(rng);
  ResourceSpec fleet = ccs_plant("fleet", 400);
  fleet.unit_size = 200;
  fleet.capture_rate = 0;
  fleet.heat_rate = 6.5;
  fleet.flex->min_up = 3;
  fleet.flex->min_down = 2;
  ResourceSpec ccs = ccs_plant();
  ccs.flex->min_up = std::min(T, 4);
  ccs.flex->min_down = std::min(T, 5);
  SystemSpec s = system_with(
      demand, {fleet, ccs, simple_thermal("ct", 300, 2.8, 10, 4),
               vre("wind", 600), battery("bat", 100, 400)});
  std::vector<double> prof(T);
  for (int t = 0; t < T; ++t) prof[t] = u(rng);
  s.vre_profiles["wind"] = prof;
  return s;
}

inline std::map<std::string, double> existing_caps(const SystemSpec& s) {
  std::map<std::string, double> caps;
  for (const auto& r : s.resources) caps[r.name] = r.existing_cap;
  return caps;
}

inline std::map<std::string, double> existing_energy(const SystemSpec& s) {
  std::map<std::string, double> e;
  for (const auto& r : s.resources)
    if (r.storage) e[r.name] = r.storage->existing_energy;
  return e;
}

}  // namespace fixtures
