#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "flexccs/domain.hpp"
#include "flexccs/model.hpp"
#include "flexccs/solver.hpp"

namespace flexccs {

// Spell length in hours -> number of spells.
struct SpellHistogram {
  std::map<int, int> on;
  std::map<int, int> off;
};

// On/off spells of a commitment series (on when > 0), joined across the
// wrap from the last hour to the first.
SpellHistogram spell_histogram(const std::vector<double>& commit);

struct ResourceMetrics {
  std::string name;
  double capacity_mw = 0.0;
  double energy_capacity_mwh = 0.0;
  double generation_mwh = 0.0;  // over the modelled horizon
  double capacity_factor = 0.0;
  double startups = 0.0;          // over the modelled horizon
  double annual_startups = 0.0;   // scaled by the hour weight
  double captured_t = 0.0;
  double emitted_t = 0.0;
  double curtailed_mwh = 0.0;
  std::optional<SpellHistogram> spells;
};

struct TotalSystemCost {
  double total = 0.0;                // $/yr, the expansion objective
  double excluding_transfers = 0.0;  // taxes, credits, PTC and ITC removed
};

struct Metrics {
  double hour_weight = 1.0;
  std::vector<ResourceMetrics> resources;
  TotalSystemCost system_cost;
  double nse_mwh = 0.0;

  const ResourceMetrics& resource(const std::string& name) const;
};

// Throws std::invalid_argument unless the solution is optimal.
Metrics compute_metrics(const SystemSpec& spec, const PolicyEnv& pol, const FinanceParams& fin,
                        const Model& model, const Solution& solution);

// Annualized $ for one resource. Startup fuel CO2 is taxed and credited like
// operating CO2; FOM is reported but not part of the operating profit.
struct ProfitStatement {
  double energy_revenue = 0.0;
  double capture_credit_revenue = 0.0;
  double ptc_revenue = 0.0;
  double fuel_cost = 0.0;
  double vom_cost = 0.0;
  double carbon_tax_cost = 0.0;
  double ts_cost = 0.0;
  double startup_cost = 0.0;
  double operating_profit = 0.0;
  double fom_cost = 0.0;

  double revenues() const { return energy_revenue + capture_credit_revenue + ptc_revenue; }
  double costs() const {
    return fuel_cost + vom_cost + carbon_tax_cost + ts_cost + startup_cost;
  }
};

ProfitStatement operating_profit(const SystemSpec& spec, const PolicyEnv& pol,
                                 const std::string& resource, const Model& model,
                                 const Solution& solution, const std::vector<double>& prices);

// Balance-row duals per MWh of the modelled hour.
std::vector<double> hourly_prices(const SystemSpec& spec, const Model& model,
                                  const Solution& priced);

// Recomputed from primal values and the input data alone.
TotalSystemCost total_system_cost(const SystemSpec& spec, const PolicyEnv& pol,
                                  const FinanceParams& fin, const Model& model,
                                  const Solution& solution);

// Physical consistency of a dispatch, evaluated from the input data rather
// than the model rows: balance, availability, unit limits, minimum up and
// down times, ramps and storage state. Returns one message per violation.
std::vector<std::string> verify_operations(const SystemSpec& spec, const Model& model,
                                           const std::vector<double>& x, double tol = 1e-6);

struct CaseOutcome {
  std::string scenario;
  std::string label;
  int levers = 0;  // number of improved parameters
  double profit = 0.0;
  double capacity = 0.0;
  double tsc = 0.0;
};

struct DeltaRow {
  std::string label;
  double d_profit = 0.0;
  double d_capacity = 0.0;
  double d_tsc = 0.0;
  bool synthetic = false;
};

inline constexpr const char* kSumOfSinglesLabel = "Add all individual impacts";
inline constexpr const char* kAllTogetherLabel = "All together";

// One row per case, then the sum of single-parameter deltas (when any
// single-parameter case is present) and the all-five case again under its
// summary label. Throws std::invalid_argument on scenario mismatch.
std::vector<DeltaRow> delta_table(const CaseOutcome& baseline,
                                  const std::vector<CaseOutcome>& cases);

}  // namespace flexccs
