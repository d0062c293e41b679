#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace flexccs {

enum class ResourceClass { kThermalUc, kThermalSimple, kVre, kStorage, kFirm };

const char* to_string(ResourceClass cls);
ResourceClass parse_resource_class(const std::string& text);

// Operating flexibility of a unit-committed resource. Costs are per MW of
// unit size per start.
struct FlexParams {
  double min_load = 0.70;     // fraction of unit size
  double ramp_rate = 0.36;    // fraction of unit size per hour, up and down
  int min_up = 12;            // hours
  int min_down = 18;          // hours
  double startup_cost = 159;  // $/MW per start
  double startup_fuel = 2.0;  // MMBtu/MW per start

  // Least and most flexible CCGT-CCS characteristics.
  static FlexParams inflexible() { return {}; }
  static FlexParams flexible() { return {0.30, 1.00, 4, 4, 106, 2.0}; }

  // Ramp rates above one unit per hour are equivalent at hourly resolution.
  double effective_ramp() const { return ramp_rate > 1.0 ? 1.0 : ramp_rate; }

  bool operator==(const FlexParams&) const = default;
};

struct StorageParams {
  double existing_energy = 0.0;  // MWh
  double eff_charge = 0.92;
  double eff_discharge = 0.92;
  std::optional<double> duration_max;  // hours of energy per MW

  bool operator==(const StorageParams&) const = default;
};

struct ResourceSpec {
  std::string name;
  ResourceClass cls = ResourceClass::kThermalSimple;
  double existing_cap = 0.0;  // MW
  bool can_expand = false;
  bool can_retire = false;
  std::optional<double> max_cap;  // MW ceiling when expandable
  double unit_size = 0.0;         // MW, thermal-uc only
  double capex_power = 0.0;       // $/kW
  double capex_energy = 0.0;      // $/kWh, storage only
  double fom_power = 0.0;         // $/kW-yr
  double fom_energy = 0.0;        // $/kWh-yr, storage only
  double vom = 0.0;               // $/MWh
  double heat_rate = 0.0;         // MMBtu/MWh
  double fuel_price = 0.0;        // $/MMBtu
  double emission_factor = 0.0;   // tCO2/MMBtu
  double capture_rate = 0.0;      // fraction of CO2 captured
  bool ces_qualifying = false;
  double ptc = 0.0;               // $/MWh
  double itc_fraction = 0.0;      // fraction of capex
  std::optional<double> lifetime_years;
  std::optional<StorageParams> storage;  // iff cls == kStorage
  std::optional<FlexParams> flex;        // iff cls == kThermalUc

  bool operator==(const ResourceSpec&) const = default;
};

struct SystemSpec {
  int horizon_hours = 0;
  std::vector<double> demand;  // MW per hour
  std::vector<ResourceSpec> resources;
  std::map<std::string, std::vector<double>> vre_profiles;
  double nse_penalty = 9000.0;  // $/MWh
  // Hours of the year represented by each modelled hour; 8760/T when unset.
  std::optional<double> hour_weight;

  double weight() const;
  int find_resource(const std::string& name) const;  // -1 if absent
  const ResourceSpec& resource(const std::string& name) const;

  bool operator==(const SystemSpec&) const = default;
};

enum class CesBasis { kDemand, kGeneration };

struct PolicyEnv {
  std::string name = "base";
  double carbon_tax = 0.0;                   // $/t emitted
  double ces_fraction = 0.0;                 // share of annual demand
  double capture_credit = 0.0;               // $/t captured
  double co2_transport_storage_cost = 10.0;  // $/t captured
  bool nuclear_no_retire = false;
  CesBasis ces_basis = CesBasis::kDemand;
  bool credit_startup_capture = true;

  bool operator==(const PolicyEnv&) const = default;
};

struct FinanceParams {
  double wacc = 0.065;
  std::map<std::string, double> lifetime_overrides;  // resource -> years

  double lifetime(const ResourceSpec& r) const;

  bool operator==(const FinanceParams&) const = default;
};

struct ValidationIssue {
  std::string where;
  std::string message;
};
using ValidationReport = std::vector<ValidationIssue>;

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(ValidationReport report);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

ValidationReport validate_system(const SystemSpec& spec);
ValidationReport validate_policy(const PolicyEnv& policy);
ValidationReport validate_finance(const FinanceParams& finance);

// Default economic life by class: 15 years for storage, 30 otherwise.
double default_lifetime(ResourceClass cls);

// Capital recovery of an overnight cost net of the investment tax credit.
// Returns the same unit per year; domain_error if lifetime < 1 or wacc <= 0.
double annualize_capex(double capex, double wacc, double lifetime,
                       double itc_fraction);

double capture_intensity(const ResourceSpec& r);   // tCO2 captured per MWh
double emission_intensity(const ResourceSpec& r);  // tCO2 emitted per MWh

// Variable cost of one MWh under the policy, including carbon tax on
// emitted CO2, transport and storage net of the capture credit, and the PTC.
double effective_marginal_cost(const ResourceSpec& r, const PolicyEnv& pol);

// Cost of one start per MW of unit size: fixed charge, startup fuel and the
// policy terms on the startup fuel's CO2.
double startup_cost_per_mw(const ResourceSpec& r, const FlexParams& flex,
                           const PolicyEnv& pol);

}  // namespace flexccs
