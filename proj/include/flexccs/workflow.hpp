#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "flexccs/accounting.hpp"
#include "flexccs/domain.hpp"
#include "flexccs/model.hpp"
#include "flexccs/solver.hpp"

namespace flexccs {

// Bit k set means lever P(k+1) takes its flexible value:
// P1 startup cost, P2 min load, P3 ramp, P4 min down, P5 min up.
using FlexCombo = std::uint8_t;
inline constexpr int kNumLevers = 5;
inline constexpr FlexCombo kNoLevers = 0;
inline constexpr FlexCombo kAllLevers = 0x1f;

struct FlexBounds {
  FlexParams inflexible = FlexParams::inflexible();
  FlexParams flexible = FlexParams::flexible();

  bool operator==(const FlexBounds&) const = default;
};

FlexParams flex_combo(FlexCombo combo, const FlexBounds& bounds = {});
// Accepts "None", "P1+P3", "all"; throws std::invalid_argument otherwise.
FlexCombo parse_combo(const std::string& text);
std::string combo_label(FlexCombo combo);  // "None", "P1+P3", ...
int combo_size(FlexCombo combo);
bool is_subset(FlexCombo a, FlexCombo b);

// All 32 combos ordered by size, then lexicographically by lever.
std::vector<FlexCombo> all_combos();
// None plus the five single levers.
std::vector<FlexCombo> single_combos();

// Column headers of the supplementary tables: None, the five singles, the
// pairs, triples and the quad drawn from P1..P4. The cell at (row Pk,
// column C) holds C plus Pk and is defined when k exceeds every lever in C.
std::vector<FlexCombo> table_columns();
std::optional<FlexCombo> table_cell(FlexCombo column, int lever);

enum class Stage { kA, kB, kC };
const char* to_string(Stage stage);
Stage parse_stage(const std::string& text);

struct StudyPlant {
  std::string resource = "ccgt_ccs";
  double capacity_mw = 500.0;

  bool operator==(const StudyPlant&) const = default;
};

struct StagePlan {
  Stage stage = Stage::kB;
  std::vector<PolicyEnv> policies;
  std::vector<FlexCombo> combos = all_combos();
  StudyPlant plant;
  FlexBounds bounds;
  FinanceParams finance;
  SolverOptions solver;
  int workers = 1;
  // Stage C holds the stage-A capacities of other resources fixed.
  bool stage_c_fixed_others = false;
  std::string input_hash;
};

struct CapacitySet {
  std::string policy;
  std::map<std::string, double> power;   // MW
  std::map<std::string, double> energy;  // MWh, storage only
  double tsc = 0.0;
};

struct SweepCell {
  std::string policy;
  FlexCombo combo = kNoLevers;
  Metrics metrics;
  ProfitStatement profit;
  double plant_capacity_mw = 0.0;
  double renewable_capacity_mw = 0.0;
  TotalSystemCost tsc;
  double objective = 0.0;
  double best_bound = 0.0;
  double plant_marginal_cost = 0.0;
  std::vector<double> prices;        // $/MWh
  std::vector<double> plant_output;  // MW
  SolverStats stats;
};

struct Provenance {
  std::string input_hash;
  SolverOptions solver;
  std::string started_at;
  std::string finished_at;
};

struct SweepReport {
  Stage stage = Stage::kB;
  std::string plant;
  std::vector<std::string> policies;
  std::vector<FlexCombo> combos;
  std::vector<SweepCell> cells;  // ordered by (policy, combo) as planned
  std::vector<CapacitySet> stage_a;
  Provenance provenance;

  const SweepCell& cell(const std::string& policy, FlexCombo combo) const;
};

class WorkflowError : public std::runtime_error {
 public:
  WorkflowError(std::string scenario, const std::string& what)
      : std::runtime_error(scenario + ": " + what), scenario_(std::move(scenario)) {}
  const std::string& scenario() const { return scenario_; }

 private:
  std::string scenario_;
};

// System as seen in each stage.
SystemSpec without_resource(const SystemSpec& spec, const std::string& name);
SystemSpec with_fixed_plant(const SystemSpec& spec, const StudyPlant& plant, const FlexParams& flex);
SystemSpec with_expandable_plant(const SystemSpec& spec, const StudyPlant& plant,
                                 const FlexParams& flex);
SystemSpec with_frozen_capacities(const SystemSpec& spec, const CapacitySet& caps,
                                  const std::string& except);

std::vector<CapacitySet> run_stage_a(const SystemSpec& spec, const StagePlan& plan);
SweepReport run_stage_b(const SystemSpec& spec, const std::vector<CapacitySet>& capacities,
                        const StagePlan& plan);
SweepReport run_stage_c(const SystemSpec& spec, const StagePlan& plan,
                        const std::vector<CapacitySet>& capacities = {});

// Current UTC time as ISO 8601 text.
std::string utc_timestamp();

// Runs jobs 0..n-1 on up to `workers` threads. Exceptions are rethrown in
// job order after all workers finish.
void run_parallel(int n, int workers, const std::function<void(int)>& job);

}  // namespace flexccs
