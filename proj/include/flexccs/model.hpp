#pragma once

#include <map>
#include <string>
#include <vector>

#include "flexccs/domain.hpp"
#include "flexccs/problem.hpp"

namespace flexccs {

enum class VarKind {
  kCap,           // cap(g): MW, every non-uc resource
  kUnits,         // units(g): unit count, thermal-uc (CAP = units * unit_size)
  kNewCap,        // newcap(g): MW built, only when a resource may expand and retire
  kEnergyCap,     // ecap(g): MWh, storage
  kNewEnergyCap,  // newecap(g): MWh built, storage that may expand and retire
  kPower,         // vP(g,t)
  kCommit,        // commit(g,t)
  kStart,         // start(g,t)
  kShut,          // shut(g,t)
  kCharge,        // charge(g,t)
  kDischarge,     // discharge(g,t)
  kSoc,           // soc(g,t)
  kNse,           // nse(t)
};
constexpr int kNumVarKinds = 13;

const char* to_string(VarKind kind);

struct VarKey {
  VarKind kind;
  int resource;  // -1 for system-level variables
  int hour;      // 0-based, -1 for static variables
  bool operator==(const VarKey&) const = default;
};

// Two-way map between (kind, resource, hour) and column ids.
class VariableIndex {
 public:
  VariableIndex() = default;
  VariableIndex(int num_resources, int horizon);

  void add(VarKey key, int col);
  int find(VarKind kind, int resource, int hour = -1) const;  // -1 if absent
  int at(VarKind kind, int resource, int hour = -1) const;    // throws if absent
  const VarKey& key(int col) const { return keys_.at(col); }
  int size() const { return static_cast<int>(keys_.size()); }
  int extent(VarKind kind) const { return extent_[static_cast<int>(kind)]; }
  int horizon() const { return horizon_; }

 private:
  size_t slot(VarKind kind, int resource, int hour) const;

  int resources_ = 0;
  int horizon_ = 0;
  std::vector<int> slots_;
  std::vector<VarKey> keys_;
  int extent_[kNumVarKinds] = {};
};

struct BuildMode {
  enum class Kind { kExpansion, kDispatchFixed };
  Kind kind = Kind::kExpansion;
  std::map<std::string, double> fixed_capacity;  // MW per resource
  std::map<std::string, double> fixed_energy;    // MWh per storage resource

  static BuildMode expansion() { return {}; }
  static BuildMode dispatch(std::map<std::string, double> capacity,
                            std::map<std::string, double> energy = {}) {
    return {Kind::kDispatchFixed, std::move(capacity), std::move(energy)};
  }
};

struct Model {
  Problem problem;
  VariableIndex index;
  std::vector<int> balance_rows;  // one per hour
  int ces_row = -1;
};

// Expansion ceiling in MW. Unit-committed resources without an explicit
// max_cap may grow by enough whole units to cover peak demand.
double capacity_ceiling(const ResourceSpec& r, const SystemSpec& spec);

// Throws ValidationError for malformed inputs, std::invalid_argument for a
// dispatch mode missing capacities, std::domain_error if a minimum up or
// down time exceeds the horizon.
Model build_model(const SystemSpec& spec, const PolicyEnv& pol, const FinanceParams& fin,
                  const BuildMode& mode);

// Same model with one unit-committed resource given other flexibility.
Model fix_plant_flex(const SystemSpec& spec, const PolicyEnv& pol, const FinanceParams& fin,
                     const BuildMode& mode, const std::string& plant, const FlexParams& flex);

// Circular window of hours {t-d+1, ..., t}, 1-based.
struct UcWindow {
  int anchor;
  std::vector<int> members;
};
std::vector<UcWindow> uc_windows(int duration, int horizon);

struct UcWindowRows {
  std::vector<UcWindow> up;
  std::vector<UcWindow> down;
};
UcWindowRows uc_window_rows(int min_up, int min_down, int horizon);

// Installed capacities read back from a solution vector.
double capacity_mw(const Model& model, const SystemSpec& spec, int resource,
                   const std::vector<double>& x);
double energy_capacity_mwh(const Model& model, int resource, const std::vector<double>& x);

// Value of a per-hour variable, 0 when the model has no such column.
double value_at(const Model& model, const std::vector<double>& x, VarKind kind, int resource,
                int hour);

}  // namespace flexccs
