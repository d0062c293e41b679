#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "flexccs/domain.hpp"
#include "flexccs/solver.hpp"
#include "flexccs/workflow.hpp"

namespace flexccs {

namespace fs = std::filesystem;

// Input directory layout.
inline constexpr const char* kDemandFile = "demand.csv";
inline constexpr const char* kProfilesFile = "profiles.csv";
inline constexpr const char* kResourcesFile = "resources.csv";
inline constexpr const char* kScenarioFile = "scenario.json";

struct InputIssue {
  std::string file;
  int line = 0;  // 1-based; 0 when the issue is not tied to a line
  std::string message;
};

std::string to_string(const InputIssue& issue);

class InputError : public std::runtime_error {
 public:
  explicit InputError(std::vector<InputIssue> issues);
  const std::vector<InputIssue>& issues() const { return issues_; }

 private:
  std::vector<InputIssue> issues_;
};

// Everything in scenario.json apart from system-level settings.
struct RunConfig {
  std::vector<PolicyEnv> policies;
  StudyPlant plant;
  FlexBounds bounds;
  FinanceParams finance;
  SolverOptions solver;
  std::vector<FlexCombo> combos = all_combos();
  int workers = 1;
  bool stage_c_fixed_others = false;

  bool operator==(const RunConfig&) const = default;
};

struct InputBundle {
  SystemSpec system;
  RunConfig config;
  std::string hash;  // SHA-256 over the four input files
};

// Reads and validates an input directory. Throws InputError listing every
// problem found, each with its file and line.
InputBundle load_inputs(const fs::path& dir);
// Writes the four input files; load_inputs of the result reproduces the
// system and configuration.
void write_inputs(const SystemSpec& system, const RunConfig& config, const fs::path& dir);

StagePlan make_plan(const InputBundle& inputs, Stage stage);

std::string sha256_hex(std::string_view data);

// Locale-independent fixed-point text; never prints "-0.0".
std::string format_fixed(double v, int decimals);

// Stage-A capacities as JSON.
void write_capacities(const std::vector<CapacitySet>& caps, const fs::path& file);
std::vector<CapacitySet> read_capacities(const fs::path& file);

// Result files written by emit_report.
inline constexpr const char* kSweepFile = "sweep.json";
inline constexpr const char* kManifestFile = "manifest.json";

// Writes tables, traces, the full sweep and a manifest into dir. Returns the
// written paths in a fixed order. Tables are deterministic for a given
// report; only the manifest carries timestamps.
std::vector<fs::path> emit_report(const SweepReport& report, const fs::path& dir);
// Reads sweep.json back from a results directory.
SweepReport read_report(const fs::path& dir);

// Command-line entry point. Exit codes: 0 success, 1 input or usage error,
// 2 solver failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace flexccs
