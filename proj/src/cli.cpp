#include <CLI11.hpp>

#include <iostream>

#include "flexccs/external.hpp"
#include "flexccs/io.hpp"

namespace flexccs {

namespace {

struct Overrides {
  std::string backend;
  double mip_gap = -1;
  double time_limit = -1;
  int workers = 0;
  std::string policy;
  std::string out = "results";

  void add_to(CLI::App* cmd) {
    cmd->add_option("--backend", backend, "Solver backend: internal, external or oracle");
    cmd->add_option("--mip-gap", mip_gap, "Relative MIP gap");
    cmd->add_option("--time-limit", time_limit, "Solver time limit per solve, seconds");
    cmd->add_option("--workers", workers, "Concurrent scenario cells");
    cmd->add_option("--policy", policy, "Run only the named policy");
    cmd->add_option("--out", out, "Results directory")->capture_default_str();
  }

  void apply(InputBundle& in) const {
    RunConfig& c = in.config;
    if (!backend.empty()) c.solver.backend = parse_backend(backend);
    if (mip_gap >= 0) c.solver.mip_gap = mip_gap;
    if (time_limit > 0) c.solver.time_limit = time_limit;
    if (workers > 0) c.workers = workers;
    if (!policy.empty()) {
      auto it = std::find_if(c.policies.begin(), c.policies.end(),
                             [&](const PolicyEnv& p) { return p.name == policy; });
      if (it == c.policies.end())
        throw InputError({{kScenarioFile, 0, "no policy named '" + policy + "'"}});
      c.policies = {*it};
    }
  }
};

void print_files(std::ostream& out, const std::vector<fs::path>& files) {
  for (const fs::path& f : files) out << f.string() << "\n";
}

SweepReport stage_a_report(const InputBundle& in, const std::vector<CapacitySet>& caps,
                           const std::string& started) {
  SweepReport rep;
  rep.stage = Stage::kA;
  rep.plant = in.config.plant.resource;
  for (const PolicyEnv& p : in.config.policies) rep.policies.push_back(p.name);
  rep.stage_a = caps;
  rep.provenance.input_hash = in.hash;
  rep.provenance.solver = in.config.solver;
  rep.provenance.started_at = started;
  rep.provenance.finished_at = utc_timestamp();
  return rep;
}

std::vector<FlexCombo> parse_combo_list(const std::string& text) {
  if (text == "all") return all_combos();
  std::vector<FlexCombo> out;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t end = std::min(text.find(',', pos), text.size());
    out.push_back(parse_combo(text.substr(pos, end - pos)));
    pos = end + 1;
  }
  return out;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Capacity expansion and unit commitment for valuing CCGT-CCS flexibility"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  std::string input_dir;
  Overrides ov;

  auto* validate = app.add_subcommand("validate", "Check an input directory");
  validate->add_option("dir", input_dir, "Input directory")->required();

  bool no_ccs = false;
  std::string flex = "None";
  auto* expand = app.add_subcommand("expand", "One capacity expansion cell (stage A or C)");
  expand->add_option("dir", input_dir, "Input directory")->required();
  expand->add_flag("--no-ccs", no_ccs, "Leave the study plant out (stage A)");
  expand->add_option("--flex", flex, "Improved parameters, e.g. P1+P2, None or all");
  std::string caps_file;
  expand->add_option("--fixed-caps", caps_file, "Hold other capacities at these stage-A values");
  ov.add_to(expand);

  auto* dispatch = app.add_subcommand("dispatch", "One fixed-capacity dispatch cell (stage B)");
  dispatch->add_option("dir", input_dir, "Input directory")->required();
  dispatch->add_option("--fixed-caps", caps_file, "Stage-A capacities (capacities.json)")->required();
  dispatch->add_option("--flex", flex, "Improved parameters, e.g. P1+P2, None or all");
  ov.add_to(dispatch);

  std::string stage_text;
  std::string combos_text;
  bool fixed_others = false;
  auto* sweep = app.add_subcommand("sweep", "Full policy by combination grid");
  sweep->add_option("dir", input_dir, "Input directory")->required();
  sweep->add_option("--stage", stage_text, "a, b or c")->required();
  sweep->add_option("--fixed-caps", caps_file, "Stage-A capacities; computed when absent");
  sweep->add_option("--combos", combos_text, "Comma-separated combinations or 'all'");
  sweep->add_flag("--fixed-others", fixed_others, "Stage C: hold other capacities at stage-A values");
  ov.add_to(sweep);

  std::string results_dir;
  std::string report_out;
  auto* report = app.add_subcommand("report", "Regenerate tables and traces from sweep.json");
  report->add_option("results", results_dir, "Results directory")->required();
  report->add_option("--out", report_out, "Output directory (default: the results directory)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*report) {
      SweepReport rep = read_report(results_dir);
      print_files(out, emit_report(rep, report_out.empty() ? results_dir : report_out));
      return 0;
    }

    InputBundle in = load_inputs(input_dir);
    if (*validate) {
      out << "ok: " << in.system.resources.size() << " resources, " << in.system.horizon_hours
          << " hours, " << in.config.policies.size() << " policies, input hash " << in.hash << "\n";
      return 0;
    }
    ov.apply(in);

    if (*expand) {
      StagePlan plan = make_plan(in, no_ccs ? Stage::kA : Stage::kC);
      if (no_ccs) {
        const std::string started = utc_timestamp();
        auto caps = run_stage_a(in.system, plan);
        print_files(out, emit_report(stage_a_report(in, caps, started), ov.out));
        return 0;
      }
      plan.combos = {parse_combo(flex)};
      std::vector<CapacitySet> caps;
      if (!caps_file.empty()) {
        caps = read_capacities(caps_file);
        plan.stage_c_fixed_others = true;
      }
      print_files(out, emit_report(run_stage_c(in.system, plan, caps), ov.out));
      return 0;
    }

    if (*dispatch) {
      StagePlan plan = make_plan(in, Stage::kB);
      plan.combos = {parse_combo(flex)};
      auto caps = read_capacities(caps_file);
      print_files(out, emit_report(run_stage_b(in.system, caps, plan), ov.out));
      return 0;
    }

    if (*sweep) {
      const Stage stage = parse_stage(stage_text);
      StagePlan plan = make_plan(in, stage);
      if (!combos_text.empty()) plan.combos = parse_combo_list(combos_text);
      if (fixed_others) plan.stage_c_fixed_others = true;
      const std::string started = utc_timestamp();
      std::vector<CapacitySet> caps;
      if (!caps_file.empty()) caps = read_capacities(caps_file);
      const bool need_a = stage == Stage::kA || (caps.empty() &&
                          (stage == Stage::kB || plan.stage_c_fixed_others));
      if (need_a) caps = run_stage_a(in.system, plan);
      SweepReport rep;
      if (stage == Stage::kA) {
        rep = stage_a_report(in, caps, started);
      } else if (stage == Stage::kB) {
        rep = run_stage_b(in.system, caps, plan);
      } else {
        rep = run_stage_c(in.system, plan, caps);
      }
      print_files(out, emit_report(rep, ov.out));
      return 0;
    }
  } catch (const WorkflowError& e) {
    err << "solver failure: " << e.what() << "\n";
    return 2;
  } catch (const SolverError& e) {
    err << "solver failure: " << e.what() << "\n";
    return 2;
  } catch (const InputError& e) {
    for (const InputIssue& i : e.issues()) err << "error: " << to_string(i) << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace flexccs
