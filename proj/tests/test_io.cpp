#include <doctest.h>

#include <fstream>
#include <sstream>
#include <unistd.h>

#include "flexccs/io.hpp"

using namespace flexccs;

namespace {

const fs::path kToy = "examples/texas-toy";

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("flexccs-test-" + tag + "-" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  f << text;
}

fs::path copy_toy(const TempDir& d) {
  const fs::path out = d.path / "in";
  fs::create_directories(out);
  for (const char* f : {kDemandFile, kProfilesFile, kResourcesFile, kScenarioFile})
    fs::copy_file(kToy / f, out / f);
  return out;
}

std::vector<InputIssue> issues_of(const fs::path& dir) {
  try {
    load_inputs(dir);
  } catch (const InputError& e) {
    return e.issues();
  }
  return {};
}

int cli(std::vector<std::string> args, std::string* out_text = nullptr) {
  args.insert(args.begin(), "flexccs");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int rc = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  if (out_text) *out_text = out.str() + err.str();
  return rc;
}

std::map<std::string, std::string> tree(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) files[fs::relative(e.path(), dir).generic_string()] = slurp(e.path());
  return files;
}

}  // namespace

TEST_CASE("bundled toy loads") {
  InputBundle in = load_inputs(kToy);
  CHECK(in.system.horizon_hours == 48);
  CHECK(in.system.resources.size() == 10);
  CHECK(in.system.resource("ccgt_ccs").capex_power == 2310);
  CHECK(in.system.resource("ccgt_ccs").capture_rate == doctest::Approx(0.9));
  CHECK(in.config.plant.resource == "ccgt_ccs");
  CHECK(in.config.plant.capacity_mw == 500);
  REQUIRE(in.config.policies.size() == 2);
  CHECK(in.config.policies[0].carbon_tax == 200);
  CHECK(in.config.policies[1].ces_fraction == doctest::Approx(0.9));
  CHECK(in.config.combos.size() == 32);
  CHECK(in.hash.size() == 64);
  CHECK(load_inputs(kToy).hash == in.hash);
}

TEST_CASE("write then load reproduces system and configuration") {
  InputBundle in = load_inputs(kToy);
  TempDir d("roundtrip");
  write_inputs(in.system, in.config, d.path);
  InputBundle back = load_inputs(d.path);
  CHECK(back.system == in.system);
  CHECK(back.config == in.config);
}

TEST_CASE("input hash follows file content") {
  TempDir d("hash");
  const fs::path dir = copy_toy(d);
  const std::string h0 = load_inputs(dir).hash;
  std::string demand = slurp(dir / kDemandFile);
  demand.replace(demand.find("\n1,") + 1, 0, "# note\n");
  spit(dir / kDemandFile, demand);
  CHECK(load_inputs(dir).hash != h0);
}

TEST_CASE("profile row naming an unknown resource is reported with its line") {
  TempDir d("unknown");
  const fs::path dir = copy_toy(d);
  std::string text = slurp(dir / kProfilesFile);
  const int lines = static_cast<int>(std::count(text.begin(), text.end(), '\n'));
  text += "3,geothermal,0.5\n";
  spit(dir / kProfilesFile, text);
  auto issues = issues_of(dir);
  REQUIRE(issues.size() == 1);
  CHECK(issues[0].file == kProfilesFile);
  CHECK(issues[0].line == lines + 1);
  CHECK(issues[0].message.find("geothermal") != std::string::npos);
}

TEST_CASE("gap in demand hours is reported") {
  TempDir d("gap");
  const fs::path dir = copy_toy(d);
  std::string text = slurp(dir / kDemandFile);
  const size_t at = text.find("\n5,");
  text.erase(at + 1, text.find('\n', at + 1) - at);
  spit(dir / kDemandFile, text);
  auto issues = issues_of(dir);
  REQUIRE_FALSE(issues.empty());
  CHECK(issues[0].file == kDemandFile);
  CHECK(issues[0].message.find("hour 5 is missing") != std::string::npos);
}

TEST_CASE("every problem is listed, not just the first") {
  TempDir d("many");
  const fs::path dir = copy_toy(d);
  std::string res = slurp(dir / kResourcesFile);
  res.replace(res.find("2310"), 4, "23x0");
  spit(dir / kResourcesFile, res);
  std::string sc = slurp(dir / kScenarioFile);
  sc.replace(sc.find("\"finance\""), 9, "\"financ\"");
  spit(dir / kScenarioFile, sc);
  auto issues = issues_of(dir);
  bool bad_number = false, bad_key = false;
  for (const InputIssue& i : issues) {
    if (i.file == kResourcesFile && i.line == 6 && i.message.find("23x0") != std::string::npos)
      bad_number = true;
    if (i.file == kScenarioFile && i.message.find("financ") != std::string::npos) bad_key = true;
  }
  CHECK(bad_number);
  CHECK(bad_key);
}

TEST_CASE("malformed json points at a line") {
  TempDir d("json");
  const fs::path dir = copy_toy(d);
  spit(dir / kScenarioFile, "{\n  \"system\": {\n    \"hour_weight\": ,\n  }\n}\n");
  auto issues = issues_of(dir);
  REQUIRE(issues.size() == 1);
  CHECK(issues[0].file == kScenarioFile);
  CHECK(issues[0].line == 3);
}

TEST_CASE("missing directory") {
  auto issues = issues_of("no/such/dir");
  REQUIRE(issues.size() == 1);
  CHECK(issues[0].message == "input directory not found");
}

TEST_CASE("fixed formatting") {
  CHECK(format_fixed(-0.04, 1) == "0.0");
  CHECK(format_fixed(-0.06, 1) == "-0.1");
  CHECK(format_fixed(12.25, 1) == "12.2");
  CHECK(format_fixed(1e6, 0) == "1000000");
  CHECK(sha256_hex("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("capacities round trip") {
  TempDir d("caps");
  std::vector<CapacitySet> caps = {
      {"tax", {{"ct", 297.93348837209}, {"battery", 300}}, {{"battery", 1529.4}}, 1.5e9},
      {"ces", {{"ct", 0}, {"battery", 0}}, {{"battery", 0}}, 8e8}};
  write_capacities(caps, d.path / "capacities.json");
  auto back = read_capacities(d.path / "capacities.json");
  REQUIRE(back.size() == 2);
  CHECK(back[0].policy == "tax");
  CHECK(back[0].power == caps[0].power);
  CHECK(back[0].energy == caps[0].energy);
  CHECK(back[1].tsc == caps[1].tsc);
}

TEST_CASE("report files are deterministic and survive a reload") {
  InputBundle in = load_inputs(kToy);
  in.config.policies.resize(1);
  in.config.combos = {parse_combo("P2")};
  StagePlan plan = make_plan(in, Stage::kB);
  auto caps = run_stage_a(in.system, plan);
  SweepReport rep = run_stage_b(in.system, caps, plan);
  REQUIRE(rep.cells.size() == 2);

  TempDir d1("emit1"), d2("emit2"), d3("emit3");
  auto files = emit_report(rep, d1.path);
  emit_report(rep, d2.path);
  auto t1 = tree(d1.path);
  auto t2 = tree(d2.path);
  for (const fs::path& f : files) CHECK(fs::exists(f));
  CHECK(t1.count("delta_profit.csv"));
  CHECK(t1.count("traces/tax200/P2.csv"));
  CHECK(t1.count("capacities.json"));
  t1.erase(kManifestFile);
  t2.erase(kManifestFile);
  CHECK(t1 == t2);

  const std::string table = t1.at("delta_profit.csv");
  CHECK(table.rfind("policy,lever,None,P1,P2", 0) == 0);
  CHECK(table.find("tax200,P2,") != std::string::npos);

  SweepReport back = read_report(d1.path);
  CHECK(back.cells.size() == rep.cells.size());
  CHECK(back.provenance.input_hash == rep.provenance.input_hash);
  emit_report(back, d3.path);
  auto t3 = tree(d3.path);
  t3.erase(kManifestFile);
  CHECK(t3 == t1);

  const std::string manifest = slurp(d1.path / kManifestFile);
  CHECK(manifest.find(in.hash) != std::string::npos);
  CHECK(manifest.find("\"delta_profit.csv\"") != std::string::npos);
}

TEST_CASE("empty sweep writes headers only") {
  SweepReport rep;
  rep.stage = Stage::kC;
  rep.plant = "ccgt_ccs";
  TempDir d("empty");
  emit_report(rep, d.path);
  const std::string cap = slurp(d.path / "delta_capacity.csv");
  CHECK(std::count(cap.begin(), cap.end(), '\n') == 1);
  CHECK(fs::exists(d.path / kManifestFile));
  CHECK(read_report(d.path).cells.empty());
}

TEST_CASE("command line exit codes") {
  std::string text;
  CHECK(cli({"validate", kToy.string()}, &text) == 0);
  CHECK(text.rfind("ok: 10 resources, 48 hours, 2 policies", 0) == 0);
  CHECK(cli({"validate", "no/such/dir"}, &text) == 1);
  CHECK(text.find("input directory not found") != std::string::npos);
  CHECK(cli({"validate", kToy.string(), "--bogus"}) == 1);
  CHECK(cli({}) == 1);
  CHECK(cli({"--help"}) == 0);
  CHECK(cli({"sweep", kToy.string(), "--stage", "q"}, &text) == 1);
  CHECK(cli({"sweep", kToy.string(), "--stage", "b", "--combos", "P7"}, &text) == 1);
  CHECK(cli({"dispatch", kToy.string(), "--flex", "P1+P2"}, &text) == 1);  // --fixed-caps required
  CHECK(cli({"sweep", kToy.string(), "--stage", "a", "--policy", "nope"}, &text) == 1);
  CHECK(text.find("nope") != std::string::npos);
}

TEST_CASE("command line dispatch writes tables") {
  TempDir d("cli");
  const std::string out = (d.path / "a").string();
  std::string text;
  REQUIRE(cli({"expand", kToy.string(), "--no-ccs", "--policy", "tax200", "--out", out}, &text) == 0);
  const fs::path caps = d.path / "a" / "capacities.json";
  REQUIRE(fs::exists(caps));
  const std::string out_b = (d.path / "b").string();
  REQUIRE(cli({"dispatch", kToy.string(), "--fixed-caps", caps.string(), "--flex", "P1+P2",
               "--policy", "tax200", "--out", out_b}, &text) == 0);
  CHECK(text.find("delta_profit.csv") != std::string::npos);
  SweepReport rep = read_report(out_b);
  REQUIRE(rep.cells.size() == 2);
  CHECK(rep.cells[1].combo == parse_combo("P1+P2"));
  CHECK(cli({"report", out_b, "--out", (d.path / "r").string()}) == 0);
  CHECK(slurp(d.path / "r" / "delta_profit.csv") == slurp(d.path / "b" / "delta_profit.csv"));
  // capacities cover only one of the two policies
  CHECK(cli({"dispatch", kToy.string(), "--fixed-caps", caps.string(), "--out", out_b}) == 1);
}
