#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "conley/scenario.hpp"
#include "conley/suite.hpp"

using namespace conley;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int count_cell_lines(const std::string& text) {
  int n = 0;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '#') ++n;
  return n;
}

}  // namespace

TEST_CASE("config parsing and validation") {
  ScenarioConfig cfg = parse_config(R"({
    "task": "index",
    "system": "saddle2d",
    "T": 3.0,
    "step": 0.01,
    "seed": 7
  })");
  CHECK(cfg.task == "index");
  CHECK(cfg.system_name == "saddle2d");
  CHECK(*cfg.T == 3.0);
  CHECK(cfg.seed == 7);

  // Step larger than T/10 names the offending field.
  try {
    parse_config(R"({"task":"index","system":"saddle2d","T":1.0,"step":0.5})");
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("step") != std::string::npos);
  }

  CHECK_THROWS_AS(parse_config(R"({"task":"nonsense"})"), ConfigError);
  CHECK_THROWS_AS(parse_config("not json"), ConfigError);
  CHECK_THROWS_AS(
      parse_config(R"({"task":"index","neighborhood":{"lower":[0],"upper":[1],"subdivisions":[4]}})"),
      ConfigError);  // too few subdivisions
}

TEST_CASE("inline polynomial systems reproduce the catalog") {
  ScenarioConfig cfg = parse_config(R"({
    "task": "compare",
    "system": {
      "dim": 2,
      "spectrum": [1.0, -1.0],
      "kind": "gradient",
      "b": [
        {"coeff": 0.25, "powers": [4, 0]},
        {"coeff": -1.0, "powers": [2, 0]}
      ]
    },
    "neighborhood": {"lower": [-1.5, -1.5], "upper": [1.5, 1.5], "subdivisions": [64, 64]},
    "T": 3.0
  })");
  RunReport rep = run_scenario(cfg);
  bool found_equal = false;
  for (const auto& l : rep.lines)
    if (l.find("EQUAL: {0: 1}") != std::string::npos) found_equal = true;
  CHECK(found_equal);
  CHECK(rep.violations == 0);
}

TEST_CASE("catalog scenarios produce the expected tables") {
  ScenarioConfig cfg;
  cfg.task = "index";
  cfg.system_name = "expand1d";
  RunReport rep = run_scenario(cfg);
  REQUIRE(rep.tables.size() == 2);
  CHECK(rep.tables[0].second.at(1) == 1);
  CHECK(rep.tables[1].second.at(0) == 1);
}

TEST_CASE("csv emission matches the documented shape") {
  GradedDims classical;
  classical.set(1, 1);
  std::string csv = graded_table_csv(classical, "classical (grading k)");
  CHECK(csv == "# classical (grading k)\ndegree,dim\n1,1\n");
  GradedDims empty;
  CHECK(graded_table_csv(empty, "shifted (grading q)") ==
        "# shifted (grading q)\ndegree,dim\n");
}

TEST_CASE("cell snapshots agree with the module outputs") {
  std::string dir = "cli_dump_tmp";
  std::remove((dir + "/N.cells").c_str());
  if (std::system(("mkdir -p " + dir).c_str()) != 0) FAIL("mkdir failed");
  ScenarioConfig cfg;
  cfg.task = "index";
  cfg.system_name = "expand1d";
  cfg.dump_cells = true;
  cfg.output_dir = dir;
  run_scenario(cfg);

  CatalogSystem sys = catalog_system("expand1d");
  SampleScheme scheme;
  IndexPairBuild build = build_index_pair(sys.field, sys.box, sys.T, scheme);
  CubicalSet n_parsed = parse_cells(slurp(dir + "/N.cells"));
  CubicalSet l_parsed = parse_cells(slurp(dir + "/L.cells"));
  CHECK(n_parsed.cells == build.pair.N.cells);
  CHECK(l_parsed.cells == build.pair.L.cells);
  CHECK(count_cell_lines(slurp(dir + "/GT.cells")) == int(build.gt.cells.size()));
  CHECK(count_cell_lines(slurp(dir + "/GammaT.cells")) == int(build.gamma.cells.size()));
}

TEST_CASE("reports are deterministic across runs and thread counts") {
  std::string a = determinism_bundle_text(3, 1);
  std::string b = determinism_bundle_text(3, 1);
  std::string c = determinism_bundle_text(3, 4);
  CHECK(a == b);
  CHECK(b == c);
  CHECK(a.find("task: index") != std::string::npos);
}

TEST_CASE("perturbation flag only applies to gradient systems") {
  ScenarioConfig cfg;
  cfg.task = "index";
  cfg.system_name = "saddle2d";
  cfg.perturb = 1e-3;
  CHECK_THROWS_AS(run_scenario(cfg), ConfigError);

  ScenarioConfig ok;
  ok.task = "morse";
  ok.system_name = "doublewell";
  ok.perturb = 1e-3;
  ok.seed = 5;
  RunReport rep = run_scenario(ok);
  REQUIRE(!rep.tables.empty());
  CHECK(rep.tables[0].second.at(0) == 1);  // table survives a tiny linear tilt
}

TEST_CASE("ecoh task reports the sphere limits") {
  for (int p = 0; p <= 2; ++p) {
    ScenarioConfig cfg;
    cfg.task = "ecoh";
    cfg.sphere_p = p;
    RunReport rep = run_scenario(cfg);
    REQUIRE(!rep.tables.empty());
    CHECK(rep.tables[0].second.at(p - 1) == 1);
  }
}

TEST_CASE("morse task emits boundary matrices and witness orbits") {
  std::string dir = "cli_morse_tmp";
  if (std::system(("mkdir -p " + dir).c_str()) != 0) FAIL("mkdir failed");
  ScenarioConfig cfg;
  cfg.task = "morse";
  cfg.system_name = "doublewell";
  cfg.output_dir = dir;
  RunReport rep = run_scenario(cfg);
  bool has_boundary = false;
  for (const auto& l : rep.lines)
    if (l.find("boundary q=1 (2x1)") != std::string::npos) has_boundary = true;
  CHECK(has_boundary);
  std::string csv = slurp(dir + "/witnesses.csv");
  CHECK(csv.find("orbit,t,x0,x1") == 0);
  CHECK(csv.find("\n0,") != std::string::npos);  // at least one orbit sample
  std::string cps = slurp(dir + "/critical_points.csv");
  CHECK(cps.find("q,f,x0,x1") == 0);
  CHECK(count_cell_lines(cps) == 4);  // header plus three critical points
}
