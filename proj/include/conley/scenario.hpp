#pragma once

#include <optional>

#include "conley/catalog.hpp"
#include "conley/report.hpp"

namespace conley {

// Declarative scenario. Systems are either catalog names or inline models
// with polynomial nonlinearities; everything needed to reproduce a run is in
// the config plus the seed.
struct ScenarioConfig {
  std::string task;  // index | morse | compare | continue | ecoh | suite
  std::string system_name;                      // catalog name, when not inline
  std::optional<SplitModel> inline_model;       // inline definition
  std::vector<Polynomial> inline_k;             // field components (kind: field)
  std::optional<Polynomial> inline_b;           // gradient data (kind: gradient)
  bool inline_is_gradient = false;
  std::string homotopy;      // catalog homotopy for task continue
  std::string reineck_target;  // catalog gradient name for task continue
  std::optional<GridBox> neighborhood;
  std::optional<double> T;
  std::optional<double> step;
  int sphere_p = 1;          // task ecoh
  std::uint64_t seed = 0;
  int threads = 0;
  double perturb = 0;        // random linear term magnitude for gradients
  bool csv = false;
  bool dump_cells = false;
  std::string output_dir;    // where table/snapshot files go; empty = none

  std::string canonical_string() const;  // hashed into provenance
};

// Parses and validates the JSON config text. Error messages name the field.
ScenarioConfig parse_config(const std::string& json_text);

struct ResolvedScenario {
  LSField field;
  std::optional<GradientSpec> gradient;
  GridBox box;
  double T = 2;
  SampleScheme scheme;
};

ResolvedScenario resolve_system(const ScenarioConfig& cfg);

RunReport run_scenario(const ScenarioConfig& cfg);

// Writes the report (and optional CSV / cell snapshots) under the config's
// output directory. Returns the list of files written.
std::vector<std::string> emit_tables(const RunReport& report, const ScenarioConfig& cfg);

}  // namespace conley
