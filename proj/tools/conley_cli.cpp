#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "conley/scenario.hpp"
#include "conley/suite.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw conley::ConfigError("cannot read config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct CommonFlags {
  std::string config_path;
  std::string output_dir;
  bool csv = false;
  bool dump_cells = false;
  double perturb = 0;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = 0;
  bool threads_set = false;
};

void add_common(CLI::App* cmd, CommonFlags* flags, bool config_required) {
  auto* opt = cmd->add_option("--config", flags->config_path, "scenario config (JSON)");
  if (config_required) opt->required();
  cmd->add_option("--out", flags->output_dir, "directory for report and snapshot files");
  cmd->add_flag("--csv", flags->csv, "also emit CSV tables");
  cmd->add_flag("--dump-cells", flags->dump_cells, "emit N/L/GT/GammaT cell snapshots");
  cmd->add_option("--perturb", flags->perturb, "random linear term magnitude");
  cmd->add_option("--seed", flags->seed, "seed override")
      ->each([flags](const std::string&) { flags->seed_set = true; });
  cmd->add_option("--threads", flags->threads, "worker threads (0 = hardware)")
      ->each([flags](const std::string&) { flags->threads_set = true; });
}

int run_task(const std::string& task, const CommonFlags& flags) {
  conley::ScenarioConfig cfg;
  if (!flags.config_path.empty()) {
    cfg = conley::parse_config(read_file(flags.config_path));
    if (cfg.task != task)
      throw conley::ConfigError("task: config declares '" + cfg.task +
                                "' but the subcommand is '" + task + "'");
  } else {
    cfg.task = task;
  }
  if (flags.seed_set) cfg.seed = flags.seed;
  if (flags.threads_set) cfg.threads = flags.threads;
  if (flags.csv) cfg.csv = true;
  if (flags.dump_cells) cfg.dump_cells = true;
  if (flags.perturb != 0) cfg.perturb = flags.perturb;
  if (!flags.output_dir.empty()) cfg.output_dir = flags.output_dir;

  conley::RunReport rep = conley::run_scenario(cfg);
  std::fputs(rep.to_text().c_str(), stdout);
  if (cfg.csv && cfg.output_dir.empty()) std::fputs(rep.to_csv().c_str(), stdout);
  conley::emit_tables(rep, cfg);
  std::fprintf(stderr, "elapsed: %.2fs\n", rep.elapsed_seconds);
  return rep.violations == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conley index toolkit for split-model flows"};
  app.require_subcommand(1);

  const std::vector<std::string> tasks = {"index", "morse",    "compare",
                                          "continue", "ecoh", "suite"};
  std::vector<std::pair<std::string, CommonFlags>> bound;
  bound.reserve(tasks.size());
  for (const auto& t : tasks) {
    bound.emplace_back(t, CommonFlags{});
    CLI::App* cmd = app.add_subcommand(
        t, t == "suite" ? "run the full verification battery" : "run the " + t + " task");
    add_common(cmd, &bound.back().second, t != "suite" && t != "ecoh");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    for (auto& [task, flags] : bound)
      if (app.get_subcommand(task)->parsed()) return run_task(task, flags);
    std::fputs("no subcommand\n", stderr);
    return 2;
  } catch (const conley::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const conley::HypothesisError& e) {
    std::fprintf(stderr, "hypothesis failure: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
