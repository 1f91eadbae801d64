#include "conley/scenario.hpp"

#include <chrono>

#include "conley/suite.hpp"
#include "json.hpp"

namespace conley {

namespace {

using nlohmann::json;

Polynomial parse_polynomial(const json& j, int dim, const std::string& path) {
  Polynomial p;
  p.dim = dim;
  if (!j.is_array()) throw ConfigError(path + ": expected an array of terms");
  for (std::size_t i = 0; i < j.size(); ++i) {
    const json& t = j[i];
    std::string tp = path + "[" + std::to_string(i) + "]";
    if (!t.contains("coeff") || !t.contains("powers"))
      throw ConfigError(tp + ": term needs coeff and powers");
    PolyTerm term;
    term.coeff = t["coeff"].get<double>();
    for (const auto& v : t["powers"]) term.powers.push_back(v.get<int>());
    if (int(term.powers.size()) != dim)
      throw ConfigError(tp + ".powers: expected " + std::to_string(dim) + " entries");
    for (int pw : term.powers)
      if (pw < 0) throw ConfigError(tp + ".powers: negative exponent");
    p.terms.push_back(std::move(term));
  }
  return p;
}

GridBox parse_box(const json& j) {
  GridBox g;
  if (!j.contains("lower") || !j.contains("upper") || !j.contains("subdivisions"))
    throw ConfigError("neighborhood: needs lower, upper, subdivisions");
  for (const auto& v : j["lower"]) g.lower.push_back(v.get<double>());
  for (const auto& v : j["upper"]) g.upper.push_back(v.get<double>());
  for (const auto& v : j["subdivisions"]) g.subdivisions.push_back(v.get<int>());
  g.validate();
  for (int s : g.subdivisions)
    if (s < 8) throw ConfigError("neighborhood.subdivisions: at least 8 per axis");
  return g;
}

}  // namespace

std::string ScenarioConfig::canonical_string() const {
  std::string s = "task=" + task + ";system=" + system_name + ";homotopy=" + homotopy +
                  ";p=" + std::to_string(sphere_p) + ";seed=" + std::to_string(seed);
  if (T) s += ";T=" + format_double(*T);
  if (step) s += ";step=" + format_double(*step);
  if (neighborhood) {
    s += ";box=";
    for (std::size_t i = 0; i < neighborhood->lower.size(); ++i)
      s += format_double(neighborhood->lower[i]) + ":" +
           format_double(neighborhood->upper[i]) + ":" +
           std::to_string(neighborhood->subdivisions[i]) + ",";
  }
  if (perturb != 0) s += ";perturb=" + format_double(perturb);
  return s;
}

ScenarioConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  ScenarioConfig cfg;
  if (!j.contains("task")) throw ConfigError("task: required");
  cfg.task = j["task"].get<std::string>();
  const std::vector<std::string> tasks = {"index", "morse", "compare",
                                          "continue", "ecoh", "suite"};
  if (std::find(tasks.begin(), tasks.end(), cfg.task) == tasks.end())
    throw ConfigError("task: unknown task '" + cfg.task + "'");

  if (j.contains("system")) {
    const json& sys = j["system"];
    if (sys.is_string()) {
      cfg.system_name = sys.get<std::string>();
    } else if (sys.is_object()) {
      if (!sys.contains("dim") || !sys.contains("spectrum"))
        throw ConfigError("system: inline definition needs dim and spectrum");
      int dim = sys["dim"].get<int>();
      std::vector<double> spectrum;
      for (const auto& v : sys["spectrum"]) spectrum.push_back(v.get<double>());
      if (int(spectrum.size()) != dim)
        throw ConfigError("system.spectrum: expected dim entries");
      std::vector<int> levels;
      if (sys.contains("levels"))
        for (const auto& v : sys["levels"]) levels.push_back(v.get<int>());
      try {
        cfg.inline_model = make_model(spectrum, levels);
      } catch (const ConfigError& e) {
        throw ConfigError(std::string("system: ") + e.what());
      }
      std::string kind = sys.value("kind", "field");
      if (kind == "gradient") {
        cfg.inline_is_gradient = true;
        if (!sys.contains("b")) throw ConfigError("system.b: required for gradient systems");
        cfg.inline_b = parse_polynomial(sys["b"], dim, "system.b");
      } else if (kind == "field") {
        if (!sys.contains("k")) throw ConfigError("system.k: required for field systems");
        const json& k = sys["k"];
        if (!k.is_array() || int(k.size()) != dim)
          throw ConfigError("system.k: expected one polynomial per coordinate");
        for (int a = 0; a < dim; ++a)
          cfg.inline_k.push_back(
              parse_polynomial(k[std::size_t(a)], dim, "system.k[" + std::to_string(a) + "]"));
      } else {
        throw ConfigError("system.kind: must be 'field' or 'gradient'");
      }
    } else {
      throw ConfigError("system: expected a name or an inline object");
    }
  }

  if (j.contains("homotopy")) cfg.homotopy = j["homotopy"].get<std::string>();
  if (j.contains("reineck_target")) cfg.reineck_target = j["reineck_target"].get<std::string>();
  if (j.contains("neighborhood")) cfg.neighborhood = parse_box(j["neighborhood"]);
  if (j.contains("T")) cfg.T = j["T"].get<double>();
  if (j.contains("step")) cfg.step = j["step"].get<double>();
  if (j.contains("sphere_p")) cfg.sphere_p = j["sphere_p"].get<int>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("threads")) cfg.threads = j["threads"].get<int>();
  if (j.contains("perturb")) cfg.perturb = j["perturb"].get<double>();
  if (j.contains("csv")) cfg.csv = j["csv"].get<bool>();
  if (j.contains("dump_cells")) cfg.dump_cells = j["dump_cells"].get<bool>();
  if (j.contains("output_dir")) cfg.output_dir = j["output_dir"].get<std::string>();

  if (cfg.T && *cfg.T <= 0) throw ConfigError("T: must be positive");
  if (cfg.step) {
    if (*cfg.step <= 0) throw ConfigError("step: must be positive");
    if (cfg.T && *cfg.step > *cfg.T / 10)
      throw ConfigError("step: must be at most T/10");
  }
  if (cfg.sphere_p < 0 || cfg.sphere_p > 2) throw ConfigError("sphere_p: must be 0, 1 or 2");
  return cfg;
}

ResolvedScenario resolve_system(const ScenarioConfig& cfg) {
  ResolvedScenario r;
  if (cfg.inline_model) {
    if (cfg.inline_is_gradient) {
      r.gradient = polynomial_gradient(*cfg.inline_model, *cfg.inline_b);
      r.field = negative_gradient_field(*r.gradient);
    } else {
      r.field = polynomial_field(*cfg.inline_model, cfg.inline_k);
    }
    if (!cfg.neighborhood)
      throw ConfigError("neighborhood: required for inline systems");
    r.box = *cfg.neighborhood;
    r.T = cfg.T.value_or(2.0);
  } else {
    if (cfg.system_name.empty()) throw ConfigError("system: required for this task");
    CatalogSystem sys = catalog_system(cfg.system_name);
    r.field = sys.field;
    r.gradient = sys.gradient;
    r.box = cfg.neighborhood.value_or(sys.box);
    r.T = cfg.T.value_or(sys.T);
  }
  if (cfg.perturb != 0) {
    if (!r.gradient)
      throw ConfigError("perturb: only gradient systems accept a perturbation");
    // Random linear term of the requested magnitude: the user-visible
    // realization of the density argument.
    Rng rng(cfg.seed ^ 0xabcddcba12344321ull);
    Vec dir(std::size_t(r.gradient->model.dim));
    for (auto& c : dir) c = rng.normal();
    double n = norm(dir);
    for (auto& c : dir) c *= cfg.perturb / (n > 0 ? n : 1.0);
    GradientSpec base = *r.gradient;
    GradientSpec pert = base;
    pert.b = [base, dir](const Vec& x) { return (base.b ? base.b(x) : 0.0) + dot(dir, x); };
    pert.grad_b = [base, dir](const Vec& x) {
      Vec g = base.grad_b ? base.grad_b(x) : Vec(x.size(), 0.0);
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += dir[i];
      return g;
    };
    // Hessian unchanged by a linear term.
    r.gradient = pert;
    r.field = negative_gradient_field(*r.gradient);
  }
  r.scheme.step = cfg.step.value_or(std::min(1e-2, r.T / 100));
  r.scheme.threads = cfg.threads;
  return r;
}

RunReport run_scenario(const ScenarioConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  RunReport rep;
  rep.task = cfg.task;
  rep.provenance = "config:" + fnv1a_hex(cfg.canonical_string()) + " " + catalog_version();

  if (cfg.task == "index") {
    ResolvedScenario r = resolve_system(cfg);
    IndexPairBuild build = build_index_pair_auto(r.field, r.box, cfg.T ? *cfg.T : r.T,
                                                 r.scheme);
    GradedDims classical = classical_index(build.pair);
    EIndex e = e_index(build.pair, r.field.model);
    rep.tables.push_back({"classical (grading k)", classical});
    rep.tables.push_back({"shifted (grading q)", e.dims});
    rep.lines.push_back("T: " + format_double(build.pair.T_used));
    rep.lines.push_back("N cells: " + std::to_string(build.pair.N.full_cells().size()));
    rep.lines.push_back("L cells: " + std::to_string(build.pair.L.full_cells().size()));
    rep.lines.push_back(std::string("nontrivial: ") +
                        (nontriviality_check(e) ? "yes" : "no"));
    if (cfg.dump_cells && !cfg.output_dir.empty()) {
      std::string meta = "grid";
      for (std::size_t i = 0; i < r.box.lower.size(); ++i)
        meta += " " + format_double(r.box.lower[i]) + ":" + format_double(r.box.upper[i]) +
                ":" + std::to_string(r.box.subdivisions[i]);
      write_file(cfg.output_dir + "/N.cells", serialize_cells(build.pair.N, meta));
      write_file(cfg.output_dir + "/L.cells", serialize_cells(build.pair.L, meta));
      write_file(cfg.output_dir + "/GT.cells", serialize_cells(build.gt, meta));
      write_file(cfg.output_dir + "/GammaT.cells", serialize_cells(build.gamma, meta));
    }
  } else if (cfg.task == "morse") {
    ResolvedScenario r = resolve_system(cfg);
    if (!r.gradient) throw ConfigError("system: task morse needs a gradient system");
    ShootOptions opts;
    opts.threads = cfg.threads;
    MorseComplexLocal cx = build_boundary(*r.gradient, r.box, opts);
    rep.tables.push_back({"morse (grading q)", homology_of_complex(cx)});
    rep.lines.push_back("critical points: " + std::to_string(cx.generators.size()));
    for (const auto& cp : cx.generators) {
      std::string line = "crit q=" + std::to_string(cp.rel_index) + " x=(";
      for (std::size_t i = 0; i < cp.x.size(); ++i)
        line += (i ? "," : "") + format_double(cp.x[i]);
      line += ") f=" + format_double(cp.f_value);
      rep.lines.push_back(line);
    }
    for (const auto& [q, m] : cx.boundary) {
      if (m.rows == 0 || m.cols == 0) continue;
      rep.lines.push_back("boundary q=" + std::to_string(q) + " (" +
                          std::to_string(m.rows) + "x" + std::to_string(m.cols) + ")");
      for (std::size_t i = 0; i < m.rows; ++i) {
        std::string row = "  ";
        for (std::size_t j = 0; j < m.cols; ++j) row += m.get(i, j) ? '1' : '0';
        rep.lines.push_back(row);
      }
    }
    if (!cfg.output_dir.empty()) {
      std::string cps = "q,f";
      for (int a = 0; a < r.gradient->model.dim; ++a) cps += ",x" + std::to_string(a);
      cps += "\n";
      for (const auto& cp : cx.generators) {
        cps += std::to_string(cp.rel_index) + "," + format_double(cp.f_value);
        for (double v : cp.x) cps += "," + format_double(v);
        cps += "\n";
      }
      write_file(cfg.output_dir + "/critical_points.csv", cps);

      std::string csv = "orbit,t";
      for (int a = 0; a < r.gradient->model.dim; ++a)
        csv += ",x" + std::to_string(a);
      csv += "\n";
      int orbit = 0;
      for (const Connection& c : cx.connections) {
        for (const Trajectory& tr : c.witnesses) {
          for (std::size_t i = 0; i < tr.points.size(); ++i) {
            csv += std::to_string(orbit) + "," + format_double(tr.times[i]);
            for (double v : tr.points[i]) csv += "," + format_double(v);
            csv += "\n";
          }
          ++orbit;
        }
      }
      write_file(cfg.output_dir + "/witnesses.csv", csv);
    }
  } else if (cfg.task == "compare") {
    ResolvedScenario r = resolve_system(cfg);
    if (!r.gradient) throw ConfigError("system: task compare needs a gradient system");
    ShootOptions opts;
    opts.threads = cfg.threads;
    CompareReport cr = compare_with_e_index(*r.gradient, r.box, r.T, r.scheme, opts);
    rep.tables.push_back({"morse (grading q)", cr.morse});
    rep.tables.push_back({"shifted (grading q)", cr.e_graded});
    rep.lines.push_back(cr.equal ? "EQUAL: " + cr.morse.to_string()
                                 : "DIFFER: " + cr.morse.to_string() + " vs " +
                                       cr.e_graded.to_string());
    if (!cr.equal) rep.violations += 1;
  } else if (cfg.task == "continue") {
    if (!cfg.reineck_target.empty()) {
      ResolvedScenario r = resolve_system(cfg);
      CatalogSystem target = catalog_system(cfg.reineck_target);
      if (!target.gradient)
        throw ConfigError("reineck_target: must name a gradient system");
      LSField grad_flow = negative_gradient_field(*target.gradient);
      HomotopyFamily h = make_linear_homotopy(r.field, grad_flow, r.box);
      ShootOptions opts;
      opts.threads = cfg.threads;
      ReineckReport rr = reineck_verify(r.field, r.box, *target.gradient, h, r.T,
                                        r.scheme, opts);
      rep.tables.push_back({"morse (grading q)", rr.morse});
      rep.tables.push_back({"shifted (grading q)", rr.e_field});
      rep.lines.push_back(rr.tables_equal ? "EQUAL tables" : "tables DIFFER");
      if (!rr.tables_equal) rep.violations += 1;
    } else {
      if (cfg.homotopy.empty()) throw ConfigError("homotopy: required for task continue");
      GridBox box;
      HomotopyFamily h = catalog_homotopy(cfg.homotopy, &box);
      if (cfg.neighborhood) box = *cfg.neighborhood;
      SampleScheme scheme;
      scheme.step = cfg.step.value_or(1e-2);
      scheme.threads = cfg.threads;
      double T = cfg.T.value_or(2.0);
      ContinuationReport cr = verify_isolating_along(h, box, 11, T, scheme);
      rep.tables.push_back({"endpoint start (grading q)", cr.e_start});
      rep.tables.push_back({"endpoint end (grading q)", cr.e_end});
      for (std::size_t i = 0; i < cr.s_samples.size(); ++i)
        rep.lines.push_back(
            "s=" + format_double(cr.s_samples[i]) +
            " isolating=" + (cr.isolating[i] ? "yes" : "no") + " margin=" +
            (cr.margin_cells[i] < 0 ? std::string("-")
                                    : std::to_string(cr.margin_cells[i])));
      rep.lines.push_back(std::string("verdict: ") + (cr.verdict ? "pass" : "fail"));
      if (!cr.message.empty()) rep.lines.push_back("note: " + cr.message);
      if (!cr.verdict) rep.violations += 1;
    }
  } else if (cfg.task == "ecoh") {
    LevelFamily fam = sphere_level_family(cfg.sphere_p);
    EDimensionRecord rec = e_cohomology_limit(fam);
    rep.tables.push_back({"limit (grading q)", rec.limit});
    for (const auto& lvl : rec.levels)
      rep.lines.push_back("level v=" + std::to_string(lvl.v_dim) + " dims " +
                          lvl.cohomology.to_string());
  } else if (cfg.task == "suite") {
    std::vector<CriterionResult> results = run_acceptance(cfg.seed, cfg.threads);
    int fails = 0;
    for (const auto& cr : results) {
      rep.lines.push_back(std::string(cr.pass ? "PASS " : "FAIL ") + cr.name +
                          (cr.detail.empty() ? "" : " | " + cr.detail));
      if (!cr.pass) ++fails;
    }
    rep.violations = fails;
  } else {
    throw ConfigError("task: unknown task '" + cfg.task + "'");
  }

  rep.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

std::vector<std::string> emit_tables(const RunReport& report, const ScenarioConfig& cfg) {
  std::vector<std::string> written;
  if (cfg.output_dir.empty()) return written;
  std::string base = cfg.output_dir + "/report_" + report.task;
  write_file(base + ".txt", report.to_text());
  written.push_back(base + ".txt");
  if (cfg.csv) {
    write_file(base + ".csv", report.to_csv());
    written.push_back(base + ".csv");
  }
  return written;
}

}  // namespace conley
