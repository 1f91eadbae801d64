#include "conley/suite.hpp"

#include <chrono>
#include <cmath>

#include "conley/catalog.hpp"
#include "conley/report.hpp"
#include "conley/scenario.hpp"
#include "conley/suite.hpp"

namespace conley {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

GradedDims table(std::initializer_list<std::pair<int, std::size_t>> entries) {
  GradedDims g;
  for (auto& [q, v] : entries) g.set(q, v);
  return g;
}

CriterionResult saddle_index(int threads) {
  CriterionResult r{"saddle index", false, ""};
  auto t0 = std::chrono::steady_clock::now();
  try {
    CatalogSystem sys = catalog_system("saddle2d");
    SampleScheme scheme;
    scheme.threads = threads;
    IndexPairBuild build = build_index_pair(sys.field, sys.box, 3.0, scheme);
    GradedDims classical = classical_index(build.pair);
    GradedDims shifted = e_index(build.pair, sys.field.model).dims;
    double secs = seconds_since(t0);
    bool tables_ok = classical.same_table(table({{1, 1}})) &&
                     shifted.same_table(table({{0, 1}}));
    r.pass = tables_ok && secs < 10.0;
    r.detail = "classical " + classical.to_string() + " shifted " + shifted.to_string();
  } catch (const std::exception& e) {
    r.detail = e.what();
  }
  return r;
}

CriterionResult gt_geometry(int threads) {
  CriterionResult r{"stay-set geometry and exit time", false, ""};
  try {
    CatalogSystem sys = catalog_system("expand1d");
    SampleScheme scheme;
    scheme.threads = threads;
    const double T = 2.0;
    IndexPairBuild build = build_index_pair(sys.field, sys.box, T, scheme);

    // Stay set within two cells of [-e^-2, e^-2].
    double w = sys.box.width(0);
    double lo = 1e300, hi = -1e300;
    for (const Cube& c : build.gt.full_cells()) {
      Vec clo, chi;
      std::vector<int> idx(c.lo.begin(), c.lo.end());
      sys.box.cell_bounds(idx, clo, chi);
      lo = std::min(lo, clo[0]);
      hi = std::max(hi, chi[0]);
    }
    const double target = std::exp(-T);
    bool gt_ok = std::fabs(hi - target) <= 2 * w && std::fabs(lo + target) <= 2 * w;

    // Exit set sits at the extreme cells of the pair.
    int n_max = -1 << 30, n_min = 1 << 30;
    for (const Cube& c : build.pair.N.full_cells()) {
      n_max = std::max(n_max, c.lo[0]);
      n_min = std::min(n_min, c.lo[0]);
    }
    bool gamma_extremes = false, gamma_only_extremes = true;
    for (const Cube& c : build.pair.L.full_cells()) {
      if (c.lo[0] == n_max || c.lo[0] == n_min)
        gamma_extremes = true;
      else
        gamma_only_extremes = false;
    }

    // Exit time on the coarse pair (whole box, vertex exit set).
    CubicalSet n_all = cubical_from_grid_cells(sys.box, [&] {
      std::vector<std::size_t> all(sys.box.cell_count());
      for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
      return all;
    }());
    CubicalSet l_ends = CubicalSet::from_cells(
        1, {vertex_cube({0}), vertex_cube({sys.box.subdivisions[0]})});
    IndexPairCombinatorial coarse = make_index_pair(sys.box, n_all, l_ends, 1.0);
    double tau = exit_time(sys.field, coarse, {0.5}, 10.0, scheme);
    bool tau_ok = std::fabs(tau - std::log(2.0)) <= 0.01;

    r.pass = gt_ok && gamma_extremes && gamma_only_extremes && tau_ok;
    r.detail = "stay hull [" + format_double(lo) + "," + format_double(hi) +
               "] tau=" + format_double(tau);
  } catch (const std::exception& e) {
    r.detail = e.what();
  }
  return r;
}

CriterionResult morse_equals_index(int threads) {
  CriterionResult r{"double well: Morse homology equals shifted index", false, ""};
  auto t0 = std::chrono::steady_clock::now();
  try {
    CatalogSystem sys = catalog_system("doublewell");
    SampleScheme scheme;
    scheme.threads = threads;
    ShootOptions opts;
    opts.threads = threads;
    MorseComplexLocal cx = build_boundary(*sys.gradient, sys.box, opts);
    GradedDims morse = homology_of_complex(cx);
    bool boundary_ok = false;
    auto it = cx.boundary.find(1);
    if (it != cx.boundary.end() && it->second.rows == 2 && it->second.cols == 1)
      boundary_ok = it->second.get(0, 0) && it->second.get(1, 0);
    IndexPairBuild build =
        build_index_pair(negative_gradient_field(*sys.gradient), sys.box, sys.T, scheme);
    GradedDims shifted = e_index(build.pair, sys.gradient->model).dims;
    double secs = seconds_since(t0);
    r.pass = morse.same_table(table({{0, 1}})) && boundary_ok &&
             morse.same_table(shifted) && secs < 30.0;
    r.detail = "morse " + morse.to_string() + " shifted " + shifted.to_string() +
               (boundary_ok ? " d1=[1,1]^T" : " d1 wrong");
  } catch (const std::exception& e) {
    r.detail = e.what();
  }
  return r;
}

CriterionResult boundary_squares_property(std::uint64_t seed, int threads) {
  CriterionResult r{"randomized boundary operators square to zero", false, ""};
  try {
    int stable = 0;
    for (int run = 0; run < 25; ++run) {
      GridBox box;
      GradientSpec g = random_separable_gradient(seed + std::uint64_t(run), &box);
      ShootOptions opts;
      opts.threads = threads;
      opts.directions = 64;
      MorseComplexLocal a = build_boundary(g, box, opts);  // asserts the square
      ShootOptions doubled = opts;
      doubled.directions = 128;
      MorseComplexLocal b = build_boundary(g, box, doubled);
      bool same = a.boundary.size() == b.boundary.size();
      if (same)
        for (auto& [q, m] : a.boundary)
          if (!(b.boundary.count(q) && b.boundary[q] == m)) same = false;
      if (same) ++stable;
    }
    r.pass = stable == 25;
    r.detail = std::to_string(stable) + "/25 stable under doubled directions";
  } catch (const std::exception& e) {
    r.detail = e.what();
  }
  return r;
}

CriterionResult suspension_invariance(int threads) {
  CriterionResult r{"suspension invariance", false, ""};
  try {
    SampleScheme scheme;
    scheme.threads = threads;
    CatalogSystem saddle = catalog_system("saddle2d");
    GridBox coarse = saddle.box;
    coarse.subdivisions = {32, 32};
    SuspensionReport s1 = suspension_check(saddle.field, coarse, 2.0, scheme, 32);
    CatalogSystem dw = catalog_system("doublewell");
    GridBox dwbox = dw.box;
    dwbox.subdivisions = {48, 48};
    SuspensionReport s2 = suspension_check(dw.field, dwbox, 2.0, scheme, 32);
    r.pass = s1.ok() && s2.ok();
    r.detail = "saddle " + s1.classical_base.to_string() + "->" +
               s1.classical_suspended.to_string() + ", doublewell " +
               s2.classical_base.to_string() + "->" + s2.classical_suspended.to_string();
  } catch (const std::exception& e) {
    r.detail = e.what();
  }
  return r;
}

CriterionResult sphere_dimension_axiom() {
  CriterionResult r{"sphere dimension axiom", false, ""};
  try {
    bool all = true;
    std::string detail;
    for (int p = 0; p <= 2; ++p) {
      EDimensionRecord rec = e_cohomology_limit(sphere_level_family(p));
      GradedDims expected = table({{p - 1, 1}});
      bool ok = rec.limit.same_table(expected);
      all = all && ok;
      detail += "p=" + std::to_string(p) + " limit " + rec.limit.to_string() + " ";
    }
    r.pass = all;
    r.detail = detail;
  } catch (const std::exception& e) {
    r.detail = e.what();
  }
  return r;
}

CriterionResult gronwall_bound(int threads) {
  CriterionResult r{"divergence bound", false, ""};
  try {
    CatalogSystem sys = catalog_system("saddle2d");
    LSField perturbed = bump_perturbed(sys.field, 1e-3);
    SampleScheme scheme;
    scheme.threads = threads;
    GronwallReport rep = gronwall_check(sys.field, perturbed, sys.box, 2.0, 20, scheme);
    r.pass = rep.violations == 0;
    r.detail = "eps=" + format_double(rep.epsilon) + " c=" + format_double(rep.lipschitz) +
               " worst ratio " + format_double(rep.worst_ratio);
  } catch (const std::exception& e) {
    r.detail = e.what();
  }
  return r;
}

CriterionResult nesting_chain(int threads) {
  CriterionResult r{"stay-set nesting chain", false, ""};
  try {
    CatalogSystem sys = catalog_system("saddle2d");
    LSField perturbed = bump_perturbed(sys.field, 1e-3);
    SampleScheme scheme;
    scheme.threads = threads;
    NestingReport rep = g_nesting_check(sys.field, perturbed, sys.box, 1.0, scheme);
    int max_slack = std::max({rep.slack_cells[0], rep.slack_cells[1], rep.slack_cells[2]});
    r.pass = rep.gate_passed && rep.inclusions_hold && max_slack <= 1;
    r.detail = "gap " + format_double(rep.measured_gap) + " rho " + format_double(rep.rho) +
               " slack " + std::to_string(rep.slack_cells[0]) + "/" +
               std::to_string(rep.slack_cells[1]) + "/" +
               std::to_string(rep.slack_cells[2]);
  } catch (const std::exception& e) {
    r.detail = e.what();
  }
  return r;
}

CriterionResult continuation_invariance(int threads) {
  CriterionResult r{"continuation invariance and hypothesis necessity", false, ""};
  try {
    SampleScheme scheme;
    scheme.threads = threads;
    GridBox box;
    HomotopyFamily rotated = catalog_homotopy("rotated-saddle-homotopy", &box);
    ContinuationReport good = verify_isolating_along(rotated, box, 11, 2.0, scheme);
    bool good_ok = good.verdict && good.e_start.same_table(table({{0, 1}}));

    HomotopyFamily breaker = catalog_homotopy("isolation-breaker", &box);
    ContinuationReport bad = verify_isolating_along(breaker, box, 11, 2.0, scheme);
    bool lost = false;
    for (auto flag : bad.isolating)
      if (!flag) lost = true;
    bool bad_ok = lost && !bad.endpoints_equal &&
                  bad.e_start.same_table(table({{0, 1}})) && !bad.e_end.nonzero();

    r.pass = good_ok && bad_ok;
    r.detail = "rotated endpoints " + good.e_start.to_string() + "/" +
               good.e_end.to_string() + "; breaker " + bad.message;
  } catch (const std::exception& e) {
    r.detail = e.what();
  }
  return r;
}

CriterionResult fastslow_construction(int threads) {
  CriterionResult r{"fast-slow construction", false, ""};
  try {
    CatalogSystem dw = catalog_system("doublewell");
    GradientSpec base = *dw.gradient;
    FastSlowSpec spec;
    spec.family = [base](double) { return base; };
    spec.r = 2 * fastslow_r_threshold(spec, dw.box);
    GradientSpec ext = build_fastslow(spec, dw.box);
    GridBox ebox = fastslow_box(dw.box, 24);

    // Exactly one copy of the three base points at each level and nothing
    // else in the extended box.
    std::vector<CriticalPoint> cps = find_critical_points(ext, ebox, 7);
    bool location_ok = cps.size() == 6;
    int at0 = 0, at1 = 0;
    for (const auto& cp : cps) {
      double mu = cp.x.back();
      if (mu >= 0.05 && mu <= 0.95) location_ok = false;
      if (std::fabs(mu) < 0.02) ++at0;
      if (std::fabs(mu - 1) < 0.02) ++at1;
    }
    location_ok = location_ok && at0 == 3 && at1 == 3;

    // Index shift: the slow direction is unstable at mu=0, stable at mu=1.
    int matched = 0;
    bool shift_ok = true;
    for (const auto& c0 : cps) {
      if (std::fabs(c0.x.back()) >= 0.02) continue;
      for (const auto& c1 : cps) {
        if (std::fabs(c1.x.back() - 1) >= 0.02) continue;
        Vec a(c0.x.begin(), c0.x.end() - 1), b(c1.x.begin(), c1.x.end() - 1);
        if (norm(a - b) < 1e-4) {
          ++matched;
          if (c0.mu_neg != c1.mu_neg + 1) shift_ok = false;
        }
      }
    }
    shift_ok = shift_ok && matched == 3;

    MonotonicityReport mono = fastslow_monotonicity_check(spec, dw.box, 1000);
    r.pass = location_ok && shift_ok && mono.violations == 0;
    r.detail = std::to_string(cps.size()) + " critical points, " +
               std::to_string(mono.violations) + " velocity violations";
    (void)threads;
  } catch (const std::exception& e) {
    r.detail = e.what();
  }
  return r;
}

CriterionResult nontriviality_contrapositive(int threads) {
  CriterionResult r{"empty invariant set yields the zero index", false, ""};
  try {
    CatalogSystem sys = catalog_system("expand1d");
    GridBox off;
    off.lower = {0.2};
    off.upper = {1.0};
    off.subdivisions = {64};
    SampleScheme scheme;
    scheme.threads = threads;
    IndexPairBuild build = build_index_pair(sys.field, off, 2.0, scheme);
    GradedDims classical = classical_index(build.pair);
    EIndex e = e_index(build.pair, sys.field.model);
    r.pass = !classical.nonzero() && !nontriviality_check(e);
    r.detail = "classical " + classical.to_string() + " nontrivial " +
               (nontriviality_check(e) ? "yes" : "no");
  } catch (const std::exception& e) {
    r.detail = e.what();
  }
  return r;
}

CriterionResult determinism(std::uint64_t seed) {
  CriterionResult r{"determinism across runs and thread counts", false, ""};
  try {
    std::string a = determinism_bundle_text(seed, 1);
    std::string b = determinism_bundle_text(seed, 1);
    std::string c = determinism_bundle_text(seed, 4);
    r.pass = a == b && b == c;
    r.detail = "bundle hash " + fnv1a_hex(a) + (r.pass ? "" : " mismatch");
  } catch (const std::exception& e) {
    r.detail = e.what();
  }
  return r;
}

}  // namespace

std::string determinism_bundle_text(std::uint64_t seed, int threads) {
  std::string text;
  {
    ScenarioConfig cfg;
    cfg.task = "index";
    cfg.system_name = "saddle2d";
    cfg.seed = seed;
    cfg.threads = threads;
    text += run_scenario(cfg).to_text();
  }
  {
    ScenarioConfig cfg;
    cfg.task = "compare";
    cfg.system_name = "doublewell";
    cfg.seed = seed;
    cfg.threads = threads;
    text += run_scenario(cfg).to_text();
  }
  {
    ScenarioConfig cfg;
    cfg.task = "ecoh";
    cfg.sphere_p = 1;
    cfg.seed = seed;
    cfg.threads = threads;
    text += run_scenario(cfg).to_text();
  }
  return text;
}

std::vector<CriterionResult> run_acceptance(std::uint64_t seed, int threads) {
  std::vector<CriterionResult> out;
  out.push_back(saddle_index(threads));
  out.push_back(gt_geometry(threads));
  out.push_back(morse_equals_index(threads));
  out.push_back(boundary_squares_property(seed, threads));
  out.push_back(suspension_invariance(threads));
  out.push_back(sphere_dimension_axiom());
  out.push_back(gronwall_bound(threads));
  out.push_back(nesting_chain(threads));
  out.push_back(continuation_invariance(threads));
  out.push_back(fastslow_construction(threads));
  out.push_back(nontriviality_contrapositive(threads));
  out.push_back(determinism(seed));
  return out;
}

std::string acceptance_text(const std::vector<CriterionResult>& results) {
  std::string s;
  int i = 1;
  for (const auto& r : results) {
    s += (r.pass ? "PASS" : "FAIL");
    s += " " + std::to_string(i++) + ". " + r.name;
    if (!r.detail.empty()) s += " | " + r.detail;
    s += "\n";
  }
  return s;
}

}  // namespace conley
