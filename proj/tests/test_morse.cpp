#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "conley/catalog.hpp"
#include "conley/morse.hpp"

using namespace conley;

namespace {

CatalogSystem doublewell() { return catalog_system("doublewell"); }

GridBox box2(double a, double b, int n) {
  GridBox g;
  g.lower = {a, a};
  g.upper = {b, b};
  g.subdivisions = {n, n};
  return g;
}

const CriticalPoint* find_at(const std::vector<CriticalPoint>& cps, const Vec& x) {
  for (const auto& cp : cps)
    if (norm(cp.x - x) < 1e-4) return &cp;
  return nullptr;
}

}  // namespace

TEST_CASE("critical points of the double well") {
  CatalogSystem sys = doublewell();
  std::vector<CriticalPoint> cps = find_critical_points(*sys.gradient, sys.box, 8);
  REQUIRE(cps.size() == 3);
  const CriticalPoint* origin = find_at(cps, {0, 0});
  const CriticalPoint* right = find_at(cps, {1, 0});
  const CriticalPoint* left = find_at(cps, {-1, 0});
  REQUIRE(origin);
  REQUIRE(right);
  REQUIRE(left);
  CHECK(origin->mu_neg == 2);
  CHECK(origin->rel_index == 1);
  CHECK(origin->hess_spectrum[0] == doctest::Approx(-1));
  CHECK(origin->hess_spectrum[1] == doctest::Approx(-1));
  CHECK(right->mu_neg == 1);
  CHECK(right->rel_index == 0);
  CHECK(right->hess_spectrum[0] == doctest::Approx(-1));
  CHECK(right->hess_spectrum[1] == doctest::Approx(2));
  for (const auto& cp : cps) {
    CHECK(cp.nondegenerate);
    CHECK(norm(sys.gradient->gradient(cp.x)) <= 1e-8 * (1 + norm(cp.x)));
  }
}

TEST_CASE("pure quadratic has a single generator at relative index zero") {
  SplitModel m = make_model({1.0, -1.0});
  GradientSpec g = make_gradient(m, nullptr);
  GridBox box = box2(-1, 1, 8);
  std::vector<CriticalPoint> cps = find_critical_points(g, box, 6);
  REQUIRE(cps.size() == 1);
  CHECK(cps[0].mu_neg == 1);
  CHECK(cps[0].rel_index == 0);
}

TEST_CASE("windows without zeros yield no critical points") {
  CatalogSystem sys = doublewell();
  GridBox off = box2(-1.5, 1.5, 8);
  off.lower = {0.2, 0.3};
  off.upper = {0.8, 1.2};
  CHECK(find_critical_points(*sys.gradient, off, 6).empty());
}

TEST_CASE("connection counts of the double well") {
  CatalogSystem sys = doublewell();
  std::vector<CriticalPoint> cps = find_critical_points(*sys.gradient, sys.box, 8);
  const CriticalPoint* origin = find_at(cps, {0, 0});
  const CriticalPoint* right = find_at(cps, {1, 0});
  const CriticalPoint* left = find_at(cps, {-1, 0});
  ShootOptions opts;
  Connection cr = count_connections(*sys.gradient, *origin, *right, sys.box, opts);
  CHECK(cr.count_mod2 == 1);
  CHECK(!cr.witnesses.empty());
  Connection cl = count_connections(*sys.gradient, *origin, *left, sys.box, opts);
  CHECK(cl.count_mod2 == 1);

  CHECK_THROWS_AS(count_connections(*sys.gradient, *right, *left, sys.box, opts), Error);
}

TEST_CASE("connection witnesses stay inside the window") {
  CatalogSystem sys = doublewell();
  std::vector<CriticalPoint> cps = find_critical_points(*sys.gradient, sys.box, 8);
  const CriticalPoint* origin = find_at(cps, {0, 0});
  const CriticalPoint* right = find_at(cps, {1, 0});
  ShootOptions opts;
  Connection c = count_connections(*sys.gradient, *origin, *right, sys.box, opts);
  for (const Trajectory& tr : c.witnesses)
    for (const Vec& p : tr.points) CHECK(sys.box.contains(p));
}

TEST_CASE("boundary operator of the double well") {
  CatalogSystem sys = doublewell();
  ShootOptions opts;
  MorseComplexLocal cx = build_boundary(*sys.gradient, sys.box, opts);
  REQUIRE(cx.generators.size() == 3);
  CHECK(cx.generators_at(0) == 2);
  CHECK(cx.generators_at(1) == 1);
  auto it = cx.boundary.find(1);
  REQUIRE(it != cx.boundary.end());
  CHECK(it->second.rows == 2);
  CHECK(it->second.cols == 1);
  CHECK(it->second.get(0, 0));
  CHECK(it->second.get(1, 0));

  GradedDims h = homology_of_complex(cx);
  CHECK(h.at(0) == 1);
  CHECK(h.dims.size() == 1);
  CHECK(h.offset == -1);
}

TEST_CASE("grading: every counted connection drops the index by one") {
  CatalogSystem sys = doublewell();
  ShootOptions opts;
  MorseComplexLocal cx = build_boundary(*sys.gradient, sys.box, opts);
  for (const Connection& c : cx.connections)
    CHECK(c.source.rel_index == c.target.rel_index + 1);
}

TEST_CASE("single and non-interacting generators") {
  SplitModel m = make_model({1.0, -1.0});
  GradientSpec quad = make_gradient(m, nullptr);
  GridBox box = box2(-1, 1, 8);
  ShootOptions opts;
  GradedDims h = local_morse_homology(quad, box, opts, 6);
  CHECK(h.at(0) == 1);
  CHECK(h.dims.size() == 1);

  // Two wells of a separable quartic in a window that excludes the saddle.
  CatalogSystem sys = doublewell();
  GridBox wells = box2(-1.5, 1.5, 8);
  wells.lower = {0.5, -0.5};
  wells.upper = {1.5, 0.5};
  MorseComplexLocal cx = build_boundary(*sys.gradient, wells, opts, 6);
  CHECK(cx.generators.size() == 1);
  GradedDims hw = homology_of_complex(cx);
  CHECK(hw.at(0) == 1);
}

TEST_CASE("degenerate critical points abort complex construction") {
  // f = x^4/4 has a degenerate zero at the origin.
  SplitModel m = make_model({1.0});
  Polynomial b;
  b.dim = 1;
  PolyTerm t1;
  t1.coeff = 0.25;
  t1.powers = {4};
  PolyTerm t2;
  t2.coeff = -0.5;
  t2.powers = {2};
  b.terms = {t1, t2};  // f = x^4/4 (quadratic part cancelled)
  GradientSpec g = polynomial_gradient(m, b);
  GridBox box;
  box.lower = {-1};
  box.upper = {1};
  box.subdivisions = {16};
  std::vector<CriticalPoint> cps = find_critical_points(g, box, 9);
  REQUIRE(!cps.empty());
  CHECK(!cps[0].nondegenerate);
  ShootOptions opts;
  CHECK_THROWS_AS(build_boundary(g, box, opts), Error);
}

TEST_CASE("gradient pairing stays negative along the flow direction") {
  CatalogSystem sys = doublewell();
  LSField flow = negative_gradient_field(*sys.gradient);
  Rng rng(71);
  int away = 0;
  while (away < 500) {
    Vec x = {rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)};
    Vec g = sys.gradient->euclidean_partials(x);
    if (norm(g) < 1e-3) continue;
    ++away;
    CHECK(dot(g, flow(x)) < 0);
  }
}

TEST_CASE("morse homology equals the shifted index on catalog gradients") {
  SampleScheme scheme;
  ShootOptions opts;
  CatalogSystem dw = doublewell();
  CompareReport c1 = compare_with_e_index(*dw.gradient, dw.box, 3.0, scheme, opts);
  CHECK(c1.equal);
  CHECK(c1.morse.at(0) == 1);

  SplitModel m = make_model({1.0, -1.0});
  GradientSpec saddle = make_gradient(m, nullptr);
  CompareReport c2 = compare_with_e_index(saddle, box2(-1, 1, 64), 2.0, scheme, opts);
  CHECK(c2.equal);
  CHECK(c2.morse.at(0) == 1);

  CatalogSystem sys = doublewell();
  GridBox empty_box = box2(0.2, 0.6, 8);
  CompareReport c3 = compare_with_e_index(*sys.gradient, empty_box, 2.0, scheme, opts, 6);
  CHECK(c3.equal);
  CHECK(!c3.morse.nonzero());
}

TEST_CASE("relative index is invariant under suspension") {
  CatalogSystem sys = doublewell();
  GradientSpec s = suspend_gradient(*sys.gradient);
  GridBox box = suspend_box(sys.box, 8);
  std::vector<CriticalPoint> base = find_critical_points(*sys.gradient, sys.box, 6);
  std::vector<CriticalPoint> susp = find_critical_points(s, box, 6);
  REQUIRE(base.size() == susp.size());
  for (const auto& cp : base) {
    Vec lifted = cp.x;
    lifted.push_back(0.0);
    const CriticalPoint* match = find_at(susp, lifted);
    REQUIRE(match);
    CHECK(match->mu_neg == cp.mu_neg + 1);
    CHECK(match->rel_index == cp.rel_index);
  }
}

TEST_CASE("cutoff shapes") {
  CHECK(omega_cutoff(0.0) == 1.0);
  CHECK(omega_cutoff(1.0 / 3) == 1.0);
  CHECK(omega_cutoff(2.0 / 3) == 0.0);
  CHECK(omega_cutoff(1.0) == 0.0);
  for (double t : {0.4, 0.45, 0.5, 0.55, 0.6})
    CHECK(omega_cutoff_derivative(t) < 0);
  CHECK(omega_cutoff(0.4) > omega_cutoff(0.5));

  for (double mu : {0.0, 0.3, 0.7, 1.0}) CHECK(eta_cutoff(mu) == 0.0);
  CHECK(eta_cutoff_derivative(-0.2) < 0);
  CHECK(eta_cutoff_derivative(1.2) > 0);
  CHECK(std::fabs(eta_cutoff_derivative(-0.6)) > 1.0);
  CHECK(std::fabs(eta_cutoff_derivative(1.6)) > 1.0);
}

namespace {

FastSlowSpec constant_family_1d() {
  SplitModel m = make_model({1.0});
  Polynomial b;
  b.dim = 1;
  PolyTerm t1;
  t1.coeff = 0.25;
  t1.powers = {4};
  PolyTerm t2;
  t2.coeff = -1.0;
  t2.powers = {2};
  b.terms = {t1, t2};  // f = x^4/4 - x^2/2
  GradientSpec g = polynomial_gradient(m, b);
  FastSlowSpec spec;
  spec.family = [g](double) { return g; };
  return spec;
}

GridBox box1(double a, double b, int n) {
  GridBox g;
  g.lower = {a};
  g.upper = {b};
  g.subdivisions = {n};
  return g;
}

}  // namespace

TEST_CASE("fast-slow extension of a constant family") {
  FastSlowSpec spec = constant_family_1d();
  GridBox box = box1(-1.6, 1.6, 16);
  double thr = fastslow_r_threshold(spec, box);
  CHECK(thr > 0);
  spec.r = 2 * thr;
  GradientSpec ext = build_fastslow(spec, box);
  GridBox ebox = fastslow_box(box, 24);
  std::vector<CriticalPoint> cps = find_critical_points(ext, ebox, 9);
  REQUIRE(cps.size() == 6);
  int at0 = 0, at1 = 0;
  for (const auto& cp : cps) {
    double mu = cp.x.back();
    CHECK((mu < 0.05 || mu > 0.95));
    if (std::fabs(mu) < 0.02) ++at0;
    if (std::fabs(mu - 1) < 0.02) ++at1;
  }
  CHECK(at0 == 3);
  CHECK(at1 == 3);

  // Generator bookkeeping: degree q of the extended complex collects the
  // base generators of degree q-1 at level 0 and q at level 1.
  std::map<int, int> ext_count;
  for (const auto& cp : cps) ++ext_count[cp.rel_index];
  std::vector<CriticalPoint> base = find_critical_points(spec.family(0), box, 9);
  std::map<int, int> base_count;
  for (const auto& cp : base) ++base_count[cp.rel_index];
  for (auto& [q, n] : ext_count)
    CHECK(n == base_count[q - 1] + base_count[q]);
}

TEST_CASE("fast-slow slow velocity is positive between the levels") {
  FastSlowSpec spec = constant_family_1d();
  GridBox box = box1(-1.6, 1.6, 16);
  spec.r = 2 * fastslow_r_threshold(spec, box);
  MonotonicityReport rep = fastslow_monotonicity_check(spec, box, 1000);
  CHECK(rep.samples == 1000);
  CHECK(rep.violations == 0);

  // Midpoint velocity has the closed form kappa * r * pi.
  GradientSpec ext = build_fastslow(spec, box);
  LSField flow = negative_gradient_field(ext);
  Vec v = flow({0.3, 0.5});
  CHECK(v.back() == doctest::Approx(spec.kappa * spec.r * 3.14159265358979324));

  FastSlowSpec degenerate = spec;
  degenerate.r = 0;
  MonotonicityReport bad = fastslow_monotonicity_check(degenerate, box, 200);
  CHECK(bad.violations > 0);
}

TEST_CASE("fast-slow refuses sub-threshold wells") {
  FastSlowSpec spec = constant_family_1d();
  GridBox box = box1(-1.6, 1.6, 16);
  spec.r = 0.5 * fastslow_r_threshold(spec, box);
  CHECK_THROWS_AS(build_fastslow(spec, box), HypothesisError);
}

TEST_CASE("gradient flows are their own continuation representatives") {
  SampleScheme scheme;
  ShootOptions opts;
  // Expanding line: f = -x^2/2 under the split model with one negative
  // direction; the flow is its own Lyapunov gradient.
  CatalogSystem sys = catalog_system("expand1d");
  McfReport rep = mcf_homology(sys.field, sys.box, *sys.gradient, 2.0, scheme, opts, 9);
  CHECK(rep.lyapunov_ok);
  CHECK(rep.dims.at(0) == 1);
  CHECK(rep.dims.dims.size() == 1);
  CHECK(rep.dims.offset == -1);
}

TEST_CASE("increasing functions are rejected as Lyapunov data") {
  CatalogSystem sys = catalog_system("expand1d");
  SampleScheme scheme;
  ShootOptions opts;
  // f = +x^2/2 increases along the expanding flow away from 0.
  SplitModel m = make_model({1.0});
  GradientSpec wrong = make_gradient(m, nullptr);
  CHECK_THROWS_AS(mcf_homology(sys.field, sys.box, wrong, 2.0, scheme, opts, 9),
                  HypothesisError);
}
