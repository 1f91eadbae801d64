#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "conley/catalog.hpp"
#include "conley/continuation.hpp"

using namespace conley;

TEST_CASE("closeness budget formula") {
  CHECK(closeness_epsilon(1.0, 2.0, 0.2) ==
        doctest::Approx(0.2 / (4 * std::exp(2.0))));
  CHECK(closeness_epsilon(0.0, 1.0, 2.0) == doctest::Approx(1.0));
  // Monotone in each argument over a grid.
  for (double c : {0.0, 0.5, 1.0})
    for (double T : {0.5, 1.0, 2.0})
      for (double rho : {0.1, 0.2, 0.4}) {
        double base = closeness_epsilon(c, T, rho);
        CHECK(closeness_epsilon(c, T, rho * 2) > base);
        CHECK(closeness_epsilon(c + 0.5, T, rho) < base);
        CHECK(closeness_epsilon(c, T * 2, rho) < base);
      }
  CHECK_THROWS_AS(closeness_epsilon(1.0, 0.0, 1.0), Error);
}

TEST_CASE("identical fields never violate the divergence bound") {
  CatalogSystem sys = catalog_system("saddle2d");
  SampleScheme scheme;
  GronwallReport rep = gronwall_check(sys.field, sys.field, sys.box, 2.0, 10, scheme);
  CHECK(rep.epsilon == 0.0);
  CHECK(rep.violations == 0);
}

TEST_CASE("constant offset divergence follows the variation-of-constants bound") {
  SplitModel m = make_model({1.0, -1.0});
  LSField f0 = make_linear_field(m);
  LSField f1 = f0;
  f1.nonlinearity = [](const Vec&) { return Vec{1e-3, 0.0}; };
  GridBox box;
  box.lower = {-1, -1};
  box.upper = {1, 1};
  box.subdivisions = {16, 16};
  SampleScheme scheme;
  scheme.step = 1e-3;

  // Direct check at t = 1 from the origin.
  Vec a = flow_map(f0, {0, 0}, 1.0, 1e-3);
  Vec b = flow_map(f1, {0, 0}, 1.0, 1e-3);
  double div = norm(a - b);
  CHECK(div == doctest::Approx(1e-3 * std::sqrt(std::pow(std::exp(1.0) - 1, 2) +
                                                std::pow(1 - std::exp(-1.0), 2)))
                   .epsilon(1e-3));
  CHECK(div <= 1e-3 * std::exp(1.0) * 1.05);

  GronwallReport rep = gronwall_check(f0, f1, box, 1.0, 20, scheme);
  CHECK(rep.violations == 0);
  CHECK(rep.worst_ratio <= 1.0);
}

TEST_CASE("bump-perturbed saddle satisfies the bound from twenty starts") {
  CatalogSystem sys = catalog_system("saddle2d");
  LSField perturbed = bump_perturbed(sys.field, 1e-3);
  SampleScheme scheme;
  GronwallReport rep = gronwall_check(sys.field, perturbed, sys.box, 2.0, 20, scheme);
  CHECK(rep.violations == 0);
}

TEST_CASE("rotated saddle family stays isolating with equal endpoint tables") {
  GridBox box;
  HomotopyFamily h = catalog_homotopy("rotated-saddle-homotopy", &box);
  SampleScheme scheme;
  ContinuationReport rep = verify_isolating_along(h, box, 11, 2.0, scheme);
  CHECK(rep.s_samples.size() == 11);
  for (auto flag : rep.isolating) CHECK(flag == 1);
  CHECK(rep.endpoints_equal);
  CHECK(rep.e_start.at(0) == 1);
  CHECK(rep.verdict);
}

TEST_CASE("constant families are trivially isolating") {
  CatalogSystem sys = catalog_system("saddle2d");
  HomotopyFamily h = make_linear_homotopy(sys.field, sys.field, sys.box);
  SampleScheme scheme;
  ContinuationReport rep = verify_isolating_along(h, sys.box, 5, 2.0, scheme);
  CHECK(rep.verdict);
  CHECK(rep.endpoints_equal);
}

TEST_CASE("the breaker family loses isolation midway") {
  GridBox box;
  HomotopyFamily h = catalog_homotopy("isolation-breaker", &box);
  SampleScheme scheme;
  ContinuationReport rep = verify_isolating_along(h, box, 11, 2.0, scheme);
  CHECK(!rep.verdict);
  bool lost = false;
  for (std::size_t i = 0; i < rep.s_samples.size(); ++i)
    if (!rep.isolating[i] && std::fabs(rep.s_samples[i] - 0.5) < 0.2) lost = true;
  CHECK(lost);
  CHECK(!rep.endpoints_equal);
  CHECK(rep.e_start.at(0) == 1);
  CHECK(!rep.e_end.nonzero());
  CHECK(rep.message.find("isolation lost") != std::string::npos);
}

TEST_CASE("verdicts are invariant under reversing the family parameter") {
  GridBox box;
  HomotopyFamily h = catalog_homotopy("isolation-breaker", &box);
  auto fwd = h.field_at;
  HomotopyFamily reversed =
      make_homotopy([fwd](double s) { return fwd(1.0 - s); }, box);
  SampleScheme scheme;
  ContinuationReport a = verify_isolating_along(h, box, 11, 2.0, scheme);
  ContinuationReport b = verify_isolating_along(reversed, box, 11, 2.0, scheme);
  CHECK(a.verdict == b.verdict);
  CHECK(a.endpoints_equal == b.endpoints_equal);
  CHECK(a.e_start.same_table(b.e_end));
  CHECK(a.e_end.same_table(b.e_start));
}

TEST_CASE("nesting chain for identical fields") {
  CatalogSystem sys = catalog_system("saddle2d");
  SampleScheme scheme;
  NestingReport rep = g_nesting_check(sys.field, sys.field, sys.box, 1.0, scheme);
  CHECK(rep.gate_passed);
  CHECK(rep.inclusions_hold);
  CHECK(rep.slack_cells[0] == 0);
  CHECK(rep.slack_cells[1] == 0);
  CHECK(rep.slack_cells[2] == 0);
}

TEST_CASE("nesting chain for the bump-perturbed saddle") {
  CatalogSystem sys = catalog_system("saddle2d");
  LSField perturbed = bump_perturbed(sys.field, 1e-3);
  SampleScheme scheme;
  NestingReport rep = g_nesting_check(sys.field, perturbed, sys.box, 1.0, scheme);
  CHECK(rep.gate_passed);
  CHECK(rep.inclusions_hold);
}

TEST_CASE("far-apart fields fail the closeness gate") {
  CatalogSystem sys = catalog_system("saddle2d");
  LSField far = bump_perturbed(sys.field, 0.8);
  SampleScheme scheme;
  NestingReport rep = g_nesting_check(sys.field, far, sys.box, 1.0, scheme);
  CHECK(!rep.gate_passed);
  CHECK(rep.message.find("hypothesis unmet") != std::string::npos);
}

TEST_CASE("level search on the weakly coupled system") {
  CatalogSystem sys = catalog_system("coupled3d");
  SampleScheme scheme;
  GalerkinReport rep = galerkin_continuation(sys.field, sys.box, sys.T, scheme);
  CHECK(rep.level_dimension == 2);
  CHECK(rep.continuation.verdict);
}

TEST_CASE("already-compressed nonlinearities pass at their support level") {
  SplitModel m = make_model({1.0, -1.0}, {1, 2});
  LSField f = make_linear_field(m);
  f.nonlinearity = [](const Vec& x) { return Vec{-0.5 * std::tanh(x[0]), 0.0}; };
  GridBox box;
  box.lower = {-1, -1};
  box.upper = {1, 1};
  box.subdivisions = {32, 32};
  SampleScheme scheme;
  GalerkinReport rep = galerkin_continuation(f, box, 2.0, scheme);
  CHECK(rep.level_dimension == 1);
}

TEST_CASE("strong coupling beyond the budget exhausts the ladder") {
  CatalogSystem sys = catalog_system("stronglycoupled2d");
  SampleScheme scheme;
  CHECK_THROWS_AS(galerkin_continuation(sys.field, sys.box, sys.T, scheme),
                  HypothesisError);
}

TEST_CASE("gradient fields verify against themselves") {
  CatalogSystem sys = catalog_system("expand1d");
  SampleScheme scheme;
  ShootOptions opts;
  LSField grad_flow = negative_gradient_field(*sys.gradient);
  HomotopyFamily h = make_linear_homotopy(grad_flow, grad_flow, sys.box);
  ReineckReport rep = reineck_verify(grad_flow, sys.box, *sys.gradient, h, 2.0, scheme, opts);
  CHECK(rep.tables_equal);
  CHECK(rep.morse.at(0) == 1);
  CHECK(rep.e_field.at(0) == 1);
}

TEST_CASE("rotational perturbation continues back to the double well") {
  CatalogSystem sys = catalog_system("doublewell");
  LSField grad_flow = negative_gradient_field(*sys.gradient);
  LSField rotated = grad_flow;
  VectorMap base = grad_flow.nonlinearity;
  rotated.nonlinearity = [base](const Vec& x) {
    Vec v = base(x);
    v[0] += -1e-3 * x[1];
    v[1] += 1e-3 * x[0];
    return v;
  };
  SampleScheme scheme;
  ShootOptions opts;
  HomotopyFamily h = make_linear_homotopy(rotated, grad_flow, sys.box);
  ReineckReport rep = reineck_verify(rotated, sys.box, *sys.gradient, h, 3.0, scheme, opts);
  CHECK(rep.tables_equal);
  CHECK(rep.morse.at(0) == 1);
}

TEST_CASE("homotopies with inconsistent endpoints are rejected") {
  CatalogSystem saddle = catalog_system("saddle2d");
  CatalogSystem dw = catalog_system("doublewell");
  SampleScheme scheme;
  ShootOptions opts;
  LSField grad_flow = negative_gradient_field(*dw.gradient);
  HomotopyFamily wrong = make_linear_homotopy(saddle.field, saddle.field, saddle.box);
  CHECK_THROWS_AS(
      reineck_verify(saddle.field, saddle.box, *dw.gradient, wrong, 2.0, scheme, opts),
      Error);
}
