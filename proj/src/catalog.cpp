#include "conley/catalog.hpp"

#include <algorithm>
#include <cmath>

#include "conley/conley_index.hpp"

namespace conley {

double Polynomial::eval(const Vec& x) const {
  double s = 0;
  for (const PolyTerm& t : terms) {
    double v = t.coeff;
    for (int a = 0; a < dim; ++a)
      for (int p = 0; p < t.powers[std::size_t(a)]; ++p) v *= x[std::size_t(a)];
    s += v;
  }
  return s;
}

Polynomial Polynomial::derivative(int axis) const {
  Polynomial d;
  d.dim = dim;
  for (const PolyTerm& t : terms) {
    int p = t.powers[std::size_t(axis)];
    if (p == 0) continue;
    PolyTerm dt = t;
    dt.coeff *= p;
    dt.powers[std::size_t(axis)] -= 1;
    d.terms.push_back(std::move(dt));
  }
  return d;
}

GradientSpec polynomial_gradient(const SplitModel& model, const Polynomial& b) {
  if (b.dim != model.dim) throw Error("polynomial_gradient: dimension mismatch");
  std::vector<Polynomial> grad;
  for (int a = 0; a < model.dim; ++a) grad.push_back(b.derivative(a));
  std::vector<std::vector<Polynomial>> hess(std::size_t(model.dim));
  for (int i = 0; i < model.dim; ++i)
    for (int j = 0; j < model.dim; ++j)
      hess[std::size_t(i)].push_back(grad[std::size_t(i)].derivative(j));

  GradientSpec g;
  g.model = model;
  Polynomial bp = b;
  g.b = [bp](const Vec& x) { return bp.eval(x); };
  g.grad_b = [grad](const Vec& x) {
    Vec v(grad.size());
    for (std::size_t i = 0; i < grad.size(); ++i) v[i] = grad[i].eval(x);
    return v;
  };
  SplitModel m = model;
  g.hess = [hess, m](const Vec& x) {
    const int d = m.dim;
    DMatrix h(d, d);
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) h(i, j) = hess[std::size_t(i)][std::size_t(j)].eval(x);
      h(i, i) += m.spectrum[std::size_t(i)];
    }
    return h;
  };
  return g;
}

LSField polynomial_field(const SplitModel& model, const std::vector<Polynomial>& k) {
  if (int(k.size()) != model.dim) throw Error("polynomial_field: component count mismatch");
  LSField f = make_linear_field(model);
  std::vector<Polynomial> kk = k;
  f.nonlinearity = [kk](const Vec& x) {
    Vec v(kk.size());
    for (std::size_t i = 0; i < kk.size(); ++i) v[i] = kk[i].eval(x);
    return v;
  };
  return f;
}

namespace {

GridBox box1d(double a, double b, int n) {
  GridBox g;
  g.lower = {a};
  g.upper = {b};
  g.subdivisions = {n};
  return g;
}

GridBox box2d(double a, double b, int n) {
  GridBox g;
  g.lower = {a, a};
  g.upper = {b, b};
  g.subdivisions = {n, n};
  return g;
}

PolyTerm term(double c, std::vector<int> p) {
  PolyTerm t;
  t.coeff = c;
  t.powers = std::move(p);
  return t;
}

}  // namespace

CatalogSystem catalog_system(const std::string& name) {
  CatalogSystem sys;
  sys.name = name;
  if (name == "expand1d") {
    SplitModel m = make_model({-1.0});
    Polynomial b;
    b.dim = 1;
    sys.gradient = polynomial_gradient(m, b);  // f = -x^2/2, flow is x' = x
    sys.field = negative_gradient_field(*sys.gradient);
    sys.box = box1d(-1, 1, 64);
    sys.T = 2;
    return sys;
  }
  if (name == "contract1d") {
    SplitModel m = make_model({1.0});
    Polynomial b;
    b.dim = 1;
    sys.gradient = polynomial_gradient(m, b);  // f = x^2/2, flow is x' = -x
    sys.field = negative_gradient_field(*sys.gradient);
    sys.box = box1d(-1, 1, 64);
    sys.T = 2;
    return sys;
  }
  if (name == "saddle2d") {
    SplitModel m = make_model({1.0, -1.0});
    sys.field = make_linear_field(m);
    sys.box = box2d(-1, 1, 64);
    sys.T = 3;
    return sys;
  }
  if (name == "doublewell") {
    SplitModel m = make_model({1.0, -1.0});
    Polynomial b;
    b.dim = 2;
    b.terms = {term(0.25, {4, 0}), term(-1.0, {2, 0})};
    sys.gradient = polynomial_gradient(m, b);  // f = x^4/4 - x^2/2 - y^2/2
    sys.field = negative_gradient_field(*sys.gradient);
    sys.box = box2d(-1.5, 1.5, 64);
    sys.T = 3;
    return sys;
  }
  if (name == "saddle2d-suspended") {
    CatalogSystem base = catalog_system("saddle2d");
    sys.field = suspend_field(base.field);
    sys.box = suspend_box(base.box, 32);
    sys.T = 2;
    return sys;
  }
  if (name == "doublewell-suspended") {
    CatalogSystem base = catalog_system("doublewell");
    sys.field = suspend_field(base.field);
    sys.gradient = suspend_gradient(*base.gradient);
    sys.box = suspend_box(base.box, 32);
    sys.T = 2;
    return sys;
  }
  if (name == "coupled3d") {
    // Level-2 nonlinearity is essential; the third coordinate couples in at
    // magnitude 1e-2 only.
    SplitModel m = make_model({1.0, 1.0, -1.0}, {1, 2, 3});
    LSField f = make_linear_field(m);
    f.nonlinearity = [](const Vec& x) {
      return Vec{0.0, -2.0 * x[1], 0.01 * std::sin(x[0])};
    };
    sys.field = f;
    GridBox g;
    g.lower = {-1, -1, -1};
    g.upper = {1, 1, 1};
    g.subdivisions = {16, 16, 16};
    sys.box = g;
    sys.T = 1.5;
    return sys;
  }
  if (name == "stronglycoupled2d") {
    // The truncation wipes an order-one term and the interpolated fixed
    // point crosses the boundary. The level ladder stops below the full
    // dimension.
    SplitModel m = make_model({1.0, -1.0}, {1});
    LSField f = make_linear_field(m);
    f.nonlinearity = [](const Vec& x) { return Vec{0.0, 2.5 * std::cos(2 * x[0])}; };
    sys.field = f;
    sys.box = box2d(-1, 1, 32);
    sys.T = 2;
    return sys;
  }
  throw ConfigError("unknown catalog system: " + name);
}

std::vector<std::string> catalog_system_names() {
  return {"expand1d",  "contract1d", "saddle2d", "doublewell",
          "saddle2d-suspended", "doublewell-suspended", "coupled3d", "stronglycoupled2d"};
}

HomotopyFamily catalog_homotopy(const std::string& name, GridBox* box_out) {
  if (name == "rotated-saddle-homotopy") {
    SplitModel m = make_model({1.0, -1.0});
    LSField f0 = make_linear_field(m);
    const double th = 10.0 * 3.14159265358979324 / 180.0;
    const double c = std::cos(th), s = std::sin(th);
    // R diag(1,-1) R^T
    const double a11 = c * c - s * s;
    const double a12 = 2 * c * s;
    LSField f1 = make_linear_field(m);
    f1.nonlinearity = [a11, a12](const Vec& x) {
      // rotated matrix minus the diagonal part
      return Vec{(a11 - 1.0) * x[0] + a12 * x[1], a12 * x[0] + (-a11 + 1.0) * x[1]};
    };
    GridBox box = box2d(-1, 1, 64);
    if (box_out) *box_out = box;
    return make_linear_homotopy(f0, f1, box);
  }
  if (name == "isolation-breaker") {
    SplitModel m = make_model({1.0, -1.0});
    GridBox box = box2d(-1, 1, 64);
    if (box_out) *box_out = box;
    auto field_at = [m](double s) {
      LSField f = make_linear_field(m);
      double px = 2 * s;  // saddle point slides out through the right face
      f.nonlinearity = [px](const Vec&) { return Vec{-px, 0.0}; };
      return f;
    };
    return make_homotopy(field_at, box);
  }
  throw ConfigError("unknown catalog homotopy: " + name);
}

std::vector<std::string> catalog_homotopy_names() {
  return {"rotated-saddle-homotopy", "isolation-breaker"};
}

LSField bump_perturbed(const LSField& f, double magnitude) {
  LSField g = f;
  VectorMap k = f.nonlinearity;
  double mag = magnitude;
  g.nonlinearity = [k, mag](const Vec& x) {
    Vec v = k ? k(x) : Vec(x.size(), 0.0);
    double w = mag * std::exp(-dot(x, x));
    for (double& c : v) c += w;
    return v;
  };
  return g;
}

GradientSpec random_separable_gradient(std::uint64_t seed, GridBox* box_out) {
  Rng rng(seed * 0x9e3779b9u + 1);
  int dim = 1 + int(rng.next() % 3);
  // Root counts per axis, capped so the total stays at nine.
  std::vector<int> roots(std::size_t(dim), 1);
  int total = 1;
  for (int a = 0; a < dim; ++a) {
    if (total * 3 <= 9 && rng.uniform01() < 0.8) {
      roots[std::size_t(a)] = 3;
      total *= 3;
    }
  }

  Polynomial b;
  b.dim = dim;
  std::vector<double> spectrum(std::size_t(dim), 0.0);
  for (int a = 0; a < dim; ++a) {
    spectrum[std::size_t(a)] = rng.uniform01() < 0.5 ? 1.0 : -1.0;
    // Derivative roots spaced around the origin with jitter.
    std::vector<double> rs;
    if (roots[std::size_t(a)] == 1) {
      rs = {rng.uniform(-0.4, 0.4)};
    } else {
      rs = {-1.2 + rng.uniform(-0.25, 0.25), rng.uniform(-0.25, 0.25),
            1.2 + rng.uniform(-0.25, 0.25)};
    }
    // p'(t) = prod (t - r); expand to monomial coefficients.
    std::vector<double> coef = {1.0};
    for (double r : rs) {
      std::vector<double> next(coef.size() + 1, 0.0);
      for (std::size_t i = 0; i < coef.size(); ++i) {
        next[i + 1] += coef[i];
        next[i] -= r * coef[i];
      }
      coef = std::move(next);
    }
    // p = integral of p'; subtract the model quadratic on this axis.
    for (std::size_t i = 0; i < coef.size(); ++i) {
      double c = coef[i] / double(i + 1);
      std::vector<int> powers(std::size_t(dim), 0);
      powers[std::size_t(a)] = int(i) + 1;
      b.terms.push_back(term(c, std::move(powers)));
    }
    std::vector<int> p2(std::size_t(dim), 0);
    p2[std::size_t(a)] = 2;
    b.terms.push_back(term(-0.5 * spectrum[std::size_t(a)], std::move(p2)));
  }

  if (box_out) {
    GridBox g;
    g.lower.assign(std::size_t(dim), -2.3);
    g.upper.assign(std::size_t(dim), 2.3);
    g.subdivisions.assign(std::size_t(dim), 16);
    *box_out = g;
  }
  return polynomial_gradient(make_model(spectrum), b);
}

}  // namespace conley
