#include "conley/system.hpp"

#include <algorithm>

namespace conley {

void SplitModel::validate() const {
  if (dim <= 0 || int(spectrum.size()) != dim) throw ConfigError("model: bad dimension");
  for (double s : spectrum)
    if (s == 0.0) throw ConfigError("model: spectrum entries must be nonzero");
  if (levels.empty()) throw ConfigError("model: empty level ladder");
  int prev = 0;
  for (int l : levels) {
    if (l <= prev || l > dim) throw ConfigError("model: levels must increase up to dim");
    prev = l;
  }
}

SplitModel make_model(std::vector<double> spectrum, std::vector<int> levels) {
  SplitModel m;
  m.dim = int(spectrum.size());
  m.spectrum = std::move(spectrum);
  m.levels = levels.empty() ? std::vector<int>{m.dim} : std::move(levels);
  m.validate();
  return m;
}

Vec LSField::operator()(const Vec& x) const {
  if (int(x.size()) != model.dim) throw Error("field: dimension mismatch");
  Vec y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = linear[i] * x[i];
  if (nonlinearity) {
    Vec k = nonlinearity(x);
    if (k.size() != x.size()) throw Error("field: nonlinearity dimension mismatch");
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += k[i];
  }
  return y;
}

LSField make_linear_field(const SplitModel& model) {
  LSField f;
  f.model = model;
  f.linear = model.spectrum;
  return f;
}

Vec evaluate_field(const LSField& f, const Vec& x) { return f(x); }

double GradientSpec::quadratic(const Vec& x) const {
  double s = 0;
  for (int i = 0; i < model.dim; ++i)
    s += 0.5 * metric_weight(i) * model.spectrum[std::size_t(i)] * x[std::size_t(i)] *
         x[std::size_t(i)];
  return s;
}

double GradientSpec::value(const Vec& x) const {
  return quadratic(x) + (b ? b(x) : 0.0);
}

Vec GradientSpec::gradient(const Vec& x) const {
  Vec g(x.size());
  for (int i = 0; i < model.dim; ++i)
    g[std::size_t(i)] = model.spectrum[std::size_t(i)] * x[std::size_t(i)];
  if (grad_b) {
    Vec gb = grad_b(x);
    for (std::size_t i = 0; i < x.size(); ++i) g[i] += gb[i];
  } else if (b) {
    const double h = 1e-4;
    Vec xp = x, xm = x;
    for (std::size_t i = 0; i < x.size(); ++i) {
      xp[i] += h;
      xm[i] -= h;
      double d = (b(xp) - b(xm)) / (2 * h);
      g[i] += d / metric_weight(int(i));
      xp[i] = x[i];
      xm[i] = x[i];
    }
  }
  return g;
}

Vec GradientSpec::euclidean_partials(const Vec& x) const {
  Vec g = gradient(x);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] *= metric_weight(int(i));
  return g;
}

DMatrix GradientSpec::hessian(const Vec& x) const {
  if (hess) return hess(x);
  // Central differences of the Euclidean partials.
  const double h = 1e-4;
  const int d = model.dim;
  DMatrix m(d, d);
  Vec xp = x, xm = x;
  for (int j = 0; j < d; ++j) {
    xp[std::size_t(j)] += h;
    xm[std::size_t(j)] -= h;
    Vec gp = euclidean_partials(xp);
    Vec gm = euclidean_partials(xm);
    for (int i = 0; i < d; ++i) m(i, j) = (gp[std::size_t(i)] - gm[std::size_t(i)]) / (2 * h);
    xp[std::size_t(j)] = x[std::size_t(j)];
    xm[std::size_t(j)] = x[std::size_t(j)];
  }
  // Symmetrize.
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      double v = 0.5 * (m(i, j) + m(j, i));
      m(i, j) = v;
      m(j, i) = v;
    }
  return m;
}

GradientSpec make_gradient(const SplitModel& model, std::function<double(const Vec&)> b,
                           VectorMap grad_b, std::function<DMatrix(const Vec&)> hess) {
  GradientSpec g;
  g.model = model;
  g.b = std::move(b);
  g.grad_b = std::move(grad_b);
  g.hess = std::move(hess);
  return g;
}

LSField negative_gradient_field(const GradientSpec& g) {
  LSField f;
  f.model = g.model;
  f.linear.resize(std::size_t(g.model.dim));
  for (int i = 0; i < g.model.dim; ++i)
    f.linear[std::size_t(i)] = -g.model.spectrum[std::size_t(i)];
  GradientSpec spec = g;
  f.nonlinearity = [spec](const Vec& x) {
    Vec grad = spec.gradient(x);
    Vec k(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
      k[i] = -(grad[i] - spec.model.spectrum[i] * x[i]);
    return k;
  };
  f.support_level = g.support_level;
  return f;
}

namespace {

void rk4_step(const LSField& f, Vec& x, double h, Vec& k1, Vec& k2, Vec& k3, Vec& k4,
              Vec& tmp) {
  k1 = f(x);
  tmp = x;
  axpy(tmp, h / 2, k1);
  k2 = f(tmp);
  tmp = x;
  axpy(tmp, h / 2, k2);
  k3 = f(tmp);
  tmp = x;
  axpy(tmp, h, k3);
  k4 = f(tmp);
  for (std::size_t i = 0; i < x.size(); ++i)
    x[i] += h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
}

LSField negated(const LSField& f) {
  LSField g = f;
  for (double& v : g.linear) v = -v;
  if (f.nonlinearity) {
    VectorMap k = f.nonlinearity;
    g.nonlinearity = [k](const Vec& x) {
      Vec v = k(x);
      for (double& c : v) c = -c;
      return v;
    };
  }
  return g;
}

}  // namespace

Vec flow_map(const LSField& f, Vec x, double t, double step) {
  if (step <= 0) throw Error("flow_map: step must be positive");
  if (t == 0) return x;
  const LSField* field = &f;
  LSField rev;
  if (t < 0) {
    rev = negated(f);
    field = &rev;
    t = -t;
  }
  Vec k1, k2, k3, k4, tmp;
  double done = 0;
  while (done < t - 1e-15) {
    double h = std::min(step, t - done);
    rk4_step(*field, x, h, k1, k2, k3, k4, tmp);
    done += h;
    if (!all_finite(x)) throw Error("flow_map: non-finite state");
  }
  return x;
}

Trajectory flow_trajectory(const LSField& f, Vec x, double t, double step) {
  Trajectory tr;
  tr.step = step;
  const LSField* field = &f;
  LSField rev;
  double sign = 1;
  if (t < 0) {
    rev = negated(f);
    field = &rev;
    t = -t;
    sign = -1;
  }
  Vec k1, k2, k3, k4, tmp;
  double done = 0;
  tr.times.push_back(0);
  tr.points.push_back(x);
  while (done < t - 1e-15) {
    double h = std::min(step, t - done);
    rk4_step(*field, x, h, k1, k2, k3, k4, tmp);
    done += h;
    if (!all_finite(x)) throw Error("flow_trajectory: non-finite state");
    tr.times.push_back(sign * done);
    tr.points.push_back(x);
  }
  return tr;
}

namespace {

// Forward march inside a membership predicate. Returns the refined crossing
// time if the orbit leaves within the horizon.
std::optional<double> first_exit(const LSField& f, Vec x, double horizon, double step,
                                 const std::function<bool(const Vec&)>& inside) {
  if (!inside(x)) return 0.0;
  Vec k1, k2, k3, k4, tmp;
  double t = 0;
  Vec prev = x;
  while (t < horizon - 1e-15) {
    double h = std::min(step, horizon - t);
    prev = x;
    rk4_step(f, x, h, k1, k2, k3, k4, tmp);
    t += h;
    if (!all_finite(x)) throw Error("trajectory: non-finite state");
    if (!inside(x)) {
      // Bisection between the last inside state and the first outside one.
      double lo = 0, hi = h;
      Vec base = prev;
      while (hi - lo > step / 16) {
        double mid = 0.5 * (lo + hi);
        Vec probe = flow_map(f, base, mid, step);
        if (inside(probe))
          lo = mid;
        else
          hi = mid;
      }
      return t - h + hi;
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<double> StayResult::first_exit_time() const {
  if (exit_forward_time && exit_backward_time)
    return *exit_forward_time <= -*exit_backward_time ? exit_forward_time
                                                      : exit_backward_time;
  if (exit_forward_time) return exit_forward_time;
  return exit_backward_time;
}

std::optional<bool> StayResult::exit_forward() const {
  auto t = first_exit_time();
  if (!t) return std::nullopt;
  return *t >= 0;
}

StayResult trajectory_in_set(const LSField& f, const Vec& x, double t_minus, double t_plus,
                             const GridBox& box, double step) {
  if (t_minus > 0 || t_plus < 0) throw Error("trajectory_in_set: window must contain 0");
  StayResult r;
  auto inside = [&box](const Vec& p) { return box.contains(p); };
  if (t_plus > 0) {
    auto e = first_exit(f, x, t_plus, step, inside);
    if (e) {
      r.stays = false;
      r.exit_forward_time = *e;
    }
  }
  if (t_minus < 0) {
    LSField rev = negated(f);
    auto e = first_exit(rev, x, -t_minus, step, inside);
    if (e) {
      r.stays = false;
      r.exit_backward_time = -*e;
    }
  }
  return r;
}

double lipschitz_estimate(const LSField& f, const GridBox& box, int samples,
                          std::uint64_t seed) {
  if (samples < 2) throw Error("lipschitz_estimate: need at least 2 samples");
  Rng rng(seed);
  const int d = box.dim();
  double best = 0;
  std::vector<Vec> pts;
  pts.reserve(std::size_t(samples));
  for (int i = 0; i < samples; ++i) pts.push_back(rng.point_in_box(box.lower, box.upper));
  for (int i = 0; i + 1 < samples; ++i) {
    Vec fx = f(pts[std::size_t(i)]);
    Vec fy = f(pts[std::size_t(i) + 1]);
    double den = norm(pts[std::size_t(i)] - pts[std::size_t(i) + 1]);
    if (den > 1e-12) best = std::max(best, norm(fx - fy) / den);
  }
  // Finite-difference Jacobian operator norm at the sampled points.
  const double h = 1e-5;
  for (int s = 0; s < samples; ++s) {
    const Vec& p = pts[std::size_t(s)];
    DMatrix jac(d, d);
    Vec xp = p, xm = p;
    for (int j = 0; j < d; ++j) {
      xp[std::size_t(j)] += h;
      xm[std::size_t(j)] -= h;
      Vec fp = f(xp);
      Vec fm = f(xm);
      for (int i = 0; i < d; ++i) jac(i, j) = (fp[std::size_t(i)] - fm[std::size_t(i)]) / (2 * h);
      xp[std::size_t(j)] = p[std::size_t(j)];
      xm[std::size_t(j)] = p[std::size_t(j)];
    }
    best = std::max(best, spectral_norm(jac));
  }
  return 1.1 * best;
}

LSField galerkin_truncate(const LSField& f, int level_index) {
  if (level_index < 0 || level_index >= int(f.model.levels.size()))
    throw Error("galerkin_truncate: level does not exist");
  const int n = f.model.levels[std::size_t(level_index)];
  LSField g = f;
  g.support_level = n;
  if (f.nonlinearity) {
    VectorMap k = f.nonlinearity;
    g.nonlinearity = [k, n](const Vec& x) {
      Vec px = x;
      for (std::size_t i = std::size_t(n); i < px.size(); ++i) px[i] = 0;
      Vec v = k(px);
      for (std::size_t i = std::size_t(n); i < v.size(); ++i) v[i] = 0;
      return v;
    };
  }
  return g;
}

}  // namespace conley
