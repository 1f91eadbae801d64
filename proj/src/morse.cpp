#include "conley/morse.hpp"

#include <algorithm>
#include <cmath>

namespace conley {

namespace {

bool inside_box(const GridBox& box, const Vec& x) { return box.contains(x); }

bool lexicographic_less(const Vec& a, const Vec& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i] - 1e-12) return true;
    if (a[i] > b[i] + 1e-12) return false;
  }
  return false;
}

}  // namespace

std::vector<CriticalPoint> find_critical_points(const GradientSpec& g, const GridBox& box,
                                                int seeds_per_axis) {
  if (seeds_per_axis < 1) throw Error("find_critical_points: need seeds");
  const int d = g.model.dim;
  if (box.dim() != d) throw Error("find_critical_points: box dimension mismatch");
  const int d_minus = g.model.minus_count();

  std::vector<Vec> found;
  std::size_t total = 1;
  for (int a = 0; a < d; ++a) total *= std::size_t(seeds_per_axis);
  for (std::size_t s = 0; s < total; ++s) {
    // Seed lattice at cell centers of a seeds_per_axis grid.
    Vec x(std::size_t(d), 0.0);
    std::size_t rem = s;
    for (int a = 0; a < d; ++a) {
      int i = int(rem % std::size_t(seeds_per_axis));
      rem /= std::size_t(seeds_per_axis);
      double w = (box.upper[std::size_t(a)] - box.lower[std::size_t(a)]) / seeds_per_axis;
      x[std::size_t(a)] = box.lower[std::size_t(a)] + w * (i + 0.5);
    }
    bool converged = false;
    for (int it = 0; it < 60; ++it) {
      Vec r = g.euclidean_partials(x);
      double rn = norm(r);
      if (rn <= 1e-12 * (1 + norm(x))) {
        converged = true;
        break;
      }
      DMatrix h = g.hessian(x);
      Vec delta;
      try {
        delta = solve_dense(h, r);
      } catch (const Error&) {
        break;  // singular Hessian at this iterate, abandon the seed
      }
      double dn = norm(delta);
      if (dn > 1e3) break;
      for (int a = 0; a < d; ++a) x[std::size_t(a)] -= delta[std::size_t(a)];
      if (norm(x) > 1e6) break;
    }
    if (!converged || !inside_box(box, x)) continue;
    bool dup = false;
    for (const Vec& y : found)
      if (norm(x - y) < 1e-5) {
        dup = true;
        break;
      }
    if (!dup) found.push_back(x);
  }

  std::sort(found.begin(), found.end(), lexicographic_less);
  std::vector<CriticalPoint> out;
  for (Vec& x : found) {
    CriticalPoint cp;
    cp.x = x;
    cp.f_value = g.value(x);
    cp.hess_spectrum = symmetric_eigenvalues(g.hessian(x));
    cp.mu_neg = 0;
    double min_abs = 1e300;
    for (double ev : cp.hess_spectrum) {
      if (ev < 0) ++cp.mu_neg;
      min_abs = std::min(min_abs, std::fabs(ev));
    }
    cp.rel_index = cp.mu_neg - d_minus;
    cp.nondegenerate = min_abs > 1e-6;
    out.push_back(std::move(cp));
  }
  return out;
}

namespace {

// Uniformly spread unit directions on the sphere of the span of the given
// orthonormal columns. Deterministic for a fixed count.
std::vector<Vec> sphere_directions(const std::vector<Vec>& basis, int count) {
  const std::size_t m = basis.size();
  std::vector<Vec> dirs;
  auto combine = [&](const std::vector<double>& w) {
    Vec v(basis[0].size(), 0.0);
    for (std::size_t i = 0; i < m; ++i) axpy(v, w[i], basis[i]);
    double n = norm(v);
    for (double& c : v) c /= n;
    return v;
  };
  if (m == 1) {
    dirs.push_back(combine({1.0}));
    dirs.push_back(combine({-1.0}));
    return dirs;
  }
  if (m == 2) {
    for (int k = 0; k < count; ++k) {
      double th = 2 * 3.14159265358979324 * k / count;
      dirs.push_back(combine({std::cos(th), std::sin(th)}));
    }
    return dirs;
  }
  Rng rng(97);
  for (int k = 0; k < count; ++k) {
    std::vector<double> w(m);
    double n = 0;
    do {
      for (auto& c : w) c = rng.normal();
      n = 0;
      for (double c : w) n += c * c;
    } while (n < 1e-12);
    dirs.push_back(combine(w));
  }
  return dirs;
}

Trajectory resample_by_arclength(const Trajectory& tr, int points) {
  Trajectory out;
  out.step = tr.step;
  if (tr.points.empty()) return out;
  std::vector<double> cum(tr.points.size(), 0.0);
  for (std::size_t i = 1; i < tr.points.size(); ++i)
    cum[i] = cum[i - 1] + norm(tr.points[i] - tr.points[i - 1]);
  double total = cum.back();
  for (int k = 0; k < points; ++k) {
    double target = total * k / (points - 1);
    std::size_t i = 1;
    while (i < cum.size() && cum[i] < target) ++i;
    if (i >= cum.size()) {
      out.points.push_back(tr.points.back());
      out.times.push_back(tr.times.back());
      continue;
    }
    double seg = cum[i] - cum[i - 1];
    double t = seg > 0 ? (target - cum[i - 1]) / seg : 0.0;
    Vec p = tr.points[i - 1];
    for (std::size_t a = 0; a < p.size(); ++a)
      p[a] += t * (tr.points[i][a] - tr.points[i - 1][a]);
    out.points.push_back(std::move(p));
    out.times.push_back(tr.times[i - 1] + t * (tr.times[i] - tr.times[i - 1]));
  }
  return out;
}

double path_distance(const Trajectory& a, const Trajectory& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.points.size(); ++i)
    m = std::max(m, norm(a.points[i] - b.points[i]));
  return m;
}

}  // namespace

Connection count_connections(const GradientSpec& g, const CriticalPoint& x,
                             const CriticalPoint& y, const GridBox& box,
                             const ShootOptions& opts) {
  if (x.rel_index - y.rel_index != 1)
    throw Error("count_connections: relative index difference must be one");
  if (!x.nondegenerate || !y.nondegenerate)
    throw Error("count_connections: degenerate critical point");

  Connection conn;
  conn.source = x;
  conn.target = y;

  DMatrix vectors;
  std::vector<double> evs = symmetric_eigenvalues(g.hessian(x.x), &vectors);
  std::vector<Vec> unstable;
  for (std::size_t j = 0; j < evs.size(); ++j) {
    if (evs[j] >= 0) continue;
    Vec v(evs.size());
    for (std::size_t i = 0; i < evs.size(); ++i) v[i] = vectors(int(i), int(j));
    unstable.push_back(std::move(v));
  }
  if (unstable.empty()) return conn;  // nothing to shoot from

  LSField flow = negative_gradient_field(g);
  std::vector<Vec> dirs = sphere_directions(unstable, opts.directions);

  std::vector<Trajectory> hits(dirs.size());
  std::vector<std::uint8_t> hit_flag(dirs.size(), 0);
  parallel_chunks(dirs.size(), opts.threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t k = b; k < e; ++k) {
      Vec p = x.x;
      axpy(p, opts.radius, dirs[k]);
      Trajectory tr;
      tr.step = opts.step;
      tr.times.push_back(0);
      tr.points.push_back(p);
      double t = 0;
      bool hit = false;
      try {
        while (t < opts.time_cap) {
          p = flow_map(flow, p, opts.step, opts.step);
          t += opts.step;
          if (!box.contains(p)) break;
          tr.times.push_back(t);
          tr.points.push_back(p);
          if (norm(p - y.x) <= opts.hit_radius) {
            hit = true;
            break;
          }
        }
      } catch (const Error&) {
        hit = false;
      }
      if (hit) {
        hit_flag[k] = 1;
        hits[k] = std::move(tr);
      }
    }
  });

  // Cluster the hit orbits by resampled path distance.
  std::vector<Trajectory> resampled;
  std::vector<std::size_t> ids;
  for (std::size_t k = 0; k < dirs.size(); ++k) {
    if (!hit_flag[k]) continue;
    resampled.push_back(resample_by_arclength(hits[k], 33));
    ids.push_back(k);
  }
  const std::size_t n = resampled.size();
  std::vector<std::size_t> parent(n);
  for (std::size_t i = 0; i < n; ++i) parent[i] = i;
  std::function<std::size_t(std::size_t)> root = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (path_distance(resampled[i], resampled[j]) <= opts.cluster_distance)
        parent[root(i)] = root(j);

  std::vector<std::size_t> reps;
  for (std::size_t i = 0; i < n; ++i)
    if (root(i) == i) reps.push_back(i);

  // Distinct clusters must be clearly separated.
  for (std::size_t a = 0; a < reps.size(); ++a)
    for (std::size_t b = a + 1; b < reps.size(); ++b) {
      double dmin = 1e300;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (root(i) == reps[a] && root(j) == reps[b])
            dmin = std::min(dmin, path_distance(resampled[i], resampled[j]));
      if (dmin < 3 * opts.cluster_distance)
        throw HypothesisError("count_connections: resolution insufficient");
    }

  conn.count_mod2 = int(reps.size() % 2);
  for (std::size_t r : reps) conn.witnesses.push_back(hits[ids[r]]);
  return conn;
}

std::size_t MorseComplexLocal::generators_at(int q) const {
  std::size_t n = 0;
  for (const auto& g : generators)
    if (g.rel_index == q) ++n;
  return n;
}

MorseComplexLocal build_boundary(const GradientSpec& g, const GridBox& box,
                                 const ShootOptions& opts, int seeds_per_axis) {
  MorseComplexLocal cx;
  cx.neighborhood = box;
  cx.d_minus = g.model.minus_count();
  cx.generators = find_critical_points(g, box, seeds_per_axis);
  for (const auto& cp : cx.generators)
    if (!cp.nondegenerate)
      throw Error("build_boundary: degenerate critical point present");
  std::stable_sort(cx.generators.begin(), cx.generators.end(),
                   [](const CriticalPoint& a, const CriticalPoint& b) {
                     if (a.rel_index != b.rel_index) return a.rel_index < b.rel_index;
                     return lexicographic_less(a.x, b.x);
                   });

  if (cx.generators.empty()) return cx;
  int qmin = cx.generators.front().rel_index;
  int qmax = cx.generators.back().rel_index;
  std::map<int, std::vector<std::size_t>> by_index;
  for (std::size_t i = 0; i < cx.generators.size(); ++i)
    by_index[cx.generators[i].rel_index].push_back(i);

  for (int q = qmin + 1; q <= qmax; ++q) {
    auto src = by_index.find(q);
    auto dst = by_index.find(q - 1);
    std::size_t rows = dst == by_index.end() ? 0 : dst->second.size();
    std::size_t cols = src == by_index.end() ? 0 : src->second.size();
    Z2Matrix m(rows, cols);
    if (rows && cols) {
      for (std::size_t j = 0; j < cols; ++j) {
        for (std::size_t i = 0; i < rows; ++i) {
          Connection c = count_connections(g, cx.generators[src->second[j]],
                                           cx.generators[dst->second[i]], box, opts);
          if (c.count_mod2) m.set(i, j, true);
          if (!c.witnesses.empty()) cx.connections.push_back(std::move(c));
        }
      }
    }
    cx.boundary[q] = std::move(m);
  }

  // Fundamental relation.
  for (int q = qmin + 2; q <= qmax; ++q) {
    auto a = cx.boundary.find(q);
    auto b = cx.boundary.find(q - 1);
    if (a == cx.boundary.end() || b == cx.boundary.end()) continue;
    if (a->second.rows == 0 || b->second.rows == 0 || a->second.cols == 0) continue;
    if (!multiply(b->second, a->second).is_zero())
      throw Error("build_boundary: boundary does not square to zero; "
                  "rerun with more shooting directions");
  }
  return cx;
}

GradedDims homology_of_complex(const MorseComplexLocal& cx) {
  GradedDims g;
  g.offset = -cx.d_minus;
  if (cx.generators.empty()) return g;
  int qmin = cx.generators.front().rel_index;
  int qmax = cx.generators.back().rel_index;
  for (int q = qmin; q <= qmax; ++q) {
    std::size_t n = cx.generators_at(q);
    if (n == 0) continue;
    auto below = cx.boundary.find(q);
    auto above = cx.boundary.find(q + 1);
    std::size_t r_below =
        below == cx.boundary.end() ? 0 : rank_z2(below->second);
    std::size_t r_above =
        above == cx.boundary.end() ? 0 : rank_z2(above->second);
    g.set(q, n - r_below - r_above);
  }
  return g;
}

GradedDims local_morse_homology(const GradientSpec& g, const GridBox& box,
                                const ShootOptions& opts, int seeds_per_axis) {
  return homology_of_complex(build_boundary(g, box, opts, seeds_per_axis));
}

CompareReport compare_with_e_index(const GradientSpec& g, const GridBox& box, double T,
                                   const SampleScheme& scheme, const ShootOptions& opts,
                                   int seeds_per_axis) {
  CompareReport rep;
  rep.morse = local_morse_homology(g, box, opts, seeds_per_axis);
  LSField flow = negative_gradient_field(g);
  IndexPairBuild build = build_index_pair(flow, box, T, scheme);
  rep.e_graded = e_index(build.pair, g.model).dims;
  rep.equal = rep.morse.same_table(rep.e_graded);
  return rep;
}

// Smooth 0-to-1 ramp used by the omega cutoff.
namespace {
double smooth_ramp(double u) {
  if (u <= 0) return 0;
  if (u >= 1) return 1;
  double a = std::exp(-1.0 / u);
  double b = std::exp(-1.0 / (1.0 - u));
  return a / (a + b);
}

double smooth_ramp_derivative(double u) {
  if (u <= 0 || u >= 1) return 0;
  const double h = 1e-6;
  return (smooth_ramp(u + h) - smooth_ramp(u - h)) / (2 * h);
}
}  // namespace

double omega_cutoff(double t) {
  if (t <= 1.0 / 3) return 1;
  if (t >= 2.0 / 3) return 0;
  return 1.0 - smooth_ramp(3 * t - 1);
}

double omega_cutoff_derivative(double t) {
  if (t <= 1.0 / 3 || t >= 2.0 / 3) return 0;
  return -3 * smooth_ramp_derivative(3 * t - 1);
}

double eta_cutoff(double mu) {
  if (mu < 0) return 2 * (-mu) * (-mu) * (-mu);
  if (mu > 1) return 2 * (mu - 1) * (mu - 1) * (mu - 1);
  return 0;
}

double eta_cutoff_derivative(double mu) {
  if (mu < 0) return -6 * mu * mu;
  if (mu > 1) return 6 * (mu - 1) * (mu - 1);
  return 0;
}

double fastslow_r_threshold(const FastSlowSpec& spec, const GridBox& box,
                            std::uint64_t seed) {
  // max |omega'| over a fine grid.
  double max_omega_prime = 0;
  for (int i = 0; i <= 400; ++i)
    max_omega_prime =
        std::max(max_omega_prime, std::fabs(omega_cutoff_derivative(i / 400.0)));
  // Sampled bound on the lambda-derivative of the family over the box,
  // floored at one so the construction stays nondegenerate for constant
  // families.
  Rng rng(seed);
  double c = 0;
  const double h = 1e-3;
  for (int s = 0; s < 200; ++s) {
    Vec x = rng.point_in_box(box.lower, box.upper);
    double lambda = rng.uniform(h, 1 - h);
    double fp = spec.family(lambda + h).value(x);
    double fm = spec.family(lambda - h).value(x);
    c = std::max(c, std::fabs(fp - fm) / (2 * h));
  }
  c = std::max(c, 1.0);
  return 2 * max_omega_prime * c / (std::sqrt(3.0) * 3.14159265358979324);
}

GridBox fastslow_box(const GridBox& box, int subdivisions) {
  GridBox b = box;
  b.lower.push_back(-1.0 / 3);
  b.upper.push_back(4.0 / 3);
  b.subdivisions.push_back(subdivisions);
  return b;
}

GradientSpec build_fastslow(const FastSlowSpec& spec, const GridBox& box,
                            bool enforce_threshold) {
  if (spec.kappa <= 0) throw Error("build_fastslow: kappa must be positive");
  if (enforce_threshold) {
    double thr = fastslow_r_threshold(spec, box);
    if (!(spec.r > thr))
      throw HypothesisError("build_fastslow: r below the construction threshold");
  }
  GradientSpec base = spec.family(0.0);
  const int d = base.model.dim;
  const double r = spec.r;
  const double kappa = spec.kappa;
  auto family = spec.family;

  GradientSpec out;
  SplitModel m = base.model;
  m.dim = d + 1;
  m.spectrum.push_back(1.0);  // extended operator acts as identity on the slow axis
  m.levels.push_back(d + 1);
  out.model = std::move(m);
  out.metric_diag.assign(std::size_t(d) + 1, 1.0);
  out.metric_diag[std::size_t(d)] = 1.0 / kappa;

  const double pi = 3.14159265358979324;
  out.b = [family, r, kappa, d, pi](const Vec& z) {
    Vec x(z.begin(), z.end() - 1);
    double mu = z[std::size_t(d)];
    double f = family(omega_cutoff(mu)).value(x);
    return f + r * (1 + std::cos(pi * mu)) + eta_cutoff(mu) / kappa -
           mu * mu / (2 * kappa);
  };
  out.grad_b = [family, r, kappa, d, pi](const Vec& z) {
    Vec x(z.begin(), z.end() - 1);
    double mu = z[std::size_t(d)];
    double omega = omega_cutoff(mu);
    GradientSpec g = family(omega);
    Vec grad = g.gradient(x);  // includes the linear part on the x block
    Vec gb(std::size_t(d) + 1);
    for (int i = 0; i < d; ++i)
      gb[std::size_t(i)] = grad[std::size_t(i)] - g.model.spectrum[std::size_t(i)] * x[std::size_t(i)];
    // Slow component of the metric gradient minus the linear part mu.
    double dfdlambda = 0;
    double omega_prime = omega_cutoff_derivative(mu);
    if (omega_prime != 0) {
      const double h = 1e-4;
      double lp = std::min(1.0, omega + h), lm = std::max(0.0, omega - h);
      dfdlambda = (family(lp).value(x) - family(lm).value(x)) / (lp - lm);
    }
    double dmu = omega_prime * dfdlambda - r * pi * std::sin(pi * mu) +
                 eta_cutoff_derivative(mu) / kappa;
    gb[std::size_t(d)] = kappa * dmu - mu;
    return gb;
  };
  return out;
}

MonotonicityReport fastslow_monotonicity_check(const FastSlowSpec& spec, const GridBox& box,
                                               int samples, std::uint64_t seed) {
  GradientSpec ext = build_fastslow(spec, box, false);
  LSField flow = negative_gradient_field(ext);
  MonotonicityReport rep;
  Rng rng(seed);
  for (int s = 0; s < samples; ++s) {
    Vec x = rng.point_in_box(box.lower, box.upper);
    x.push_back(rng.uniform(0.02, 0.98));
    Vec v = flow(x);
    ++rep.samples;
    if (!(v.back() > 0)) {
      ++rep.violations;
      if (rep.witnesses.size() < 16) rep.witnesses.push_back(x);
    }
  }
  return rep;
}

McfReport mcf_homology(const LSField& flow, const GridBox& box, const GradientSpec& lyapunov,
                       double T, const SampleScheme& scheme, const ShootOptions& opts,
                       int seeds_per_axis) {
  McfReport rep;

  // Enclosure of the invariant set from the stay cells.
  CellClassification cls = classify_cells(flow, box, T, scheme);
  std::vector<std::size_t> stay = cls.stay_cells();
  CellRealization enclosure = CellRealization::from_linear(box, stay);

  // (i) near-constancy of the function over the enclosure.
  double fmin = 1e300, fmax = -1e300;
  for (std::size_t c : stay) {
    auto idx = box.cell_multi_index(c);
    Vec lo, hi;
    box.cell_bounds(idx, lo, hi);
    std::vector<Vec> probes = {box.cell_center(idx), lo, hi};
    for (const Vec& p : probes) {
      double v = lyapunov.value(p);
      fmin = std::min(fmin, v);
      fmax = std::max(fmax, v);
    }
  }
  rep.value_spread = stay.empty() ? 0 : fmax - fmin;
  double diameter = 0;
  for (std::size_t a = 0; a < box.lower.size(); ++a) {
    double w = box.upper[a] - box.lower[a];
    diameter += w * w;
  }
  rep.spread_tolerance = 1e-2 * std::sqrt(diameter);
  if (rep.value_spread > rep.spread_tolerance)
    throw HypothesisError("mcf_homology: function not constant on the invariant-set "
                          "enclosure (spread " +
                          format_double(rep.value_spread) + " > " +
                          format_double(rep.spread_tolerance) + ")");

  // (ii) strict decrease along the flow off the enclosure.
  {
    Rng rng(29);
    int checked = 0;
    while (checked < 500) {
      Vec x = rng.point_in_box(box.lower, box.upper);
      if (enclosure.contains(x)) continue;
      ++checked;
      Vec partials = lyapunov.euclidean_partials(x);
      double ddt = dot(partials, flow(x));
      if (!(ddt < 0)) {
        ++rep.decrease_violations;
        if (rep.witnesses.size() < 16) rep.witnesses.push_back(x);
      }
    }
  }
  if (rep.decrease_violations > 0) {
    std::string where;
    if (!rep.witnesses.empty()) {
      where = " at (";
      for (std::size_t i = 0; i < rep.witnesses[0].size(); ++i)
        where += (i ? "," : "") + format_double(rep.witnesses[0][i]);
      where += ")";
    }
    throw HypothesisError("mcf_homology: function fails to decrease along the flow" + where);
  }

  rep.lyapunov_ok = true;
  rep.dims = local_morse_homology(lyapunov, box, opts, seeds_per_axis);
  rep.provenance =
      "single representative of the limit class; all continuation maps between "
      "representatives are isomorphisms";
  return rep;
}

}  // namespace conley
