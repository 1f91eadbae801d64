#include "conley/continuation.hpp"

#include <algorithm>
#include <cmath>

namespace conley {

namespace {

void validate_endpoints(const HomotopyFamily& h, const GridBox& box) {
  Rng rng(7);
  for (int s = 0; s < 8; ++s) {
    Vec x = rng.point_in_box(box.lower, box.upper);
    if (norm(h.field_at(0.0)(x) - h.f0(x)) > 1e-10 ||
        norm(h.field_at(1.0)(x) - h.f1(x)) > 1e-10)
      throw Error("homotopy: endpoints disagree with the family");
  }
}

}  // namespace

HomotopyFamily make_homotopy(std::function<LSField(double)> field_at,
                             const GridBox& validation_box) {
  HomotopyFamily h;
  h.field_at = std::move(field_at);
  h.f0 = h.field_at(0.0);
  h.f1 = h.field_at(1.0);
  validate_endpoints(h, validation_box);
  return h;
}

HomotopyFamily make_linear_homotopy(const LSField& f0, const LSField& f1,
                                    const GridBox& validation_box) {
  if (f0.model.dim != f1.model.dim) throw Error("homotopy: dimension mismatch");
  HomotopyFamily h;
  h.f0 = f0;
  h.f1 = f1;
  h.field_at = [f0, f1](double s) {
    LSField f = f0;
    for (std::size_t i = 0; i < f.linear.size(); ++i)
      f.linear[i] = (1 - s) * f0.linear[i] + s * f1.linear[i];
    VectorMap k0 = f0.nonlinearity, k1 = f1.nonlinearity;
    if (k0 || k1) {
      f.nonlinearity = [k0, k1, s](const Vec& x) {
        Vec v(x.size(), 0.0);
        if (k0) {
          Vec a = k0(x);
          axpy(v, 1 - s, a);
        }
        if (k1) {
          Vec b = k1(x);
          axpy(v, s, b);
        }
        return v;
      };
    }
    return f;
  };
  validate_endpoints(h, validation_box);
  return h;
}

double closeness_epsilon(double lipschitz, double T, double rho) {
  if (T <= 0 || rho <= 0 || lipschitz < 0) throw Error("closeness_epsilon: bad inputs");
  return rho / (2 * T * std::exp(lipschitz * T));
}

GronwallReport gronwall_check(const LSField& f0, const LSField& f1, const GridBox& box,
                              double T, int starts, const SampleScheme& scheme,
                              std::uint64_t seed) {
  GronwallReport rep;
  Rng rng(seed);
  for (int s = 0; s < 400; ++s) {
    Vec x = rng.point_in_box(box.lower, box.upper);
    rep.epsilon = std::max(rep.epsilon, norm(f0(x) - f1(x)));
  }
  rep.lipschitz = lipschitz_estimate(f0, box, 60, seed + 1);
  rep.starts = starts;
  for (int s = 0; s < starts; ++s) {
    Vec start = rng.point_in_box(box.lower, box.upper);
    Vec a = start, b = start;
    double t = 0;
    try {
      while (t < T - 1e-12) {
        double hstep = std::min(scheme.step, T - t);
        a = flow_map(f0, a, hstep, scheme.step);
        b = flow_map(f1, b, hstep, scheme.step);
        t += hstep;
        double div = norm(a - b);
        double bound = rep.epsilon * t * std::exp(rep.lipschitz * t) * 1.05;
        if (bound > 0) rep.worst_ratio = std::max(rep.worst_ratio, div / bound);
        if (div > bound) {
          ++rep.violations;
          if (rep.witnesses.size() < 16) rep.witnesses.push_back(start);
          break;
        }
      }
    } catch (const Error&) {
      // Blow-up outside the sampled region; skip the remainder of this orbit.
    }
  }
  return rep;
}

ContinuationReport verify_isolating_along(const HomotopyFamily& h, const GridBox& box,
                                          int s_count, double T, const SampleScheme& scheme,
                                          bool with_calibration) {
  if (s_count < 2) throw Error("verify_isolating_along: need at least the endpoints");
  ContinuationReport rep;
  bool all_isolating = true;
  for (int i = 0; i < s_count; ++i) {
    double s = double(i) / (s_count - 1);
    rep.s_samples.push_back(s);
    CellClassification cls = classify_cells(h.field_at(s), box, T, scheme);
    auto margin = cls.boundary_margin_cells(true);
    bool iso = !margin || *margin >= 1;
    rep.isolating.push_back(iso ? 1 : 0);
    rep.margin_cells.push_back(margin ? *margin : -1);
    if (!iso && all_isolating) {
      all_isolating = false;
      rep.message = "isolation lost at s=" + format_double(s);
    }
  }
  try {
    IndexPairBuild b0 = build_index_pair(h.f0, box, T, scheme);
    rep.e_start = e_index(b0.pair, h.f0.model).dims;
  } catch (const HypothesisError& e) {
    rep.message += std::string(rep.message.empty() ? "" : "; ") + "start: " + e.what();
  }
  try {
    IndexPairBuild b1 = build_index_pair(h.f1, box, T, scheme);
    rep.e_end = e_index(b1.pair, h.f1.model).dims;
  } catch (const HypothesisError& e) {
    rep.message += std::string(rep.message.empty() ? "" : "; ") + "end: " + e.what();
  }
  rep.endpoints_equal = rep.e_start.same_table(rep.e_end);
  rep.verdict = all_isolating && rep.endpoints_equal;
  if (with_calibration) rep.calibration = calibrate_isolation(h.f0, box, scheme);
  return rep;
}

namespace {

// Containment of stay sets with one cell of slack in the index metric.
bool included_with_slack(const CubicalSet& a, const CubicalSet& b, int* slack_count) {
  *slack_count = 0;
  std::set<std::vector<int>> b_cells;
  for (const Cube& c : b.full_cells()) b_cells.insert(c.lo);
  for (const Cube& c : a.full_cells()) {
    if (b_cells.count(c.lo)) continue;
    bool near = false;
    const int d = c.ambient();
    std::vector<int> probe = c.lo;
    std::function<void(int)> scan = [&](int axis) {
      if (near) return;
      if (axis == d) {
        if (b_cells.count(probe)) near = true;
        return;
      }
      for (int dlt = -1; dlt <= 1 && !near; ++dlt) {
        probe[std::size_t(axis)] = c.lo[std::size_t(axis)] + dlt;
        scan(axis + 1);
      }
      probe[std::size_t(axis)] = c.lo[std::size_t(axis)];
    };
    scan(0);
    if (!near) return false;
    ++*slack_count;
  }
  return true;
}

}  // namespace

NestingReport g_nesting_check(const LSField& f_phi, const LSField& f_psi, const GridBox& box,
                              double T, const SampleScheme& scheme, std::uint64_t seed) {
  NestingReport rep;
  IsolationCalibration cal = calibrate_isolation(f_phi, box, scheme);
  rep.rho = cal.rho;

  // Closeness gate: sampled sup of |phi(t,x) - psi(t,x)| over the inflated
  // box and |t| <= 4T must stay below rho/2.
  {
    GridBox inflated = box.inflated(cal.rho);
    Rng rng(seed);
    double sup = 0;
    for (int s = 0; s < 40 && sup < cal.rho / 2; ++s) {
      Vec x = rng.point_in_box(inflated.lower, inflated.upper);
      for (double dir : {1.0, -1.0}) {
        try {
          Vec a = x, b = x;
          double t = 0;
          while (t < 4 * T - 1e-12) {
            double hstep = std::min(scheme.step, 4 * T - t);
            a = flow_map(f_phi, a, dir * hstep, scheme.step);
            b = flow_map(f_psi, b, dir * hstep, scheme.step);
            t += hstep;
            sup = std::max(sup, norm(a - b));
            if (sup >= cal.rho / 2) break;
          }
        } catch (const Error&) {
          sup = cal.rho;  // blow-up counts as gate failure
        }
        if (sup >= cal.rho / 2) break;
      }
    }
    rep.measured_gap = sup;
    rep.gate_passed = sup < cal.rho / 2;
  }
  if (!rep.gate_passed) {
    rep.message = "hypothesis unmet: sampled flow gap reaches " + format_double(rep.measured_gap);
    return rep;
  }

  CubicalSet psi4 = compute_GT(f_psi, box, 4 * T, scheme);
  CubicalSet phi3 = compute_GT(f_phi, box, 3 * T, scheme);
  CubicalSet psi2 = compute_GT(f_psi, box, 2 * T, scheme);
  CubicalSet phi1 = compute_GT(f_phi, box, T, scheme);
  rep.set_sizes[0] = psi4.full_cells().size();
  rep.set_sizes[1] = phi3.full_cells().size();
  rep.set_sizes[2] = psi2.full_cells().size();
  rep.set_sizes[3] = phi1.full_cells().size();

  bool ok0 = included_with_slack(psi4, phi3, &rep.slack_cells[0]);
  bool ok1 = included_with_slack(phi3, psi2, &rep.slack_cells[1]);
  bool ok2 = included_with_slack(psi2, phi1, &rep.slack_cells[2]);
  rep.inclusions_hold = ok0 && ok1 && ok2;
  if (!rep.inclusions_hold) rep.message = "inclusion chain violated beyond one cell of slack";
  return rep;
}

GalerkinReport galerkin_continuation(const LSField& f, const GridBox& box, double T,
                                     const SampleScheme& scheme, int s_count) {
  for (std::size_t idx = 0; idx < f.model.levels.size(); ++idx) {
    LSField truncated = galerkin_truncate(f, int(idx));
    HomotopyFamily h = make_linear_homotopy(f, truncated, box);
    ContinuationReport rep = verify_isolating_along(h, box, s_count, T, scheme);
    if (rep.verdict) {
      GalerkinReport out;
      out.level_dimension = f.model.levels[idx];
      out.continuation = std::move(rep);
      return out;
    }
  }
  throw HypothesisError("galerkin_continuation: no admissible level in the ladder");
}

ReineckReport reineck_verify(const LSField& f, const GridBox& box, const GradientSpec& g,
                             const HomotopyFamily& h, double T, const SampleScheme& scheme,
                             const ShootOptions& opts) {
  if (!g.support_level && g.model.dim != f.model.dim)
    throw Error("reineck_verify: gradient must live on the field's model");
  LSField grad_flow = negative_gradient_field(g);
  {
    Rng rng(13);
    for (int s = 0; s < 8; ++s) {
      Vec x = rng.point_in_box(box.lower, box.upper);
      if (norm(h.f0(x) - f(x)) > 1e-8 || norm(h.f1(x) - grad_flow(x)) > 1e-8)
        throw Error("reineck_verify: homotopy does not connect the field to the gradient flow");
    }
  }
  ReineckReport rep;
  rep.continuation = verify_isolating_along(h, box, 11, T, scheme);
  rep.morse = local_morse_homology(g, box, opts);
  IndexPairBuild build = build_index_pair(f, box, T, scheme);
  rep.e_field = e_index(build.pair, f.model).dims;
  rep.tables_equal = rep.morse.same_table(rep.e_field) &&
                     rep.e_field.same_table(rep.continuation.e_end) &&
                     rep.continuation.endpoints_equal;
  return rep;
}

}  // namespace conley
