#include "conley/isolation.hpp"

#include <algorithm>
#include <limits>

namespace conley {

std::string SampleScheme::describe() const {
  return "corners+center step=" + format_double(step);
}

namespace {

struct ProbeResult {
  bool stays = true;
  bool fwd_exit = false;
};

void rk4_march(const LSField& f, Vec& x, double h) {
  static thread_local Vec k1, k2, k3, k4, tmp;
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

// One sample's classification data: forward march with boundary-proximity
// tracking, backward march for the stay flag only. Integration blow-ups
// count as exits.
ProbeResult probe_point(const LSField& f, const LSField& rev, const Vec& start,
                        const GridBox& box, double T, double step) {
  ProbeResult r;
  if (T <= 0) {
    r.fwd_exit = box.near_boundary(start);
    return r;
  }
  try {
    Vec x = start;
    if (box.near_boundary(x)) r.fwd_exit = true;
    double t = 0;
    while (t < T - 1e-15) {
      double h = std::min(step, T - t);
      rk4_march(f, x, h);
      t += h;
      if (!all_finite(x)) {
        r.stays = false;
        r.fwd_exit = true;
        return r;
      }
      if (!box.contains(x)) {
        r.stays = false;
        r.fwd_exit = true;
        break;
      }
      if (!r.fwd_exit && box.near_boundary(x)) r.fwd_exit = true;
    }
    if (r.stays) {
      x = start;
      t = 0;
      while (t < T - 1e-15) {
        double h = std::min(step, T - t);
        rk4_march(rev, x, h);
        t += h;
        if (!all_finite(x) || !box.contains(x)) {
          r.stays = false;
          break;
        }
      }
    }
  } catch (const Error&) {
    r.stays = false;
    r.fwd_exit = true;
  }
  return r;
}

LSField negate_field(const LSField& f) {
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

std::vector<std::size_t> CellClassification::stay_cells() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < kind.size(); ++i)
    if (kind[i] == CellKind::Stay) out.push_back(i);
  return out;
}

std::vector<std::size_t> CellClassification::pair_cells() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < kind.size(); ++i)
    if (kind[i] != CellKind::AllExit) out.push_back(i);
  return out;
}

std::vector<std::size_t> CellClassification::exit_cells() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < kind.size(); ++i)
    if (kind[i] != CellKind::AllExit && fwd_exit[i]) out.push_back(i);
  return out;
}

std::optional<int> CellClassification::boundary_margin_cells(bool include_straddle) const {
  std::optional<int> margin;
  for (std::size_t i = 0; i < kind.size(); ++i) {
    if (kind[i] == CellKind::AllExit) continue;
    if (!include_straddle && kind[i] != CellKind::Stay) continue;
    auto idx = grid.cell_multi_index(i);
    int m = 1 << 30;
    for (std::size_t a = 0; a < idx.size(); ++a)
      m = std::min({m, idx[a], grid.subdivisions[a] - 1 - idx[a]});
    margin = margin ? std::min(*margin, m) : m;
  }
  return margin;
}

CellClassification classify_cells(const LSField& f, const GridBox& box, double T,
                                  const SampleScheme& scheme) {
  box.validate();
  const int d = box.dim();
  const std::size_t ncells = box.cell_count();
  const std::size_t nverts = box.vertex_count();
  LSField rev = negate_field(f);

  // Each vertex is shared by up to 2^d cells; probe once.
  std::vector<std::uint8_t> vflags(nverts, 0);  // bit0 stays, bit1 fwd_exit
  parallel_chunks(nverts, scheme.threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t v = b; v < e; ++v) {
      Vec p = box.vertex_point(box.vertex_multi_index(v));
      ProbeResult r = probe_point(f, rev, p, box, T, scheme.step);
      vflags[v] = std::uint8_t((r.stays ? 1 : 0) | (r.fwd_exit ? 2 : 0));
    }
  });

  std::vector<std::uint8_t> cflags(ncells, 0);
  parallel_chunks(ncells, scheme.threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t c = b; c < e; ++c) {
      Vec p = box.cell_center(box.cell_multi_index(c));
      ProbeResult r = probe_point(f, rev, p, box, T, scheme.step);
      cflags[c] = std::uint8_t((r.stays ? 1 : 0) | (r.fwd_exit ? 2 : 0));
    }
  });

  CellClassification cls;
  cls.grid = box;
  cls.T = T;
  cls.kind.assign(ncells, CellKind::AllExit);
  cls.fwd_exit.assign(ncells, 0);
  std::vector<int> vidx(std::size_t(d), 0);
  for (std::size_t c = 0; c < ncells; ++c) {
    auto idx = box.cell_multi_index(c);
    bool all_stay = (cflags[c] & 1) != 0;
    bool any_stay = (cflags[c] & 1) != 0;
    bool any_fwd = (cflags[c] & 2) != 0;
    for (unsigned corner = 0; corner < (1u << d); ++corner) {
      for (int a = 0; a < d; ++a)
        vidx[std::size_t(a)] = idx[std::size_t(a)] + int((corner >> a) & 1);
      std::uint8_t fl = vflags[box.vertex_index(vidx)];
      all_stay = all_stay && (fl & 1);
      any_stay = any_stay || (fl & 1);
      any_fwd = any_fwd || (fl & 2);
    }
    cls.kind[c] = all_stay ? CellKind::Stay
                           : (any_stay ? CellKind::Straddle : CellKind::AllExit);
    cls.fwd_exit[c] = any_fwd ? 1 : 0;
  }
  return cls;
}

CubicalSet compute_GT(const LSField& f, const GridBox& box, double T,
                      const SampleScheme& scheme) {
  CellClassification cls = classify_cells(f, box, T, scheme);
  return cubical_from_grid_cells(box, cls.stay_cells());
}

CubicalSet compute_GT_in(const LSField& f, const GridBox& sampling_grid,
                         const std::function<bool(const Vec&)>& inside, double T,
                         const SampleScheme& scheme) {
  LSField rev = negate_field(f);
  const int d = sampling_grid.dim();
  const std::size_t ncells = sampling_grid.cell_count();

  auto point_stays = [&](const Vec& start) {
    if (!inside(start)) return false;
    try {
      Vec x = start;
      double t = 0;
      while (t < T - 1e-15) {
        double h = std::min(scheme.step, T - t);
        rk4_march(f, x, h);
        t += h;
        if (!all_finite(x) || !inside(x)) return false;
      }
      x = start;
      t = 0;
      while (t < T - 1e-15) {
        double h = std::min(scheme.step, T - t);
        rk4_march(rev, x, h);
        t += h;
        if (!all_finite(x) || !inside(x)) return false;
      }
    } catch (const Error&) {
      return false;
    }
    return true;
  };

  std::vector<std::uint8_t> stays(ncells, 0);
  parallel_chunks(ncells, scheme.threads, [&](std::size_t b, std::size_t e) {
    std::vector<int> vidx(std::size_t(d), 0);
    for (std::size_t c = b; c < e; ++c) {
      auto idx = sampling_grid.cell_multi_index(c);
      bool ok = point_stays(sampling_grid.cell_center(idx));
      for (unsigned corner = 0; ok && corner < (1u << d); ++corner) {
        for (int a = 0; a < d; ++a)
          vidx[std::size_t(a)] = idx[std::size_t(a)] + int((corner >> a) & 1);
        ok = point_stays(sampling_grid.vertex_point(vidx));
      }
      stays[c] = ok ? 1 : 0;
    }
  });

  std::vector<std::size_t> cells;
  for (std::size_t c = 0; c < ncells; ++c)
    if (stays[c]) cells.push_back(c);
  return cubical_from_grid_cells(sampling_grid, cells);
}

CubicalSet compute_GammaT(const LSField& f, const CubicalSet& candidate, const GridBox& box,
                          double T, const SampleScheme& scheme) {
  LSField rev = negate_field(f);
  std::vector<Cube> full = candidate.full_cells();
  std::vector<std::uint8_t> flagged(full.size(), 0);
  const int d = box.dim();
  parallel_chunks(full.size(), scheme.threads, [&](std::size_t b, std::size_t e) {
    std::vector<int> vidx(std::size_t(d), 0);
    for (std::size_t c = b; c < e; ++c) {
      std::vector<int> idx(full[c].lo.begin(), full[c].lo.end());
      bool any = probe_point(f, rev, box.cell_center(idx), box, T, scheme.step).fwd_exit;
      for (unsigned corner = 0; !any && corner < (1u << d); ++corner) {
        for (int a = 0; a < d; ++a)
          vidx[std::size_t(a)] = idx[std::size_t(a)] + int((corner >> a) & 1);
        any = probe_point(f, rev, box.vertex_point(vidx), box, T, scheme.step).fwd_exit;
      }
      flagged[c] = any ? 1 : 0;
    }
  });
  std::vector<std::size_t> cells;
  for (std::size_t c = 0; c < full.size(); ++c) {
    if (!flagged[c]) continue;
    std::vector<int> idx(full[c].lo.begin(), full[c].lo.end());
    cells.push_back(box.cell_index(idx));
  }
  return cubical_from_grid_cells(box, cells);
}

IndexPairCombinatorial make_index_pair(const GridBox& grid, const CubicalSet& n,
                                       const CubicalSet& l, double T) {
  if (!l.subset_of(n)) throw Error("index pair: L must be a subset of N");
  IndexPairCombinatorial p;
  p.grid = grid;
  p.N = n;
  p.L = l;
  p.T_used = T;
  p.sample_scheme = "manual";
  p.realize_N = CellRealization::from_cubical(grid, n);
  p.realize_L = CellRealization::from_cubical(grid, l);
  return p;
}

IndexPairBuild build_index_pair(const LSField& f, const GridBox& box, double T,
                                const SampleScheme& scheme) {
  CellClassification cls = classify_cells(f, box, T, scheme);
  std::vector<std::size_t> n_cells = cls.pair_cells();
  std::vector<std::size_t> l_cells = cls.exit_cells();

  // A pair cell on the box boundary that is not in the exit set leaves no
  // room for the exit set to separate the invariant part from the boundary.
  {
    std::vector<std::uint8_t> is_exit(cls.kind.size(), 0);
    for (std::size_t c : l_cells) is_exit[c] = 1;
    for (std::size_t c : n_cells) {
      if (is_exit[c]) continue;
      auto idx = box.cell_multi_index(c);
      for (std::size_t a = 0; a < idx.size(); ++a) {
        if (idx[a] == 0 || idx[a] == box.subdivisions[a] - 1)
          throw HypothesisError(
              "build_index_pair: isolation margin absent, horizon too small");
      }
    }
  }

  IndexPairBuild out;
  out.classification = cls;
  out.gt = cubical_from_grid_cells(box, cls.stay_cells());
  out.gamma = cubical_from_grid_cells(box, l_cells);
  CubicalSet n = cubical_from_grid_cells(box, n_cells);
  out.pair = make_index_pair(box, n, out.gamma, T);
  out.pair.sample_scheme = scheme.describe();
  return out;
}

IndexPairBuild build_index_pair_auto(const LSField& f, const GridBox& box, double T,
                                     const SampleScheme& scheme) {
  if (T > 0) return build_index_pair(f, box, T, scheme);
  for (double t : {1.0, 2.0, 4.0, 8.0}) {
    CellClassification cls = classify_cells(f, box, t, scheme);
    auto margin = cls.boundary_margin_cells(true);
    if (!margin || *margin >= 1) return build_index_pair(f, box, t, scheme);
  }
  throw HypothesisError("build_index_pair: no horizon in the ladder isolates");
}

IndexPairReport verify_index_pair(const LSField& f, const IndexPairCombinatorial& pair,
                                  int samples, const SampleScheme& scheme,
                                  std::uint64_t seed) {
  IndexPairReport rep;
  Rng rng(seed);
  std::vector<Cube> l_cells = pair.L.full_cells();
  std::vector<Cube> n_cells;
  for (const Cube& c : pair.N.full_cells())
    if (!pair.L.contains(c)) n_cells.push_back(c);

  auto sample_in_cell = [&](const Cube& c) {
    std::vector<int> idx(c.lo.begin(), c.lo.end());
    Vec lo, hi;
    pair.grid.cell_bounds(idx, lo, hi);
    return rng.point_in_box(lo, hi);
  };

  const double horizon = std::max(1.0, 4 * pair.T_used);

  // (a) positive invariance of L relative to N.
  if (!l_cells.empty()) {
    for (int s = 0; s < samples; ++s) {
      const Cube& c = l_cells[std::size_t(rng.next() % l_cells.size())];
      Vec x = sample_in_cell(c);
      ++rep.samples_checked;
      try {
        double t = 0;
        Vec p = x;
        bool bad = false;
        while (t < horizon) {
          p = flow_map(f, p, scheme.step, scheme.step);
          t += scheme.step;
          if (!pair.point_in_N(p)) break;
          if (!pair.point_in_L(p)) {
            bad = true;
            break;
          }
        }
        if (bad) {
          ++rep.invariance_violations;
          if (rep.witnesses.size() < 16) rep.witnesses.push_back({"invariance", x});
        }
      } catch (const Error&) {
        // Orbit blow-up after leaving N is not a pair violation.
      }
    }
  }

  // (b) orbits leaving N pass through L; (c) long stays are interior.
  if (!n_cells.empty()) {
    for (int s = 0; s < samples; ++s) {
      const Cube& c = n_cells[std::size_t(rng.next() % n_cells.size())];
      Vec x = sample_in_cell(c);
      if (!pair.point_in_pair_interior(x)) continue;
      ++rep.samples_checked;
      try {
        double t = 0;
        Vec p = x;
        Vec last_inside = x;
        bool left = false;
        while (t < horizon) {
          p = flow_map(f, p, scheme.step, scheme.step);
          t += scheme.step;
          if (!pair.point_in_N(p)) {
            left = true;
            break;
          }
          last_inside = p;
        }
        if (left) {
          if (!pair.point_in_L(last_inside)) {
            // Refine: walk the final step in quarters looking for L.
            bool through_l = false;
            Vec q = last_inside;
            for (int k = 0; k < 8 && !through_l; ++k) {
              q = flow_map(f, q, scheme.step / 8, scheme.step / 8);
              if (pair.point_in_L(q)) through_l = true;
              if (!pair.point_in_N(q)) break;
            }
            if (!through_l) {
              ++rep.exit_violations;
              if (rep.witnesses.size() < 16) rep.witnesses.push_back({"exit", x});
            }
          }
        } else {
          // Whole forward window stayed; check backward too, then interiority.
          bool stays_both = true;
          Vec q = x;
          double tb = 0;
          while (tb < horizon) {
            q = flow_map(f, q, -scheme.step, scheme.step);
            tb += scheme.step;
            if (!pair.point_in_pair_interior(q)) {
              stays_both = false;
              break;
            }
          }
          if (stays_both) {
            double dist = pair.grid.boundary_distance(x);
            if (dist <= 0) {
              ++rep.interior_violations;
              if (rep.witnesses.size() < 16) rep.witnesses.push_back({"interior", x});
            }
          }
        }
      } catch (const Error&) {
      }
    }
  }
  return rep;
}

double exit_time(const LSField& f, const IndexPairCombinatorial& pair, const Vec& x,
                 double cap, const SampleScheme& scheme) {
  if (!pair.point_in_N(x)) throw Error("exit_time: point not in N");
  if (pair.point_in_L(x)) return 0.0;
  auto outside = [&](const Vec& p) {
    return !pair.point_in_N(p) || pair.point_in_L(p);
  };
  Vec p = x;
  double t = 0;
  while (t < cap) {
    Vec next = flow_map(f, p, scheme.step, scheme.step);
    if (outside(next)) {
      double lo = 0, hi = scheme.step;
      while (hi - lo > scheme.step / 16) {
        double mid = 0.5 * (lo + hi);
        Vec probe = flow_map(f, p, mid, scheme.step);
        if (outside(probe))
          hi = mid;
        else
          lo = mid;
      }
      return t + hi;
    }
    p = next;
    t += scheme.step;
  }
  return std::numeric_limits<double>::infinity();
}

RegularityReport probe_regularity(const LSField& f, const IndexPairCombinatorial& pair,
                                  const SampleScheme& scheme, double cap) {
  RegularityReport rep;
  std::map<std::vector<int>, double> tau;
  for (const Cube& c : pair.N.full_cells()) {
    if (pair.L.contains(c)) continue;
    std::vector<int> idx(c.lo.begin(), c.lo.end());
    Vec center = pair.grid.cell_center(idx);
    if (!pair.point_in_pair_interior(center)) continue;
    tau[idx] = exit_time(f, pair, center, cap, scheme);
  }
  for (const auto& [idx, t] : tau) {
    if (!std::isfinite(t)) continue;
    for (std::size_t a = 0; a < idx.size(); ++a) {
      std::vector<int> nb = idx;
      nb[a] += 1;
      auto it = tau.find(nb);
      if (it == tau.end() || !std::isfinite(it->second)) continue;
      Vec center = pair.grid.cell_center(idx);
      double speed = norm(f(center));
      if (speed < 1e-12) continue;
      double crossing = pair.grid.width(int(a)) / speed;
      double gap = std::fabs(t - it->second) / crossing;
      rep.worst_gap = std::max(rep.worst_gap, gap);
      if (gap > 10) {
        ++rep.jump_pairs;
        rep.regular = false;
      }
    }
  }
  return rep;
}

IsolationCalibration calibrate_isolation(const LSField& f, const GridBox& box,
                                         const SampleScheme& scheme) {
  IsolationCalibration cal;

  // First isolating horizon: every cell holding a staying sample keeps at
  // least one cell of margin from the box boundary.
  double t_iso = 0;
  for (double t : {1.0, 2.0, 4.0, 8.0, 16.0}) {
    CellClassification cls = classify_cells(f, box, t, scheme);
    auto margin = cls.boundary_margin_cells(true);
    if (!margin || *margin >= 1) {
      t_iso = t;
      break;
    }
  }
  if (t_iso == 0) throw HypothesisError("calibrate_isolation: not isolating");
  cal.T0 = 2 * t_iso;

  // epsilon0 from the stay-cell enclosure of the invariant set at T0.
  CellClassification at_t0 = classify_cells(f, box, cal.T0, scheme);
  double enclosure_dist = 1e300;
  bool have_stay = false;
  Vec lo, hi;
  for (std::size_t c : at_t0.stay_cells()) {
    have_stay = true;
    box.cell_bounds(box.cell_multi_index(c), lo, hi);
    for (std::size_t a = 0; a < lo.size(); ++a) {
      enclosure_dist = std::min(enclosure_dist, lo[a] - box.lower[a]);
      enclosure_dist = std::min(enclosure_dist, box.upper[a] - hi[a]);
    }
  }
  if (!have_stay) {
    // Empty enclosure: the invariant set is (empirically) empty and any
    // positive constant works; take half the inradius.
    enclosure_dist = 1e300;
    for (std::size_t a = 0; a < box.lower.size(); ++a)
      enclosure_dist = std::min(enclosure_dist, 0.5 * (box.upper[a] - box.lower[a]));
  }
  cal.epsilon0 = 0.5 * enclosure_dist;

  auto inflated_interior = [&](double rho, double T) {
    GridBox grid_rho = box.inflated(rho);
    CubicalSet gt = compute_GT(f, grid_rho, T, scheme);
    Vec clo, chi;
    for (const Cube& c : gt.full_cells()) {
      std::vector<int> idx(c.lo.begin(), c.lo.end());
      grid_rho.cell_bounds(idx, clo, chi);
      for (std::size_t a = 0; a < clo.size(); ++a)
        if (clo[a] <= box.lower[a] || chi[a] >= box.upper[a]) return false;
    }
    return true;
  };

  cal.rho = 0;
  for (double rho : {cal.epsilon0 / 2, cal.epsilon0 / 4, cal.epsilon0 / 8}) {
    if (inflated_interior(rho, cal.T0)) {
      cal.rho = rho;
      break;
    }
  }
  if (cal.rho == 0)
    throw HypothesisError("calibrate_isolation: no admissible rho at this resolution");

  cal.T = 0;
  for (double t : {cal.T0, 2 * cal.T0, 4 * cal.T0}) {
    if (inflated_interior(cal.rho, t)) {
      cal.T = t;
      break;
    }
  }
  if (cal.T == 0)
    throw HypothesisError("calibrate_isolation: inflated stay set never interior");
  return cal;
}

}  // namespace conley
