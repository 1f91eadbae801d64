#include "conley/conley_index.hpp"

#include <algorithm>

namespace conley {

GradedDims classical_index(const IndexPairCombinatorial& pair) {
  if (pair.N.empty()) return {};
  return homology_dims(relative_pair_complex(pair.N, pair.L));
}

EIndex e_index(const IndexPairCombinatorial& pair, const SplitModel& model) {
  EIndex e;
  e.d_minus = model.minus_count();
  e.dims = classical_index(pair).shifted(-e.d_minus);
  return e;
}

bool nontriviality_check(const EIndex& e) { return e.dims.nonzero(); }

int e_dimension(const std::vector<int>& axes, const SplitModel& model) {
  std::vector<bool> in_v(std::size_t(model.dim), false);
  for (int a : axes) {
    if (a < 0 || a >= model.dim) throw Error("e_dimension: axis out of range");
    in_v[std::size_t(a)] = true;
  }
  int dim_v_cap_plus = 0;
  int minus_outside_v = 0;
  for (int i = 0; i < model.dim; ++i) {
    bool neg = model.spectrum[std::size_t(i)] < 0;
    if (in_v[std::size_t(i)] && !neg) ++dim_v_cap_plus;
    if (!in_v[std::size_t(i)] && neg) ++minus_outside_v;
  }
  return dim_v_cap_plus - minus_outside_v;
}

EDimensionRecord e_cohomology_limit(const LevelFamily& fam) {
  const std::size_t nlev = fam.levels.size();
  if (nlev < 3) throw Error("e_cohomology_limit: need at least 3 levels");
  if (fam.axes.size() != nlev - 1) throw Error("e_cohomology_limit: axis count mismatch");
  for (std::size_t j = 0; j + 1 < nlev; ++j) {
    if (fam.levels[j + 1].v_dim != fam.levels[j].v_dim + 1)
      throw Error("e_cohomology_limit: consecutive levels must differ by one dimension");
  }

  EDimensionRecord rec;
  rec.levels.resize(nlev);

  // Connecting maps between consecutive levels, each asserted exact.
  std::vector<MvConnecting> links;
  links.reserve(nlev - 1);
  for (std::size_t j = 0; j + 1 < nlev; ++j) {
    const CubicalSet& upper = fam.levels[j + 1].set;
    const CubicalSet& lower = fam.levels[j].set;
    if (!upper.empty() || !lower.empty()) {
      CubicalSet sl = upper.slice(fam.axes[j], 0);
      CubicalSet lower_embedded =
          lower.ambient == upper.ambient ? lower : lower.embedded(upper.ambient);
      if (!(sl.cells == lower_embedded.cells))
        throw Error("e_cohomology_limit: level is not the slice of its successor");
    }
    MvConnecting mv = mv_connecting(
        fam.levels[j + 1].set.empty() ? CubicalSet(std::max(1, fam.levels[j + 1].set.ambient))
                                      : fam.levels[j + 1].set,
        fam.levels[j + 1].set.empty() ? 0 : fam.axes[j]);
    if (!mv.exact()) throw Error("e_cohomology_limit: Mayer-Vietoris exactness failed");
    rec.levels[j].delta_rank.clear();
    for (auto& [k, m] : mv.delta) rec.levels[j].delta_rank[k] = rank_z2(m);
    links.push_back(std::move(mv));
  }

  for (std::size_t j = 0; j < nlev; ++j) {
    rec.levels[j].v_dim = fam.levels[j].v_dim;
    rec.levels[j].cohomology =
        fam.levels[j].set.empty()
            ? GradedDims{}
            : cohomology_dims(chain_complex(fam.levels[j].set));
  }

  // Grade window covering all levels.
  int qmin = 0, qmax = 0;
  for (std::size_t j = 0; j < nlev; ++j) {
    int v = fam.levels[j].v_dim;
    qmin = std::min(qmin, -v - 1);
    int top = fam.levels[j].set.empty() ? 0 : fam.levels[j].set.top_dimension();
    qmax = std::max(qmax, top - v + 1);
  }

  for (int q = qmin; q <= qmax; ++q) {
    // Composite of the connecting maps from level j into the top level.
    // links[t].delta maps slice degree k -> whole degree k+1 where the slice
    // is level t and the whole is level t+1.
    auto delta_at = [&](std::size_t t) -> Z2Matrix {
      int k = q + fam.levels[t].v_dim;
      auto it = links[t].delta.find(k);
      if (it != links[t].delta.end()) return it->second;
      std::size_t rows = rec.levels[t + 1].cohomology.at(k + 1);
      std::size_t cols = rec.levels[t].cohomology.at(k);
      return Z2Matrix(rows, cols);
    };
    std::size_t rank_from_second_last;  // single map J-2 -> J-1
    std::size_t rank_from_third_last;   // composite J-3 -> J-1
    {
      Z2Matrix m = delta_at(nlev - 2);
      rank_from_second_last = rank_z2(m);
      Z2Matrix comp = multiply(m, delta_at(nlev - 3));
      rank_from_third_last = rank_z2(comp);
    }
    if (rank_from_second_last != rank_from_third_last)
      throw HypothesisError("e_cohomology_limit: no plateau at grade q=" +
                            std::to_string(q) + " (family too short)");
    rec.limit.set(q, rank_from_second_last);
  }
  return rec;
}

LevelFamily sphere_level_family(int p) {
  if (p < 0 || p > 2) throw Error("sphere_level_family: p must be in {0, 1, 2}");
  // Boundary sphere of the block [-1, 1]^k, embedded in a common ambient
  // space with the unused axes pinned at 0. The slice of each sphere along
  // its last active axis is the next lower sphere.
  auto sphere = [](int k, int ambient) {
    CubicalSet s(ambient);
    if (k == 0) return s;  // empty
    std::vector<Cube> block;
    // All full cells of the 2^k block with corners in {-1, 0, 1}.
    int ncells = 1 << k;
    for (int c = 0; c < ncells; ++c) {
      std::vector<int> cello(std::size_t(ambient), 0);
      for (int a = 0; a < k; ++a) cello[std::size_t(a)] = ((c >> a) & 1) ? 0 : -1;
      Cube cube;
      cube.lo = cello;
      cube.extent = (1u << k) - 1u;
      block.push_back(cube);
    }
    CubicalSet closed = CubicalSet::from_cells(ambient, block);
    for (const Cube& c : closed.cells) {
      bool on_boundary = false;
      for (int a = 0; a < k; ++a) {
        if (c.lo[std::size_t(a)] == c.hi(a) && std::abs(c.lo[std::size_t(a)]) == 1)
          on_boundary = true;
      }
      if (on_boundary) s.cells.insert(c);
    }
    return s;
  };

  // Sphere dimension at level v is p - 1 + v, i.e. block dimension p + v.
  LevelFamily fam;
  int v0 = p == 0 ? 1 : 0;  // start at the first nonempty sphere
  int levels = 3;
  int ambient = p + v0 + levels - 1;  // block dimension of the top level
  for (int j = 0; j < levels; ++j) {
    int v = v0 + j;
    LevelFamily::Level lvl;
    lvl.v_dim = v;
    lvl.set = sphere(p + v, ambient);
    fam.levels.push_back(std::move(lvl));
    if (j > 0) fam.axes.push_back(p + v - 1);  // newest block axis
  }
  return fam;
}

LSField suspend_field(const LSField& f, double new_spectrum_entry) {
  if (new_spectrum_entry >= 0)
    throw Error("suspend_field: the appended spectrum entry must be negative");
  LSField s;
  SplitModel m = f.model;
  m.dim += 1;
  m.spectrum.push_back(new_spectrum_entry);
  m.levels.push_back(m.dim);
  s.model = std::move(m);
  s.linear = f.linear;
  s.linear.push_back(-new_spectrum_entry);
  if (f.nonlinearity) {
    VectorMap k = f.nonlinearity;
    s.nonlinearity = [k](const Vec& z) {
      Vec x(z.begin(), z.end() - 1);
      Vec v = k(x);
      v.push_back(0.0);
      return v;
    };
  }
  return s;
}

GradientSpec suspend_gradient(const GradientSpec& g, double new_spectrum_entry) {
  if (new_spectrum_entry >= 0)
    throw Error("suspend_gradient: the appended spectrum entry must be negative");
  GradientSpec s;
  SplitModel m = g.model;
  m.dim += 1;
  m.spectrum.push_back(new_spectrum_entry);
  m.levels.push_back(m.dim);
  s.model = std::move(m);
  const int d = g.model.dim;
  const double entry = new_spectrum_entry;
  GradientSpec base = g;
  if (base.b)
    s.b = [base](const Vec& z) { return base.b(Vec(z.begin(), z.end() - 1)); };
  s.grad_b = [base](const Vec& z) {
    Vec x(z.begin(), z.end() - 1);
    Vec gb = base.gradient(x);
    for (int i = 0; i < base.model.dim; ++i)
      gb[std::size_t(i)] -= base.model.spectrum[std::size_t(i)] * x[std::size_t(i)];
    gb.push_back(0.0);
    return gb;
  };
  s.hess = [base, d, entry](const Vec& z) {
    Vec x(z.begin(), z.end() - 1);
    DMatrix h = base.hessian(x);
    DMatrix out(d + 1, d + 1);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) out(i, j) = h(i, j);
    out(d, d) = entry;
    return out;
  };
  if (!g.metric_diag.empty()) {
    s.metric_diag = g.metric_diag;
    s.metric_diag.push_back(1.0);
  }
  return s;
}

GridBox suspend_box(const GridBox& box, int subdivisions, double lo, double hi) {
  GridBox b = box;
  b.lower.push_back(lo);
  b.upper.push_back(hi);
  b.subdivisions.push_back(subdivisions);
  return b;
}

SuspensionReport suspension_check(const LSField& f, const GridBox& box, double T,
                                  const SampleScheme& scheme, int new_axis_subdivisions) {
  SuspensionReport rep;
  IndexPairBuild base = build_index_pair(f, box, T, scheme);
  rep.classical_base = classical_index(base.pair);
  rep.e_base = e_index(base.pair, f.model).dims;

  LSField sf = suspend_field(f);
  GridBox sbox = suspend_box(box, new_axis_subdivisions);
  IndexPairBuild susp = build_index_pair(sf, sbox, T, scheme);
  rep.classical_suspended = classical_index(susp.pair);
  rep.e_suspended = e_index(susp.pair, sf.model).dims;

  rep.classical_shift_ok =
      rep.classical_suspended.same_table(rep.classical_base.shifted(1));
  rep.e_tables_equal = rep.e_suspended.same_table(rep.e_base);
  return rep;
}

}  // namespace conley
