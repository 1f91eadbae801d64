#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "conley/catalog.hpp"
#include "conley/conley_index.hpp"

using namespace conley;

TEST_CASE("classical index of the catalog pairs") {
  SampleScheme scheme;
  CatalogSystem saddle = catalog_system("saddle2d");
  IndexPairBuild sp = build_index_pair(saddle.field, saddle.box, 3.0, scheme);
  GradedDims cs = classical_index(sp.pair);
  CHECK(cs.at(1) == 1);
  CHECK(cs.dims.size() == 1);

  CatalogSystem attract = catalog_system("contract1d");
  IndexPairBuild ap = build_index_pair(attract.field, attract.box, 2.0, scheme);
  GradedDims ca = classical_index(ap.pair);
  CHECK(ca.at(0) == 1);
  CHECK(ca.dims.size() == 1);

  // Empty pair.
  IndexPairCombinatorial empty =
      make_index_pair(saddle.box, CubicalSet(2), CubicalSet(2), 1.0);
  CHECK(!classical_index(empty).nonzero());
}

TEST_CASE("shifted grading re-indexes the classical table") {
  SampleScheme scheme;
  CatalogSystem saddle = catalog_system("saddle2d");
  IndexPairBuild sp = build_index_pair(saddle.field, saddle.box, 3.0, scheme);
  GradedDims classical = classical_index(sp.pair);
  EIndex e = e_index(sp.pair, saddle.field.model);
  CHECK(e.d_minus == 1);
  CHECK(e.dims.offset == -1);
  for (int q = -4; q <= 4; ++q) CHECK(e.dims.at(q) == classical.at(q + e.d_minus));
  CHECK(e.dims.at(0) == 1);

  // Fully unstable linear point: two expanding directions for the flow.
  SplitModel m = make_model({-1.0, -1.0});
  GradientSpec g = make_gradient(m, nullptr);
  LSField f = negative_gradient_field(g);
  GridBox box;
  box.lower = {-1, -1};
  box.upper = {1, 1};
  box.subdivisions = {32, 32};
  IndexPairBuild bp = build_index_pair(f, box, 2.0, scheme);
  GradedDims c2 = classical_index(bp.pair);
  CHECK(c2.at(2) == 1);
  CHECK(c2.dims.size() == 1);
  EIndex e2 = e_index(bp.pair, m);
  CHECK(e2.dims.at(0) == 1);
}

TEST_CASE("nontriviality flag") {
  EIndex a;
  a.dims.set(0, 1);
  CHECK(nontriviality_check(a));
  EIndex b;
  CHECK(!nontriviality_check(b));
}

TEST_CASE("index tables agree across admissible horizons") {
  SampleScheme scheme;
  CatalogSystem saddle = catalog_system("saddle2d");
  EIndex e2 = e_index(build_index_pair(saddle.field, saddle.box, 2.0, scheme).pair,
                      saddle.field.model);
  EIndex e3 = e_index(build_index_pair(saddle.field, saddle.box, 3.0, scheme).pair,
                      saddle.field.model);
  CHECK(e2.dims.same_table(e3.dims));
}

TEST_CASE("subspace dimension bookkeeping") {
  SplitModel m = make_model({1.0, 1.0, -1.0});
  CHECK(e_dimension({0, 1, 2}, m) == 2);
  CHECK(e_dimension({2}, m) == 0);
  CHECK(e_dimension({}, m) == -1);
}

TEST_CASE("sphere families hit the dimension axiom") {
  for (int p = 0; p <= 2; ++p) {
    LevelFamily fam = sphere_level_family(p);
    REQUIRE(fam.levels.size() == 3);
    EDimensionRecord rec = e_cohomology_limit(fam);
    CHECK(rec.limit.at(p - 1) == 1);
    CHECK(rec.limit.dims.size() == 1);
  }
}

TEST_CASE("empty families have zero limits") {
  LevelFamily fam;
  for (int j = 0; j < 3; ++j) {
    LevelFamily::Level lvl;
    lvl.v_dim = j;
    lvl.set = CubicalSet(3);
    fam.levels.push_back(lvl);
    if (j) fam.axes.push_back(j);
  }
  EDimensionRecord rec = e_cohomology_limit(fam);
  CHECK(!rec.limit.nonzero());
}

TEST_CASE("families need at least three levels") {
  LevelFamily fam = sphere_level_family(1);
  fam.levels.pop_back();
  fam.axes.pop_back();
  CHECK_THROWS_AS(e_cohomology_limit(fam), Error);
}

TEST_CASE("suspension of the expanding line") {
  CatalogSystem sys = catalog_system("expand1d");
  SampleScheme scheme;
  GridBox box = sys.box;
  SuspensionReport rep = suspension_check(sys.field, box, 2.0, scheme, 32);
  CHECK(rep.classical_base.at(1) == 1);
  CHECK(rep.classical_suspended.at(2) == 1);
  CHECK(rep.classical_shift_ok);
  CHECK(rep.e_tables_equal);
  CHECK(rep.e_base.at(0) == 1);
}

TEST_CASE("suspending an empty index keeps it empty") {
  CatalogSystem sys = catalog_system("expand1d");
  GridBox off;
  off.lower = {0.2};
  off.upper = {1.0};
  off.subdivisions = {64};
  SampleScheme scheme;
  SuspensionReport rep = suspension_check(sys.field, off, 2.0, scheme, 16);
  CHECK(!rep.classical_base.nonzero());
  CHECK(!rep.classical_suspended.nonzero());
  CHECK(rep.ok());
}

TEST_CASE("suspended fields expand along the appended axis") {
  CatalogSystem sys = catalog_system("saddle2d");
  LSField s = suspend_field(sys.field);
  CHECK(s.model.dim == 3);
  CHECK(s.model.spectrum.back() == -1.0);
  CHECK(s.linear.back() == 1.0);
  Vec v = s({0.0, 0.0, 0.5});
  CHECK(v[2] == doctest::Approx(0.5));
  CHECK(s.model.minus_count() == sys.field.model.minus_count() + 1);
}

TEST_CASE("suspension invariance across the remaining catalog flows") {
  SampleScheme scheme;
  CatalogSystem c = catalog_system("contract1d");
  SuspensionReport rep = suspension_check(c.field, c.box, 2.0, scheme, 32);
  CHECK(rep.classical_base.at(0) == 1);
  CHECK(rep.classical_suspended.at(1) == 1);
  CHECK(rep.ok());
}

TEST_CASE("suspended catalog systems carry the shifted tables of their base") {
  SampleScheme scheme;
  for (const char* name : {"saddle2d-suspended", "doublewell-suspended"}) {
    CatalogSystem sys = catalog_system(name);
    IndexPairBuild build = build_index_pair(sys.field, sys.box, sys.T, scheme);
    GradedDims classical = classical_index(build.pair);
    CHECK(classical.at(2) == 1);
    CHECK(classical.dims.size() == 1);
    EIndex e = e_index(build.pair, sys.field.model);
    CHECK(e.dims.at(0) == 1);
    CHECK(e.d_minus == 2);
  }
}

TEST_CASE("pair products realize the degree shift algebraically") {
  // Cells of a product pair are products of cells; the relative homology of
  // (N1 x N2, L1 x N2 + N1 x L2) multiplies the factors' tables. Two copies
  // of the expanding-line pair give a single class in degree two, matching
  // the dynamically computed pair of the doubly expanding plane.
  SampleScheme scheme;
  CatalogSystem e1 = catalog_system("expand1d");
  IndexPairBuild b = build_index_pair(e1.field, e1.box, 2.0, scheme);

  auto product = [](const CubicalSet& a, const CubicalSet& c) {
    CubicalSet out(a.ambient + c.ambient);
    for (const Cube& ca : a.cells)
      for (const Cube& cc : c.cells) {
        Cube p;
        p.lo = ca.lo;
        p.lo.insert(p.lo.end(), cc.lo.begin(), cc.lo.end());
        p.extent = ca.extent | (cc.extent << a.ambient);
        out.cells.insert(p);
      }
    return out;
  };
  CubicalSet n = product(b.pair.N, b.pair.N);
  CubicalSet l = product(b.pair.L, b.pair.N).union_with(product(b.pair.N, b.pair.L));
  GradedDims rel = homology_dims(relative_pair_complex(n, l));
  CHECK(rel.at(2) == 1);
  CHECK(rel.dims.size() == 1);

  SplitModel m = make_model({-1.0, -1.0});
  GradientSpec g = make_gradient(m, nullptr);
  LSField f = negative_gradient_field(g);
  GridBox box;
  box.lower = {-1, -1};
  box.upper = {1, 1};
  box.subdivisions = {32, 32};
  GradedDims dynamic = classical_index(build_index_pair(f, box, 2.0, scheme).pair);
  CHECK(dynamic.same_table(rel));
}

TEST_CASE("suspension helpers reject non-negative appended entries") {
  CatalogSystem sys = catalog_system("saddle2d");
  CHECK_THROWS_AS(suspend_field(sys.field, 1.0), Error);
  CHECK_THROWS_AS(sphere_level_family(3), Error);
}

namespace {

CubicalSet shifted_boundary_sphere(int k, int ambient, int offset) {
  // Boundary sphere of a block shifted along axis 1, so shifted copies miss
  // the axis-1 slicing plane while still slicing correctly along later axes.
  std::vector<Cube> block;
  for (int c = 0; c < (1 << k); ++c) {
    std::vector<int> lo(std::size_t(ambient), 0);
    for (int a = 0; a < k; ++a)
      lo[std::size_t(a)] = (((c >> a) & 1) ? 0 : -1) + (a == 1 ? offset : 0);
    Cube cube;
    cube.lo = lo;
    cube.extent = (1u << k) - 1u;
    block.push_back(cube);
  }
  CubicalSet closed = CubicalSet::from_cells(ambient, block);
  CubicalSet s(ambient);
  for (const Cube& c : closed.cells)
    for (int a = 0; a < k; ++a) {
      int base = a == 1 ? offset : 0;
      if (c.lo[std::size_t(a)] == c.hi(a) && std::abs(c.lo[std::size_t(a)] - base) == 1) {
        s.cells.insert(c);
        break;
      }
    }
  return s;
}

}  // namespace

TEST_CASE("families whose ranks keep changing at the top are rejected") {
  // A second sphere enters only at the top two levels: its classes cannot
  // be traced back, so the composite ranks into the top level disagree.
  const int ambient = 3;
  CubicalSet s0 = shifted_boundary_sphere(1, ambient, 0);  // two points
  CubicalSet s1 = shifted_boundary_sphere(2, ambient, 0);  // circle
  CubicalSet extra_circle = shifted_boundary_sphere(2, ambient, 6);
  CubicalSet s2 = shifted_boundary_sphere(3, ambient, 0);  // sphere
  CubicalSet extra_sphere = shifted_boundary_sphere(3, ambient, 6);

  LevelFamily fam;
  fam.levels.push_back({0, s0});
  fam.levels.push_back({1, s1.union_with(extra_circle)});
  fam.levels.push_back({2, s2.union_with(extra_sphere)});
  fam.axes = {1, 2};
  CHECK_THROWS_AS(e_cohomology_limit(fam), HypothesisError);
}
