#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "conley/conley_index.hpp"
#include "conley/mayer_vietoris.hpp"
#include "oracles.hpp"

using namespace conley;

namespace {

CubicalSet boundary_sphere(int k, int ambient) {
  // Boundary of the block [-1,1]^k embedded with trailing axes at 0.
  std::vector<Cube> block;
  for (int c = 0; c < (1 << k); ++c) {
    std::vector<int> lo(std::size_t(ambient), 0);
    for (int a = 0; a < k; ++a) lo[std::size_t(a)] = ((c >> a) & 1) ? 0 : -1;
    Cube cube;
    cube.lo = lo;
    cube.extent = (1u << k) - 1u;
    block.push_back(cube);
  }
  CubicalSet closed = CubicalSet::from_cells(ambient, block);
  CubicalSet s(ambient);
  for (const Cube& c : closed.cells) {
    for (int a = 0; a < k; ++a)
      if (c.lo[std::size_t(a)] == c.hi(a) && std::abs(c.lo[std::size_t(a)]) == 1) {
        s.cells.insert(c);
        break;
      }
  }
  return s;
}

}  // namespace

TEST_CASE("cube faces and closure") {
  Cube sq = full_cube({0, 0});
  CHECK(sq.dimension() == 2);
  CHECK(sq.facets().size() == 4);
  CHECK(sq.all_faces().size() == 9);
  CubicalSet s = CubicalSet::from_cells(2, {sq});
  CHECK(s.cells.size() == 9);
  // Face-closure: every facet of every cell is present.
  for (const Cube& c : s.cells)
    for (const Cube& f : c.facets()) CHECK(s.contains(f));
}

TEST_CASE("relative pair complexes") {
  Cube e;
  e.lo = {0};
  e.extent = 1;
  CubicalSet x = CubicalSet::from_cells(1, {e});
  CubicalSet ends = CubicalSet::from_cells(1, {vertex_cube({0}), vertex_cube({1})});

  GradedDims rel = homology_dims(relative_pair_complex(x, ends));
  CHECK(rel.at(1) == 1);
  CHECK(rel.dims.size() == 1);

  GradedDims self = homology_dims(relative_pair_complex(x, x));
  CHECK(!self.nonzero());

  CubicalSet square = CubicalSet::from_cells(2, {full_cube({0, 0})});
  CubicalSet ring(2);
  for (const Cube& c : square.cells)
    if (c.dimension() < 2) ring.cells.insert(c);
  GradedDims relsq = homology_dims(relative_pair_complex(square, ring));
  CHECK(relsq.at(2) == 1);
  CHECK(relsq.dims.size() == 1);

  CubicalSet outside = CubicalSet::from_cells(1, {vertex_cube({5})});
  CHECK_THROWS_AS(relative_pair_complex(x, outside), Error);
}

TEST_CASE("serialization round trip") {
  Rng rng(55);
  for (int trial = 0; trial < 10; ++trial) {
    int dim = 1 + int(rng.next() % 3);
    std::vector<Cube> cells;
    for (int c = 0; c < 3; ++c) {
      std::vector<int> lo;
      for (int a = 0; a < dim; ++a) lo.push_back(int(rng.next() % 5) - 2);
      cells.push_back(full_cube(lo));
    }
    CubicalSet s = CubicalSet::from_cells(dim, cells);
    CubicalSet t = parse_cells(serialize_cells(s, "meta line"));
    CHECK(s.cells == t.cells);
  }
  CHECK(parse_cells("").empty());
}

TEST_CASE("connecting map of a split circle") {
  CubicalSet circle = boundary_sphere(2, 2);
  MvConnecting mv = mv_connecting(circle, 0);
  // Slice: two points; hemispheres: contractible arcs.
  CHECK(mv.dims_slice.at(0) == 2);
  CHECK(mv.dims_pos.at(0) == 1);
  CHECK(mv.dims_neg.at(0) == 1);
  CHECK(mv.delta_rank(0) == 1);
  CHECK(mv.exact());
}

TEST_CASE("connecting map of a split sphere") {
  CubicalSet sphere = boundary_sphere(3, 3);
  GradedDims hs = cohomology_dims(chain_complex(sphere));
  CHECK(hs.at(0) == 1);
  CHECK(hs.at(2) == 1);
  MvConnecting mv = mv_connecting(sphere, 2);
  CHECK(mv.dims_slice.at(1) == 1);  // equatorial circle
  CHECK(mv.delta_rank(1) == 1);
  CHECK(mv.exact());
}

TEST_CASE("empty split yields empty matrices") {
  CubicalSet empty(3);
  MvConnecting mv = mv_connecting(empty, 0);
  CHECK(mv.delta.empty());
  CHECK(mv.exact());
}

TEST_CASE("orientation flip leaves the connecting matrices unchanged") {
  for (int k : {2, 3}) {
    CubicalSet sphere = boundary_sphere(k, k);
    MvConnecting a = mv_connecting(sphere, k - 1, 0, false);
    MvConnecting b = mv_connecting(sphere, k - 1, 0, true);
    REQUIRE(a.delta.size() == b.delta.size());
    for (auto& [deg, m] : a.delta) CHECK(m == b.delta.at(deg));
  }
}

TEST_CASE("exactness identity on random admissible splits") {
  Rng rng(91);
  int checked = 0;
  for (int trial = 0; trial < 30 && checked < 12; ++trial) {
    std::vector<Cube> cells;
    int n = 3 + int(rng.next() % 4);
    for (int c = 0; c < n; ++c)
      cells.push_back(full_cube({int(rng.next() % 4) - 2, int(rng.next() % 4) - 2}));
    CubicalSet s = CubicalSet::from_cells(2, cells);
    MvConnecting mv = mv_connecting(s, 0);
    CHECK(mv.exact());
    ++checked;
  }
  CHECK(checked >= 12);
}

TEST_CASE("grid box geometry") {
  GridBox g;
  g.lower = {-1, -1};
  g.upper = {1, 1};
  g.subdivisions = {4, 4};
  g.validate();
  CHECK(g.cell_count() == 16);
  CHECK(g.vertex_count() == 25);
  CHECK(g.width(0) == doctest::Approx(0.5));
  CHECK(g.contains({0.0, 0.0}));
  CHECK(!g.contains({1.5, 0.0}));
  CHECK(g.boundary_distance({0.5, 0.0}) == doctest::Approx(0.5));
  CHECK(g.near_boundary({0.9, 0.0}));
  CHECK(!g.near_boundary({0.4, 0.0}));

  auto idx = g.cell_multi_index(g.cell_index({2, 3}));
  CHECK(idx == std::vector<int>{2, 3});

  CellRealization r = CellRealization::from_linear(g, {g.cell_index({0, 0})});
  CHECK(r.contains({-0.9, -0.9}));
  CHECK(!r.contains({0.9, 0.9}));
  CHECK(r.contains({-0.5, -0.6}));  // on the shared face of a member cell
}

TEST_CASE("cell parsing rejects malformed input") {
  CHECK_THROWS_AS(parse_cells("1,2,3\n"), Error);        // odd tuple
  CHECK_THROWS_AS(parse_cells("0,2\n"), Error);          // interval too long
  CHECK_THROWS_AS(parse_cells("0,1\n0,0,1,1\n"), Error); // mixed ambient
}

TEST_CASE("grid and model validation") {
  GridBox g;
  g.lower = {0, 0};
  g.upper = {1};
  g.subdivisions = {4, 4};
  CHECK_THROWS_AS(g.validate(), ConfigError);
  GridBox h;
  h.lower = {1};
  h.upper = {0};
  h.subdivisions = {4};
  CHECK_THROWS_AS(h.validate(), ConfigError);
  CHECK_THROWS_AS(make_model({1.0, 0.0}), ConfigError);
  CHECK_THROWS_AS(make_model({1.0, -1.0}, {2, 1}), ConfigError);
  CHECK_THROWS_AS(multiply(Z2Matrix(2, 3), Z2Matrix(2, 3)), Error);
}
