#pragma once

#include <iosfwd>
#include <set>
#include <string>
#include <vector>

#include "conley/chain.hpp"
#include "conley/core.hpp"
#include "conley/z2.hpp"

namespace conley {

// Elementary cube on the integer grid: per axis either the degenerate
// interval [lo, lo] or the unit interval [lo, lo+1]. The extent mask has
// bit i set when axis i is nondegenerate.
struct Cube {
  std::vector<int> lo;
  unsigned extent = 0;

  int ambient() const { return int(lo.size()); }
  int dimension() const;
  int hi(int axis) const { return lo[std::size_t(axis)] + ((extent >> axis) & 1); }

  bool operator<(const Cube& o) const;
  bool operator==(const Cube& o) const { return lo == o.lo && extent == o.extent; }

  // Proper faces of codimension one, coefficient 1 over Z2 each.
  std::vector<Cube> facets() const;
  // All faces including the cube itself.
  std::vector<Cube> all_faces() const;

  std::string label() const;
};

Cube full_cube(std::vector<int> lo);
Cube vertex_cube(std::vector<int> coords);

// Face-closed set of elementary cubes in a common ambient dimension.
// Construction closes the generating cells under taking faces.
struct CubicalSet {
  int ambient = 0;
  std::set<Cube> cells;

  CubicalSet() = default;
  explicit CubicalSet(int ambient_dim) : ambient(ambient_dim) {}

  static CubicalSet from_cells(int ambient_dim, const std::vector<Cube>& generators);

  bool empty() const { return cells.empty(); }
  bool contains(const Cube& c) const { return cells.count(c) > 0; }
  bool subset_of(const CubicalSet& o) const;

  std::vector<Cube> cells_of_dim(int k) const;
  int top_dimension() const;

  // Full-dimensional cells (dimension == ambient).
  std::vector<Cube> full_cells() const;

  // Cells whose interval on `axis` satisfies lo >= plane (positive part),
  // hi <= plane (negative part) or lo == hi == plane (slice).
  CubicalSet positive_part(int axis, int plane = 0) const;
  CubicalSet negative_part(int axis, int plane = 0) const;
  CubicalSet slice(int axis, int plane = 0) const;

  CubicalSet union_with(const CubicalSet& o) const;

  // Re-embeds into a larger ambient dimension, padding new axes with the
  // degenerate interval [0,0].
  CubicalSet embedded(int new_ambient) const;
};

// Chain complex of all cells of X (absolute homology).
ChainComplexZ2 chain_complex(const CubicalSet& x);

// Relative complex of the pair (X, A): cells of X not in A, boundary faces
// landing in A deleted. Throws Error when A is not a subset of X.
ChainComplexZ2 relative_pair_complex(const CubicalSet& x, const CubicalSet& a);

// Serialization: one cell per line, 2*ambient comma-separated integers
// (lo,hi per axis; degenerate intervals repeat the coordinate), sorted.
// An optional '#'-prefixed header line carries grid metadata.
std::string serialize_cells(const CubicalSet& s, const std::string& header = "");
CubicalSet parse_cells(const std::string& text);

// Axis-aligned sampling grid over a box.
struct GridBox {
  Vec lower, upper;
  std::vector<int> subdivisions;

  int dim() const { return int(lower.size()); }
  void validate() const;

  double width(int axis) const {
    return (upper[std::size_t(axis)] - lower[std::size_t(axis)]) /
           subdivisions[std::size_t(axis)];
  }

  std::size_t cell_count() const;
  std::size_t vertex_count() const;

  // Row-major linearization of the cell multi-index.
  std::size_t cell_index(const std::vector<int>& idx) const;
  std::vector<int> cell_multi_index(std::size_t linear) const;
  std::size_t vertex_index(const std::vector<int>& idx) const;
  std::vector<int> vertex_multi_index(std::size_t linear) const;

  Vec vertex_point(const std::vector<int>& idx) const;
  Vec cell_center(const std::vector<int>& idx) const;
  void cell_bounds(const std::vector<int>& idx, Vec& lo, Vec& hi) const;

  bool contains(const Vec& x) const;
  // Positive inside, measured to the nearest face of the box.
  double boundary_distance(const Vec& x) const;
  // True if some axis puts x within one cell width of the box boundary.
  bool near_boundary(const Vec& x) const;

  GridBox inflated(double rho) const;
};

// Union-of-boxes realization of the full cells of a cubical set on a grid.
// Membership uses closed boxes; points on shared faces belong to every
// adjacent cell.
struct CellRealization {
  GridBox grid;
  std::vector<std::uint8_t> member;  // one flag per grid cell

  static CellRealization from_linear(const GridBox& grid,
                                     const std::vector<std::size_t>& cells);
  static CellRealization from_cubical(const GridBox& grid, const CubicalSet& set);

  bool any() const;
  bool contains(const Vec& x) const;
};

CubicalSet cubical_from_grid_cells(const GridBox& grid,
                                   const std::vector<std::size_t>& linear_cells);

}  // namespace conley
