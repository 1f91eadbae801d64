#include "conley/cubical.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <sstream>

namespace conley {

int Cube::dimension() const { return std::popcount(extent); }

bool Cube::operator<(const Cube& o) const {
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (lo[i] != o.lo[i]) return lo[i] < o.lo[i];
    int h = lo[i] + ((extent >> i) & 1);
    int oh = o.lo[i] + ((o.extent >> i) & 1);
    if (h != oh) return h < oh;
  }
  return false;
}

std::vector<Cube> Cube::facets() const {
  std::vector<Cube> out;
  for (int i = 0; i < ambient(); ++i) {
    if (!((extent >> i) & 1)) continue;
    Cube a = *this;
    a.extent &= ~(1u << i);
    out.push_back(a);  // lower face
    Cube b = a;
    b.lo[std::size_t(i)] += 1;
    out.push_back(b);  // upper face
  }
  return out;
}

std::vector<Cube> Cube::all_faces() const {
  std::vector<Cube> out;
  std::vector<int> axes;
  for (int i = 0; i < ambient(); ++i)
    if ((extent >> i) & 1) axes.push_back(i);
  const std::size_t m = axes.size();
  std::vector<int> choice(m, 0);  // 0 keep, 1 lower, 2 upper
  while (true) {
    Cube c = *this;
    for (std::size_t k = 0; k < m; ++k) {
      if (choice[k] == 0) continue;
      c.extent &= ~(1u << axes[k]);
      if (choice[k] == 2) c.lo[std::size_t(axes[k])] += 1;
    }
    out.push_back(c);
    std::size_t k = 0;
    while (k < m && choice[k] == 2) choice[k++] = 0;
    if (k == m) break;
    ++choice[k];
  }
  return out;
}

std::string Cube::label() const {
  std::string s;
  for (int i = 0; i < ambient(); ++i) {
    if (i) s += ",";
    s += std::to_string(lo[std::size_t(i)]) + "," + std::to_string(hi(i));
  }
  return s;
}

Cube full_cube(std::vector<int> lo) {
  Cube c;
  c.extent = (1u << lo.size()) - 1u;
  c.lo = std::move(lo);
  return c;
}

Cube vertex_cube(std::vector<int> coords) {
  Cube c;
  c.extent = 0;
  c.lo = std::move(coords);
  return c;
}

CubicalSet CubicalSet::from_cells(int ambient_dim, const std::vector<Cube>& generators) {
  CubicalSet s(ambient_dim);
  for (const Cube& g : generators) {
    if (g.ambient() != ambient_dim) throw Error("cubical set: ambient mismatch");
    for (Cube& f : g.all_faces()) s.cells.insert(std::move(f));
  }
  return s;
}

bool CubicalSet::subset_of(const CubicalSet& o) const {
  for (const Cube& c : cells)
    if (!o.contains(c)) return false;
  return true;
}

std::vector<Cube> CubicalSet::cells_of_dim(int k) const {
  std::vector<Cube> out;
  for (const Cube& c : cells)
    if (c.dimension() == k) out.push_back(c);
  return out;
}

int CubicalSet::top_dimension() const {
  int d = -1;
  for (const Cube& c : cells) d = std::max(d, c.dimension());
  return d;
}

std::vector<Cube> CubicalSet::full_cells() const { return cells_of_dim(ambient); }

CubicalSet CubicalSet::positive_part(int axis, int plane) const {
  CubicalSet s(ambient);
  for (const Cube& c : cells)
    if (c.lo[std::size_t(axis)] >= plane) s.cells.insert(c);
  return s;
}

CubicalSet CubicalSet::negative_part(int axis, int plane) const {
  CubicalSet s(ambient);
  for (const Cube& c : cells)
    if (c.hi(axis) <= plane) s.cells.insert(c);
  return s;
}

CubicalSet CubicalSet::slice(int axis, int plane) const {
  CubicalSet s(ambient);
  for (const Cube& c : cells)
    if (c.lo[std::size_t(axis)] == plane && c.hi(axis) == plane) s.cells.insert(c);
  return s;
}

CubicalSet CubicalSet::union_with(const CubicalSet& o) const {
  CubicalSet s(ambient);
  s.cells = cells;
  s.cells.insert(o.cells.begin(), o.cells.end());
  return s;
}

CubicalSet CubicalSet::embedded(int new_ambient) const {
  CubicalSet s(new_ambient);
  for (const Cube& c : cells) {
    Cube e;
    e.lo = c.lo;
    e.lo.resize(std::size_t(new_ambient), 0);
    e.extent = c.extent;
    s.cells.insert(std::move(e));
  }
  return s;
}

namespace {

ChainComplexZ2 complex_from_cells(int top_dim, const std::vector<std::vector<Cube>>& by_dim,
                                  const std::set<Cube>& excluded) {
  ChainComplexZ2 cx;
  cx.boundary.resize(std::size_t(top_dim) + 1);
  cx.labels.resize(std::size_t(top_dim) + 1);
  std::vector<std::map<Cube, std::size_t>> index(std::size_t(top_dim) + 1);
  for (int k = 0; k <= top_dim; ++k) {
    for (std::size_t i = 0; i < by_dim[std::size_t(k)].size(); ++i) {
      index[std::size_t(k)][by_dim[std::size_t(k)][i]] = i;
      cx.labels[std::size_t(k)].push_back(by_dim[std::size_t(k)][i].label());
    }
  }
  for (int k = 0; k <= top_dim; ++k) {
    std::size_t nk = by_dim[std::size_t(k)].size();
    std::size_t nk1 = k == 0 ? 0 : by_dim[std::size_t(k) - 1].size();
    Z2Matrix d(nk1, nk);
    if (k > 0) {
      for (std::size_t j = 0; j < nk; ++j) {
        for (const Cube& f : by_dim[std::size_t(k)][j].facets()) {
          if (excluded.count(f)) continue;  // face deleted in relative complex
          auto it = index[std::size_t(k) - 1].find(f);
          if (it == index[std::size_t(k) - 1].end()) continue;
          // Z2: a doubly-counted face cancels; facets() lists each once.
          d.set(it->second, j, !d.get(it->second, j));
        }
      }
    }
    cx.boundary[std::size_t(k)] = std::move(d);
  }
  return cx;
}

}  // namespace

ChainComplexZ2 chain_complex(const CubicalSet& x) {
  int top = std::max(0, x.top_dimension());
  std::vector<std::vector<Cube>> by_dim(std::size_t(top) + 1);
  for (const Cube& c : x.cells) by_dim[std::size_t(c.dimension())].push_back(c);
  for (auto& v : by_dim) std::sort(v.begin(), v.end());
  return complex_from_cells(top, by_dim, {});
}

ChainComplexZ2 relative_pair_complex(const CubicalSet& x, const CubicalSet& a) {
  if (!a.subset_of(x)) throw Error("relative_pair_complex: A is not a subset of X");
  int top = std::max(0, x.top_dimension());
  std::vector<std::vector<Cube>> by_dim(std::size_t(top) + 1);
  for (const Cube& c : x.cells)
    if (!a.contains(c)) by_dim[std::size_t(c.dimension())].push_back(c);
  for (auto& v : by_dim) std::sort(v.begin(), v.end());
  return complex_from_cells(top, by_dim, a.cells);
}

std::string serialize_cells(const CubicalSet& s, const std::string& header) {
  std::string out;
  if (!header.empty()) out += "# " + header + "\n";
  for (const Cube& c : s.cells) out += c.label() + "\n";
  return out;
}

CubicalSet parse_cells(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<Cube> cubes;
  int ambient = -1;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<int> nums;
    std::string tok;
    std::istringstream ls(line);
    while (std::getline(ls, tok, ',')) nums.push_back(std::stoi(tok));
    if (nums.size() % 2 != 0) throw Error("parse_cells: odd coordinate count");
    int d = int(nums.size() / 2);
    if (ambient < 0) ambient = d;
    if (d != ambient) throw Error("parse_cells: inconsistent ambient dimension");
    Cube c;
    c.lo.resize(std::size_t(d));
    for (int i = 0; i < d; ++i) {
      int lo = nums[std::size_t(2 * i)], hi = nums[std::size_t(2 * i) + 1];
      if (hi != lo && hi != lo + 1) throw Error("parse_cells: interval is not elementary");
      c.lo[std::size_t(i)] = lo;
      if (hi == lo + 1) c.extent |= 1u << i;
    }
    cubes.push_back(std::move(c));
  }
  if (ambient < 0) return CubicalSet(0);
  CubicalSet s(ambient);
  for (Cube& c : cubes) s.cells.insert(std::move(c));
  return s;
}

void GridBox::validate() const {
  if (lower.size() != upper.size() || lower.size() != subdivisions.size())
    throw ConfigError("grid box: field sizes disagree");
  if (lower.empty()) throw ConfigError("grid box: empty dimension");
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (!(lower[i] < upper[i])) throw ConfigError("grid box: lower must be below upper");
    if (subdivisions[i] < 1) throw ConfigError("grid box: subdivisions must be positive");
  }
}

std::size_t GridBox::cell_count() const {
  std::size_t n = 1;
  for (int s : subdivisions) n *= std::size_t(s);
  return n;
}

std::size_t GridBox::vertex_count() const {
  std::size_t n = 1;
  for (int s : subdivisions) n *= std::size_t(s + 1);
  return n;
}

std::size_t GridBox::cell_index(const std::vector<int>& idx) const {
  std::size_t lin = 0;
  for (std::size_t i = 0; i < idx.size(); ++i)
    lin = lin * std::size_t(subdivisions[i]) + std::size_t(idx[i]);
  return lin;
}

std::vector<int> GridBox::cell_multi_index(std::size_t linear) const {
  std::vector<int> idx(subdivisions.size());
  for (std::size_t i = subdivisions.size(); i-- > 0;) {
    idx[i] = int(linear % std::size_t(subdivisions[i]));
    linear /= std::size_t(subdivisions[i]);
  }
  return idx;
}

std::size_t GridBox::vertex_index(const std::vector<int>& idx) const {
  std::size_t lin = 0;
  for (std::size_t i = 0; i < idx.size(); ++i)
    lin = lin * std::size_t(subdivisions[i] + 1) + std::size_t(idx[i]);
  return lin;
}

std::vector<int> GridBox::vertex_multi_index(std::size_t linear) const {
  std::vector<int> idx(subdivisions.size());
  for (std::size_t i = subdivisions.size(); i-- > 0;) {
    idx[i] = int(linear % std::size_t(subdivisions[i] + 1));
    linear /= std::size_t(subdivisions[i] + 1);
  }
  return idx;
}

Vec GridBox::vertex_point(const std::vector<int>& idx) const {
  Vec x(lower.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = lower[i] + width(int(i)) * idx[i];
  return x;
}

Vec GridBox::cell_center(const std::vector<int>& idx) const {
  Vec x(lower.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    x[i] = lower[i] + width(int(i)) * (idx[i] + 0.5);
  return x;
}

void GridBox::cell_bounds(const std::vector<int>& idx, Vec& lo, Vec& hi) const {
  lo.resize(lower.size());
  hi.resize(lower.size());
  for (std::size_t i = 0; i < lower.size(); ++i) {
    lo[i] = lower[i] + width(int(i)) * idx[i];
    hi[i] = lower[i] + width(int(i)) * (idx[i] + 1);
  }
}

bool GridBox::contains(const Vec& x) const {
  for (std::size_t i = 0; i < lower.size(); ++i)
    if (x[i] < lower[i] || x[i] > upper[i]) return false;
  return true;
}

double GridBox::boundary_distance(const Vec& x) const {
  double d = 1e300;
  for (std::size_t i = 0; i < lower.size(); ++i) {
    d = std::min(d, x[i] - lower[i]);
    d = std::min(d, upper[i] - x[i]);
  }
  return d;
}

bool GridBox::near_boundary(const Vec& x) const {
  for (std::size_t i = 0; i < lower.size(); ++i) {
    double w = width(int(i));
    if (x[i] - lower[i] <= w || upper[i] - x[i] <= w) return true;
  }
  return false;
}

GridBox GridBox::inflated(double rho) const {
  GridBox g = *this;
  for (std::size_t i = 0; i < g.lower.size(); ++i) {
    g.lower[i] -= rho;
    g.upper[i] += rho;
  }
  return g;
}

CellRealization CellRealization::from_linear(const GridBox& grid,
                                             const std::vector<std::size_t>& cells) {
  CellRealization r;
  r.grid = grid;
  r.member.assign(grid.cell_count(), 0);
  for (std::size_t lin : cells) r.member[lin] = 1;
  return r;
}

CellRealization CellRealization::from_cubical(const GridBox& grid, const CubicalSet& set) {
  CellRealization r;
  r.grid = grid;
  r.member.assign(grid.cell_count(), 0);
  for (const Cube& c : set.full_cells()) {
    std::vector<int> idx(c.lo.begin(), c.lo.end());
    r.member[grid.cell_index(idx)] = 1;
  }
  return r;
}

bool CellRealization::any() const {
  for (auto m : member)
    if (m) return true;
  return false;
}

bool CellRealization::contains(const Vec& x) const {
  if (!grid.contains(x)) return false;
  const int d = grid.dim();
  // Candidate cell indices per axis; a point on a grid plane belongs to the
  // cells on both sides.
  int cand[8][2];
  int ncand[8];
  for (int i = 0; i < d; ++i) {
    double t = (x[std::size_t(i)] - grid.lower[std::size_t(i)]) / grid.width(i);
    int base = int(std::floor(t));
    if (base >= grid.subdivisions[std::size_t(i)]) base = grid.subdivisions[std::size_t(i)] - 1;
    if (base < 0) base = 0;
    ncand[i] = 0;
    cand[i][ncand[i]++] = base;
    double frac = t - std::floor(t);
    if (frac < 1e-12 && base > 0) cand[i][ncand[i]++] = base - 1;
  }
  std::vector<int> idx(std::size_t(d), 0);
  int combos = 1;
  for (int i = 0; i < d; ++i) combos *= ncand[i];
  for (int c = 0; c < combos; ++c) {
    int rem = c;
    for (int i = 0; i < d; ++i) {
      idx[std::size_t(i)] = cand[i][rem % ncand[i]];
      rem /= ncand[i];
    }
    if (member[grid.cell_index(idx)]) return true;
  }
  return false;
}

CubicalSet cubical_from_grid_cells(const GridBox& grid,
                                   const std::vector<std::size_t>& linear_cells) {
  std::vector<Cube> gens;
  gens.reserve(linear_cells.size());
  for (std::size_t lin : linear_cells) gens.push_back(full_cube(grid.cell_multi_index(lin)));
  return CubicalSet::from_cells(grid.dim(), gens);
}

}  // namespace conley
