#include "conley/mayer_vietoris.hpp"

#include <algorithm>
#include <map>

namespace conley {

namespace {

// Index of each cell of a complex built from a cubical set, per degree,
// matching the canonical (sorted) generator order of chain_complex.
struct CellIndex {
  std::vector<std::map<Cube, std::size_t>> index;

  CellIndex(const CubicalSet& s, int top) {
    index.resize(std::size_t(top) + 1);
    std::vector<std::vector<Cube>> by_dim(std::size_t(top) + 1);
    for (const Cube& c : s.cells) by_dim[std::size_t(c.dimension())].push_back(c);
    for (int k = 0; k <= top; ++k) {
      auto& v = by_dim[std::size_t(k)];
      std::sort(v.begin(), v.end());
      for (std::size_t i = 0; i < v.size(); ++i) index[std::size_t(k)][v[i]] = i;
    }
  }

  std::size_t count(int k) const {
    return k < 0 || k >= int(index.size()) ? 0 : index[std::size_t(k)].size();
  }
};

// Restriction of a cochain on `from` to the cells of `to` (a subset).
BitVec restrict_cochain(const BitVec& cochain, int k, const CellIndex& from,
                        const CellIndex& to) {
  BitVec out(to.count(k));
  if (k >= int(from.index.size())) return out;
  for (const auto& [cube, j] : to.index[std::size_t(k)]) {
    auto it = from.index[std::size_t(k)].find(cube);
    if (it != from.index[std::size_t(k)].end() && cochain.get(it->second)) out.set(j, true);
  }
  return out;
}

GradedDims dims_of(const CohomologyBasis& b, int top) {
  GradedDims g;
  for (int k = 0; k <= top; ++k) g.set(k, b.dim(k));
  return g;
}

}  // namespace

bool MvConnecting::exact() const {
  for (auto& [k, d] : dims_slice.dims) {
    std::size_t restr = 0;
    auto it = restriction_rank.find(k);
    if (it != restriction_rank.end()) restr = it->second;
    if (d != restr + delta_rank(k)) return false;
  }
  // Degrees where the slice is trivial contribute nothing.
  return true;
}

MvConnecting mv_connecting(const CubicalSet& whole, int axis, int plane,
                           bool orient_negative) {
  MvConnecting out;
  if (whole.empty()) return out;
  if (axis < 0 || axis >= whole.ambient) throw Error("mv_connecting: bad axis");

  CubicalSet pos = whole.positive_part(axis, plane);
  CubicalSet neg = whole.negative_part(axis, plane);
  CubicalSet mid = whole.slice(axis, plane);
  if (pos.union_with(neg).cells.size() != whole.cells.size())
    throw Error("mv_connecting: triad does not cover the set");

  const int top = whole.top_dimension();
  ChainComplexZ2 cx_whole = chain_complex(whole);
  ChainComplexZ2 cx_pos = pos.empty() ? ChainComplexZ2{} : chain_complex(pos);
  ChainComplexZ2 cx_neg = neg.empty() ? ChainComplexZ2{} : chain_complex(neg);
  ChainComplexZ2 cx_mid = mid.empty() ? ChainComplexZ2{} : chain_complex(mid);

  CohomologyBasis h_whole = cohomology_basis(cx_whole);
  CohomologyBasis h_pos = pos.empty() ? CohomologyBasis{} : cohomology_basis(cx_pos);
  CohomologyBasis h_neg = neg.empty() ? CohomologyBasis{} : cohomology_basis(cx_neg);
  CohomologyBasis h_mid = mid.empty() ? CohomologyBasis{} : cohomology_basis(cx_mid);

  CellIndex ix_whole(whole, top);
  CellIndex ix_pos(pos, top);
  CellIndex ix_neg(neg, top);
  CellIndex ix_mid(mid, top);

  out.dims_whole = dims_of(h_whole, top);
  out.dims_pos = pos.empty() ? GradedDims{} : dims_of(h_pos, top);
  out.dims_neg = neg.empty() ? GradedDims{} : dims_of(h_neg, top);
  out.dims_slice = mid.empty() ? GradedDims{} : dims_of(h_mid, top);

  // Restriction map H^k(X+) ⊕ H^k(X-) -> H^k(X_V), rank per degree.
  for (int k = 0; k <= top; ++k) {
    std::size_t hmid = mid.empty() ? 0 : h_mid.dim(k);
    if (hmid == 0) {
      out.restriction_rank[k] = 0;
      continue;
    }
    std::size_t npos = pos.empty() ? 0 : h_pos.dim(k);
    std::size_t nneg = neg.empty() ? 0 : h_neg.dim(k);
    Z2Matrix m(hmid, npos + nneg);
    for (std::size_t j = 0; j < npos; ++j) {
      BitVec r = restrict_cochain(h_pos.reps[std::size_t(k)][j], k, ix_pos, ix_mid);
      BitVec coords = h_mid.coordinates(k, r);
      for (std::size_t i = 0; i < hmid; ++i)
        if (coords.get(i)) m.set(i, j, true);
    }
    for (std::size_t j = 0; j < nneg; ++j) {
      BitVec r = restrict_cochain(h_neg.reps[std::size_t(k)][j], k, ix_neg, ix_mid);
      BitVec coords = h_mid.coordinates(k, r);
      for (std::size_t i = 0; i < hmid; ++i)
        if (coords.get(i)) m.set(i, npos + j, true);
    }
    out.restriction_rank[k] = rank_z2(m);
  }

  // Connecting map. A class [c] on the slice lifts to the extension-by-zero
  // cochain c+ on X+; its coboundary vanishes on the slice, so pasting with
  // the zero cochain on X- yields a global cocycle representing delta[c].
  for (int k = 0; k <= top; ++k) {
    std::size_t hmid = mid.empty() ? 0 : h_mid.dim(k);
    std::size_t hwhole1 = (k + 1 <= top) ? h_whole.dim(k + 1) : 0;
    Z2Matrix d(hwhole1, hmid);
    if (hmid != 0 && k + 1 <= top && ix_whole.count(k + 1) > 0) {
      for (std::size_t j = 0; j < hmid; ++j) {
        const BitVec& c = h_mid.reps[std::size_t(k)][j];
        BitVec w(ix_whole.count(k + 1));
        // Evaluate delta(c+) on each (k+1)-cell of the lift side: sum of c
        // over the cell's k-faces lying in the slice.
        for (const auto& [cube, row] : ix_whole.index[std::size_t(k + 1)]) {
          bool in_lift_side = orient_negative ? cube.hi(axis) <= plane
                                              : cube.lo[std::size_t(axis)] >= plane;
          if (!in_lift_side) continue;
          bool val = false;
          for (const Cube& f : cube.facets()) {
            auto it = ix_mid.index.size() > std::size_t(k)
                          ? ix_mid.index[std::size_t(k)].find(f)
                          : ix_mid.index[0].end();
            if (ix_mid.index.size() > std::size_t(k) &&
                it != ix_mid.index[std::size_t(k)].end() && c.get(it->second))
              val = !val;
          }
          if (val) w.set(row, true);
        }
        BitVec coords = h_whole.coordinates(k + 1, w);
        for (std::size_t i = 0; i < hwhole1; ++i)
          if (coords.get(i)) d.set(i, j, true);
      }
    }
    out.delta[k] = std::move(d);
  }
  return out;
}

}  // namespace conley
