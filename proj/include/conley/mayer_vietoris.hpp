#pragma once

#include <map>

#include "conley/cubical.hpp"

namespace conley {

// Connecting homomorphisms of the triad (X, X+, X-) obtained by splitting a
// closed cell set along a coordinate hyperplane. X+ and X- are the cells on
// either side, their intersection is the slice X_V, and the matrices realize
// H^k(X_V) -> H^{k+1}(X) through the zig-zag of the short exact cochain
// sequence of the triad.
struct MvConnecting {
  std::map<int, Z2Matrix> delta;  // degree k -> matrix (rows: H^{k+1}(X), cols: H^k(X_V))
  GradedDims dims_slice;          // H^*(X_V)
  GradedDims dims_pos, dims_neg;  // H^*(X+), H^*(X-)
  GradedDims dims_whole;          // H^*(X)
  std::map<int, std::size_t> restriction_rank;  // rank of H^k(X+) ⊕ H^k(X-) -> H^k(X_V)

  std::size_t delta_rank(int k) const {
    auto it = delta.find(k);
    return it == delta.end() ? 0 : rank_z2(it->second);
  }

  // Exactness of the Mayer-Vietoris sequence at the slice term:
  // dim H^k(X_V) = rank(restriction) + rank(delta^k) for every degree.
  bool exact() const;
};

// Splits `whole` along `axis` at integer plane 0 (the hyperplane must be a
// grid plane so every elementary cube lands on one side). Throws Error when
// the two parts fail to cover the set. With orient_negative the cocycle
// lift happens on the negative side; over Z2 the matrices agree.
MvConnecting mv_connecting(const CubicalSet& whole, int axis, int plane = 0,
                           bool orient_negative = false);

}  // namespace conley
