#pragma once

#include <string>
#include <vector>

#include "conley/z2.hpp"

namespace conley {

// Chain complex over Z2 in degrees 0..max_degree().
// boundary[k] maps degree-k chains to degree k-1; boundary[0] has zero rows.
struct ChainComplexZ2 {
  std::vector<Z2Matrix> boundary;
  std::vector<std::vector<std::string>> labels;  // generator labels per degree

  int max_degree() const { return int(boundary.size()) - 1; }
  std::size_t generators(int k) const {
    if (k < 0 || k > max_degree()) return 0;
    return boundary[std::size_t(k)].cols;
  }

  // Exact check of d(k) d(k+1) = 0 for every k.
  bool boundary_squares_to_zero() const;
};

// Homology dimensions: dim_k = nullity(d_k) - rank(d_{k+1}), offset 0.
// Throws Error when the complex fails the d d = 0 precondition.
GradedDims homology_dims(const ChainComplexZ2& c);

// Cohomology of the dual complex (coboundaries are transposed boundaries)
// with explicit cochain-level bases per degree, used by the Mayer-Vietoris
// machinery. Over Z2 the dimensions agree with homology degreewise.
struct CohomologyBasis {
  // For each degree k: chosen representative cocycles (columns over cells)
  // spanning H^k, and a basis of the coboundary subspace.
  std::vector<std::vector<BitVec>> reps;
  std::vector<std::vector<BitVec>> coboundaries;

  std::size_t dim(int k) const {
    if (k < 0 || k >= int(reps.size())) return 0;
    return reps[std::size_t(k)].size();
  }

  // Coordinates of a cocycle in the H^k basis (reduces modulo coboundaries).
  // Throws Error if the input is not a cocycle representative combination.
  BitVec coordinates(int k, const BitVec& cocycle) const;
};

CohomologyBasis cohomology_basis(const ChainComplexZ2& c);

GradedDims cohomology_dims(const ChainComplexZ2& c);

}  // namespace conley
