#pragma once

#include "conley/isolation.hpp"
#include "conley/mayer_vietoris.hpp"

namespace conley {

// Relative Z2 homology dimensions of the pair (N, L), offset 0.
GradedDims classical_index(const IndexPairCombinatorial& pair);

// Index in the shifted grading q = k - d_minus, where d_minus counts the
// negative-spectrum coordinates of the model. At a fixed finite level the
// shifted index is the classical one re-indexed.
struct EIndex {
  GradedDims dims;  // offset == -d_minus
  int d_minus = 0;
};

EIndex e_index(const IndexPairCombinatorial& pair, const SplitModel& model);

// A nonzero table certifies a nonempty invariant set; callers use the
// contrapositive on computed pairs.
bool nontriviality_check(const EIndex& e);

// dim(V ∩ E+) - codim(V + E+) for a coordinate-spanned subspace.
int e_dimension(const std::vector<int>& axes, const SplitModel& model);

// Increasing family of sections of a fixed set: level j stores the cells of
// the section at subspace dimension v_dim, and axes[j] names the coordinate
// that splits level j+1 down to level j (the slice at plane 0 must
// reproduce level j exactly).
struct LevelFamily {
  struct Level {
    int v_dim = 0;
    CubicalSet set;
  };
  std::vector<Level> levels;
  std::vector<int> axes;
};

struct EDimensionRecord {
  struct LevelData {
    int v_dim = 0;
    GradedDims cohomology;                  // raw degrees of the section
    std::map<int, std::size_t> delta_rank;  // per slice degree
  };
  std::vector<LevelData> levels;
  GradedDims limit;  // indexed by q
};

// Connecting maps across consecutive levels are composed into the top level;
// the limit dimension at grade q is the composite-image rank when it agrees
// across the top two comparisons. Exactness of every triad is asserted.
// Throws Error for families shorter than 3 levels or with mismatched slices,
// HypothesisError when the ranks still change at the top ("no plateau").
EDimensionRecord e_cohomology_limit(const LevelFamily& fam);

// Cubical unit-sphere family for a subspace of the given E-dimension:
// three nested boundary spheres with the matching v_dim tags.
LevelFamily sphere_level_family(int p);

// Suspension by one negative-spectrum coordinate with linear dynamics; the
// appended direction expands under the evolution while the reference
// splitting gains one dimension.
LSField suspend_field(const LSField& f, double new_spectrum_entry = -1.0);
GradientSpec suspend_gradient(const GradientSpec& g, double new_spectrum_entry = -1.0);
GridBox suspend_box(const GridBox& box, int subdivisions, double lo = -1.0, double hi = 1.0);

struct SuspensionReport {
  GradedDims classical_base, classical_suspended;
  GradedDims e_base, e_suspended;
  bool classical_shift_ok = false;
  bool e_tables_equal = false;

  bool ok() const { return classical_shift_ok && e_tables_equal; }
};

SuspensionReport suspension_check(const LSField& f, const GridBox& box, double T,
                                  const SampleScheme& scheme, int new_axis_subdivisions);

}  // namespace conley
