#pragma once

#include "conley/system.hpp"

namespace conley {

struct SampleScheme {
  double step = 1e-2;
  int threads = 0;  // 0 = hardware default

  std::string describe() const;
};

enum class CellKind : std::uint8_t { AllExit = 0, Straddle = 1, Stay = 2 };

// Per-cell trajectory classification on the grid. Each cell is probed at its
// 2^d corners plus the center. A sample "stays" when its orbit over [-T, T]
// remains in the box; the forward flag records a forward orbit over [0, T]
// leaving the box or passing within one cell width of its boundary.
struct CellClassification {
  GridBox grid;
  double T = 0;
  std::vector<CellKind> kind;          // per grid cell, row-major
  std::vector<std::uint8_t> fwd_exit;  // per grid cell

  std::vector<std::size_t> stay_cells() const;
  std::vector<std::size_t> pair_cells() const;  // stay + straddle
  std::vector<std::size_t> exit_cells() const;  // pair cells with forward exit

  // Smallest index distance from any cell of the given kind filter to the
  // grid boundary; empty optional when no such cell exists.
  std::optional<int> boundary_margin_cells(bool include_straddle) const;
};

CellClassification classify_cells(const LSField& f, const GridBox& box, double T,
                                  const SampleScheme& scheme);

// Cells all of whose samples stay in the box over [-T, T].
CubicalSet compute_GT(const LSField& f, const GridBox& box, double T,
                      const SampleScheme& scheme);

// compute_GT against an arbitrary closed region given by a membership
// predicate (no boundary-proximity notion in this variant).
CubicalSet compute_GT_in(const LSField& f, const GridBox& sampling_grid,
                         const std::function<bool(const Vec&)>& inside, double T,
                         const SampleScheme& scheme);

// Cells of `candidate` with at least one sample whose forward orbit over
// [0, T] reaches the complement of the box or comes within one cell width of
// its boundary.
CubicalSet compute_GammaT(const LSField& f, const CubicalSet& candidate, const GridBox& box,
                          double T, const SampleScheme& scheme);

struct IndexPairCombinatorial {
  GridBox grid;
  CubicalSet N, L;  // face-closed; L is a subset of N
  double T_used = 0;
  std::string sample_scheme;
  CellRealization realize_N, realize_L;

  bool point_in_N(const Vec& x) const { return realize_N.contains(x); }
  bool point_in_L(const Vec& x) const { return realize_L.contains(x); }
  // Inside N's realization and outside L's.
  bool point_in_pair_interior(const Vec& x) const {
    return realize_N.contains(x) && !realize_L.contains(x);
  }
};

IndexPairCombinatorial make_index_pair(const GridBox& grid, const CubicalSet& n,
                                       const CubicalSet& l, double T);

struct IndexPairBuild {
  IndexPairCombinatorial pair;
  CubicalSet gt;     // closure of the stay cells
  CubicalSet gamma;  // closure of the forward-exit cells
  CellClassification classification;
};

// N collects cells with at least one staying sample (stay plus straddle);
// L collects those among them with a forward-exiting sample. Straddle cells
// enter the pair on the exit side so the combinatorial exit set
// over-approximates the analytic one. Throws HypothesisError when a non-exit
// cell of N touches the box boundary (the horizon is too small to leave an
// isolation margin).
IndexPairBuild build_index_pair(const LSField& f, const GridBox& box, double T,
                                const SampleScheme& scheme);

// T <= 0 requests the doubling ladder {1, 2, 4, 8}: the first horizon whose
// stay set keeps at least one cell of margin is used.
IndexPairBuild build_index_pair_auto(const LSField& f, const GridBox& box, double T,
                                     const SampleScheme& scheme);

struct PairViolation {
  std::string kind;
  Vec witness;
};

struct IndexPairReport {
  int samples_checked = 0;
  int exit_violations = 0;       // orbit left N without passing through L
  int invariance_violations = 0; // orbit from L re-entered N \ L
  int interior_violations = 0;   // long-staying orbit touched the pair boundary
  std::vector<PairViolation> witnesses;

  int total_violations() const {
    return exit_violations + invariance_violations + interior_violations;
  }
};

// Samples random points in L and in N \ L and checks the index pair
// conditions along their orbits. Violations are reported, not thrown.
IndexPairReport verify_index_pair(const LSField& f, const IndexPairCombinatorial& pair,
                                  int samples, const SampleScheme& scheme,
                                  std::uint64_t seed = 11);

// First time the forward orbit leaves the realization of N \ L (enters L or
// exits N), refined by bisection to step/16. Returns 0 for starting points
// in L and +infinity when the orbit survives past the cap.
double exit_time(const LSField& f, const IndexPairCombinatorial& pair, const Vec& x,
                 double cap, const SampleScheme& scheme);

struct RegularityReport {
  bool regular = true;
  int jump_pairs = 0;    // adjacent cells whose exit times jump
  double worst_gap = 0;  // largest observed jump, in cell-crossing units
};

// Samples the exit time at the cell centers of N \ L and flags the pair
// irregular when adjacent finite values jump by more than ten cell-crossing
// times. Continuity is probed, never certified.
RegularityReport probe_regularity(const LSField& f, const IndexPairCombinatorial& pair,
                                  const SampleScheme& scheme, double cap = 50);

struct IsolationCalibration {
  double epsilon0 = 0;
  double rho = 0;
  double T = 0;
  double T0 = 0;
  // The uniform-continuity based constraint on rho is reported, not checked.
  bool delta_constraint_checked = false;
};

// Realizes the calibration recipe: T0 doubles the first isolating horizon,
// epsilon0 is half the sampled distance from the box boundary to the stay
// set at T0, rho comes from a halving ladder below epsilon0 whose inflated
// stay set remains interior, and T is the smallest tested horizon with the
// inflated stay set inside the box. Throws HypothesisError when no tested
// horizon isolates.
IsolationCalibration calibrate_isolation(const LSField& f, const GridBox& box,
                                         const SampleScheme& scheme);

}  // namespace conley
