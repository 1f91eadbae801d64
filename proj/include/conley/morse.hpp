#pragma once

#include "conley/conley_index.hpp"

namespace conley {

struct CriticalPoint {
  Vec x;
  double f_value = 0;
  std::vector<double> hess_spectrum;  // ascending
  int mu_neg = 0;                     // negative Hessian eigenvalues
  int rel_index = 0;                  // mu_neg - d_minus
  bool nondegenerate = false;
};

// Newton iteration on the gradient from a seed lattice over the box.
// Converged interior points are deduplicated at radius 1e-5 and carry their
// Hessian data; points with an eigenvalue within 1e-6 of zero are flagged
// degenerate rather than rejected.
std::vector<CriticalPoint> find_critical_points(const GradientSpec& g, const GridBox& box,
                                                int seeds_per_axis);

struct ShootOptions {
  double radius = 1e-2;
  int directions = 64;
  double step = 1e-2;
  double time_cap = 50;
  double hit_radius = 1e-3;
  double cluster_distance = 1e-2;
  int threads = 0;
};

struct Connection {
  CriticalPoint source, target;
  int count_mod2 = 0;
  std::vector<Trajectory> witnesses;  // one representative orbit per cluster
};

// Shoots from the unstable eigensphere of the source and counts the orbit
// clusters that reach the target inside the box. Preconditions: relative
// index difference exactly one, both points nondegenerate. Throws
// HypothesisError when two clusters come closer than three cluster radii.
Connection count_connections(const GradientSpec& g, const CriticalPoint& x,
                             const CriticalPoint& y, const GridBox& box,
                             const ShootOptions& opts);

struct MorseComplexLocal {
  std::vector<CriticalPoint> generators;  // sorted by (rel_index, coordinates)
  std::map<int, Z2Matrix> boundary;       // rel index q -> matrix into q-1
  std::vector<Connection> connections;
  GridBox neighborhood;
  int d_minus = 0;

  std::size_t generators_at(int q) const;
};

// Assembles the boundary operator from all index-difference-one pairs and
// asserts that it squares to zero. Throws Error on degenerate critical
// points or a nonzero square.
MorseComplexLocal build_boundary(const GradientSpec& g, const GridBox& box,
                                 const ShootOptions& opts, int seeds_per_axis = 8);

// Homology dimensions of the local complex, graded by relative index.
GradedDims local_morse_homology(const GradientSpec& g, const GridBox& box,
                                const ShootOptions& opts, int seeds_per_axis = 8);

GradedDims homology_of_complex(const MorseComplexLocal& complex);

struct CompareReport {
  GradedDims morse;
  GradedDims e_graded;
  bool equal = false;
};

// Runs both routes independently: the Morse complex of the gradient and the
// shifted index of the combinatorial pair of its negative-gradient flow.
CompareReport compare_with_e_index(const GradientSpec& g, const GridBox& box, double T,
                                   const SampleScheme& scheme, const ShootOptions& opts,
                                   int seeds_per_axis = 8);

// Interpolation data for the one-parameter gradient family extended by a
// slow coordinate. The cutoffs are fixed: omega drops from 1 to 0 across
// (1/3, 2/3); eta vanishes on [0, 1], decreases left of 0, increases right
// of 1, with slope magnitude above one outside [-1/2, 3/2].
struct FastSlowSpec {
  std::function<GradientSpec(double)> family;  // lambda in [0, 1]
  double r = 0;
  // Metric weight of the slow axis. The default keeps the boundary cutoff
  // slope below the cosine well slope on the slow margins, so no spurious
  // critical points appear between the margin and the levels.
  double kappa = 0.2;
};

double omega_cutoff(double t);
double omega_cutoff_derivative(double t);
double eta_cutoff(double mu);
double eta_cutoff_derivative(double mu);

// Lower bound on r demanded by the construction; the family-variation bound
// is sampled over the box and floored at one so a constant family still
// receives positive wells.
double fastslow_r_threshold(const FastSlowSpec& spec, const GridBox& box,
                            std::uint64_t seed = 5);

// Extends the box by the slow coordinate range [-1/3, 4/3].
GridBox fastslow_box(const GridBox& box, int subdivisions);

// Gradient data on d+1 coordinates whose negative-gradient flow realizes
// the extension; the slow axis carries metric weight 1/kappa. Throws
// HypothesisError when enforce_threshold is set and r is too small.
GradientSpec build_fastslow(const FastSlowSpec& spec, const GridBox& box,
                            bool enforce_threshold = true);

struct MonotonicityReport {
  int samples = 0;
  int violations = 0;
  std::vector<Vec> witnesses;
};

// Samples interior (x, mu) and checks that the slow component of the
// negative gradient stays positive. Violations are data, not errors.
MonotonicityReport fastslow_monotonicity_check(const FastSlowSpec& spec, const GridBox& box,
                                               int samples, std::uint64_t seed = 17);

struct McfReport {
  GradedDims dims;
  bool lyapunov_ok = false;
  double value_spread = 0;       // spread of the function over the enclosure
  double spread_tolerance = 0;
  int decrease_violations = 0;
  std::vector<Vec> witnesses;
  std::string provenance;
};

// Verifies the Lyapunov conditions of the function against the flow by
// sampling, then returns the local Morse homology of the function as the
// representative of the limit class. Throws HypothesisError on a Lyapunov
// violation.
McfReport mcf_homology(const LSField& flow, const GridBox& box, const GradientSpec& lyapunov,
                       double T, const SampleScheme& scheme, const ShootOptions& opts,
                       int seeds_per_axis = 8);

}  // namespace conley
