#pragma once

#include "conley/morse.hpp"

namespace conley {

// One-parameter family of fields sharing a model; endpoints are validated
// against the family at construction time.
struct HomotopyFamily {
  std::function<LSField(double)> field_at;  // s in [0, 1]
  LSField f0, f1;
  double lipschitz_hint = 0;
};

HomotopyFamily make_homotopy(std::function<LSField(double)> field_at,
                             const GridBox& validation_box);

// Straight-line interpolation between two fields on the same model.
HomotopyFamily make_linear_homotopy(const LSField& f0, const LSField& f1,
                                    const GridBox& validation_box);

// Largest field gap epsilon satisfying epsilon * T * e^(cT) < rho/2,
// returned exactly; callers apply their own margins.
double closeness_epsilon(double lipschitz, double T, double rho);

struct GronwallReport {
  double epsilon = 0;    // measured sup |F0 - F1| over the box
  double lipschitz = 0;  // sampled constant of F0
  int starts = 0;
  int violations = 0;
  double worst_ratio = 0;  // max divergence / bound
  std::vector<Vec> witnesses;
};

// Integrates both flows from random starts and checks the divergence bound
// epsilon * t * e^(ct) * 1.05 at every sample time in (0, T].
GronwallReport gronwall_check(const LSField& f0, const LSField& f1, const GridBox& box,
                              double T, int starts, const SampleScheme& scheme,
                              std::uint64_t seed = 41);

struct ContinuationReport {
  std::vector<double> s_samples;
  std::vector<std::uint8_t> isolating;
  std::vector<int> margin_cells;  // -1 when the set is empty
  GradedDims e_start, e_end;      // endpoint tables, shifted grading
  bool endpoints_equal = false;
  bool verdict = false;
  std::optional<IsolationCalibration> calibration;
  std::string message;
};

// Samples the family on a uniform s grid, requires the pair cells of every
// sample to keep at least one cell of margin, and compares the endpoint
// shifted-index tables.
ContinuationReport verify_isolating_along(const HomotopyFamily& h, const GridBox& box,
                                          int s_count, double T, const SampleScheme& scheme,
                                          bool with_calibration = false);

struct NestingReport {
  bool gate_passed = false;
  double rho = 0;
  double measured_gap = 0;  // sup |phi - psi| over the sampled gate
  bool inclusions_hold = false;
  int slack_cells[3] = {0, 0, 0};
  std::size_t set_sizes[4] = {0, 0, 0, 0};
  std::string message;
};

// Checks the sampled closeness gate on the inflated box and then the chain
// of stay-set inclusions psi@4T in phi@3T in psi@2T in phi@T, allowing one
// cell of slack.
NestingReport g_nesting_check(const LSField& f_phi, const LSField& f_psi, const GridBox& box,
                              double T, const SampleScheme& scheme, std::uint64_t seed = 43);

struct GalerkinReport {
  int level_dimension = 0;  // prefix dimension that passed
  ContinuationReport continuation;
};

// Smallest model level whose compression interpolates to the field without
// losing isolation; throws HypothesisError when the ladder is exhausted.
GalerkinReport galerkin_continuation(const LSField& f, const GridBox& box, double T,
                                     const SampleScheme& scheme, int s_count = 11);

struct ReineckReport {
  ContinuationReport continuation;
  GradedDims morse;
  GradedDims e_field;
  bool tables_equal = false;
};

// Verifies an externally supplied gradient continuation: the homotopy must
// connect the field to the negative-gradient flow of the spec; the Morse
// table, the field's shifted index and the gradient endpoint's shifted index
// must then agree.
ReineckReport reineck_verify(const LSField& f, const GridBox& box, const GradientSpec& g,
                             const HomotopyFamily& h, double T, const SampleScheme& scheme,
                             const ShootOptions& opts);

}  // namespace conley
