#pragma once

#include <functional>
#include <optional>

#include "conley/core.hpp"
#include "conley/cubical.hpp"

namespace conley {

// Finite-dimensional model of the split space. The fixed operator is
// diagonal in the model basis; the negative-spectrum coordinates span the
// unstable reference subspace used for the shifted grading. Levels are
// nested coordinate prefixes closed under the operator.
struct SplitModel {
  int dim = 0;
  std::vector<double> spectrum;  // diagonal entries, all nonzero
  std::vector<int> levels;       // increasing prefix dimensions, ends at dim

  void validate() const;

  int minus_count() const {
    int n = 0;
    for (double s : spectrum)
      if (s < 0) ++n;
    return n;
  }

  std::vector<int> minus_set() const {
    std::vector<int> v;
    for (int i = 0; i < dim; ++i)
      if (spectrum[std::size_t(i)] < 0) v.push_back(i);
    return v;
  }
};

SplitModel make_model(std::vector<double> spectrum, std::vector<int> levels = {});

using VectorMap = std::function<Vec(const Vec&)>;

// Vector field of the form (diagonal linear part) + nonlinearity. The model
// carries the splitting bookkeeping; `linear` is the diagonal of the actual
// evolution and may differ from the model spectrum (negative-gradient flows
// evolve by the negated operator).
struct LSField {
  SplitModel model;
  std::vector<double> linear;
  VectorMap nonlinearity;  // may be empty (treated as zero)
  std::optional<int> support_level;
  std::optional<double> lipschitz_hint;

  Vec operator()(const Vec& x) const;
};

LSField make_linear_field(const SplitModel& model);

Vec evaluate_field(const LSField& f, const Vec& x);

// Gradient data for f(x) = quadratic part + b(x). grad_b is the gradient of
// b in the model inner product; hess evaluates the full Euclidean second
// derivative matrix of f. Callbacks left empty fall back to central finite
// differences with h = 1e-4. metric_diag holds per-axis inner-product
// weights (all ones for the standard metric).
struct GradientSpec {
  SplitModel model;
  std::function<double(const Vec&)> b;
  VectorMap grad_b;
  std::function<DMatrix(const Vec&)> hess;
  std::optional<int> support_level;
  std::vector<double> metric_diag;

  double quadratic(const Vec& x) const;
  double value(const Vec& x) const;  // quadratic + b
  Vec gradient(const Vec& x) const;  // Lx + grad_b(x), metric gradient
  Vec euclidean_partials(const Vec& x) const;
  DMatrix hessian(const Vec& x) const;

  double metric_weight(int i) const {
    return metric_diag.empty() ? 1.0 : metric_diag[std::size_t(i)];
  }
};

GradientSpec make_gradient(const SplitModel& model, std::function<double(const Vec&)> b,
                           VectorMap grad_b = nullptr,
                           std::function<DMatrix(const Vec&)> hess = nullptr);

// Field x -> -(Lx + grad b). Linear part is the negated spectrum; the model
// (and with it the splitting data) is taken unchanged from the spec.
LSField negative_gradient_field(const GradientSpec& g);

// Sampled trajectory of the flow.
struct Trajectory {
  std::vector<double> times;
  std::vector<Vec> points;
  double step = 0;
};

// Classical fixed-step RK4. Negative t integrates the negated field over
// |t|. Throws Error on non-finite state.
Vec flow_map(const LSField& f, Vec x, double t, double step);

Trajectory flow_trajectory(const LSField& f, Vec x, double t, double step);

struct StayResult {
  bool stays = true;
  std::optional<double> exit_forward_time;   // > 0 when the forward orbit leaves
  std::optional<double> exit_backward_time;  // < 0 when the backward orbit leaves

  std::optional<double> first_exit_time() const;
  std::optional<bool> exit_forward() const;
};

// Integrates over [t_minus, t_plus] (t_minus <= 0 <= t_plus) and reports
// whether all samples stay in the box; crossing times are refined by
// bisection to step/16.
StayResult trajectory_in_set(const LSField& f, const Vec& x, double t_minus, double t_plus,
                             const GridBox& box, double step);

// Largest sampled difference quotient and finite-difference Jacobian norm
// over the box, times a 1.1 safety factor.
double lipschitz_estimate(const LSField& f, const GridBox& box, int samples,
                          std::uint64_t seed = 2026);

// Replaces the nonlinearity by its compression to the level's coordinate
// prefix; the complementary coordinates evolve by the linear part alone.
LSField galerkin_truncate(const LSField& f, int level_index);

}  // namespace conley
