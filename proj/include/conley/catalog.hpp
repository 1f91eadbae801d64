#pragma once

#include "conley/continuation.hpp"

namespace conley {

// Multivariate polynomial as a coefficient/exponent list, the shape the
// declarative config format supports for inline systems.
struct PolyTerm {
  double coeff = 0;
  std::vector<int> powers;
};

struct Polynomial {
  int dim = 0;
  std::vector<PolyTerm> terms;

  double eval(const Vec& x) const;
  Polynomial derivative(int axis) const;
};

GradientSpec polynomial_gradient(const SplitModel& model, const Polynomial& b);
LSField polynomial_field(const SplitModel& model, const std::vector<Polynomial>& k);

struct CatalogSystem {
  std::string name;
  LSField field;
  std::optional<GradientSpec> gradient;
  GridBox box;
  double T = 2;
};

// Named systems: expand1d, contract1d, saddle2d, doublewell,
// saddle2d-suspended, doublewell-suspended, coupled3d, stronglycoupled2d.
CatalogSystem catalog_system(const std::string& name);
std::vector<std::string> catalog_system_names();

// Named homotopies: rotated-saddle-homotopy, isolation-breaker.
HomotopyFamily catalog_homotopy(const std::string& name, GridBox* box_out = nullptr);
std::vector<std::string> catalog_homotopy_names();

// Saddle field with a small localized bump, for the divergence and nesting
// studies.
LSField bump_perturbed(const LSField& f, double magnitude);

// Separable polynomial gradient with nondegenerate critical points, at most
// nine of them, dimension at most three. Deterministic in the seed.
GradientSpec random_separable_gradient(std::uint64_t seed, GridBox* box_out);

inline const char* catalog_version() { return "catalog-1"; }

}  // namespace conley
