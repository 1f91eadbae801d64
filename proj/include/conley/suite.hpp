#pragma once

#include <string>
#include <vector>

#include <cstdint>

namespace conley {

struct CriterionResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Runs the full acceptance battery. Each criterion is independent; failures
// carry a diagnostic detail string instead of aborting the run.
std::vector<CriterionResult> run_acceptance(std::uint64_t seed, int threads);

std::string acceptance_text(const std::vector<CriterionResult>& results);

// Deterministic bundle of catalog runs used by the determinism criterion:
// identical seed must yield byte-identical text for any thread count.
std::string determinism_bundle_text(std::uint64_t seed, int threads);

}  // namespace conley
