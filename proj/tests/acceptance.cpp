// Acceptance battery: one pass/fail line per criterion, nonzero exit on any
// failure. The same battery backs the CLI `suite` task.

#include <cstdio>

#include "conley/suite.hpp"

int main() {
  std::vector<conley::CriterionResult> results = conley::run_acceptance(0, 0);
  std::fputs(conley::acceptance_text(results).c_str(), stdout);
  int failures = 0;
  for (const auto& r : results)
    if (!r.pass) ++failures;
  if (failures) std::fprintf(stderr, "%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
