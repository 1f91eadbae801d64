#pragma once

#include <string>
#include <vector>

#include "conley/z2.hpp"

namespace conley {

// Two-column table of a graded dimension vector. The header names the
// grading; only nonzero degrees are listed.
std::string graded_table_text(const GradedDims& g, const std::string& grading_name);
std::string graded_table_csv(const GradedDims& g, const std::string& grading_name);

struct RunReport {
  std::string task;
  std::vector<std::pair<std::string, GradedDims>> tables;
  std::vector<std::string> lines;
  int violations = 0;
  std::string provenance;
  double elapsed_seconds = 0;  // console-only, never serialized

  std::string to_text() const;
  std::string to_csv() const;
};

void write_file(const std::string& path, const std::string& content);

std::string fnv1a_hex(const std::string& data);

}  // namespace conley
