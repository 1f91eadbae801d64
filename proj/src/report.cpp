#include "conley/report.hpp"

#include <cstdio>
#include <fstream>

#include "conley/core.hpp"

namespace conley {

std::string graded_table_text(const GradedDims& g, const std::string& grading_name) {
  std::string s = "# " + grading_name + "\n";
  s += "degree dim\n";
  for (auto& [q, v] : g.dims) s += std::to_string(q) + " " + std::to_string(v) + "\n";
  return s;
}

std::string graded_table_csv(const GradedDims& g, const std::string& grading_name) {
  std::string s = "# " + grading_name + "\ndegree,dim\n";
  for (auto& [q, v] : g.dims) s += std::to_string(q) + "," + std::to_string(v) + "\n";
  return s;
}

std::string RunReport::to_text() const {
  std::string s = "task: " + task + "\n";
  if (!provenance.empty()) s += "provenance: " + provenance + "\n";
  for (auto& l : lines) s += l + "\n";
  for (auto& [name, table] : tables) s += name + ": " + table.to_string() + "\n";
  s += "violations: " + std::to_string(violations) + "\n";
  return s;
}

std::string RunReport::to_csv() const {
  std::string s;
  for (auto& [name, table] : tables) s += graded_table_csv(table, name);
  return s;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open output file: " + path);
  out << content;
  if (!out) throw Error("write failed: " + path);
}

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace conley
