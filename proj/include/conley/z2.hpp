#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace conley {

// Dense bit vector over Z2.
struct BitVec {
  std::size_t size = 0;
  std::vector<std::uint64_t> words;

  BitVec() = default;
  explicit BitVec(std::size_t n) : size(n), words((n + 63) / 64, 0) {}

  bool get(std::size_t i) const { return (words[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i, bool v) {
    std::uint64_t m = std::uint64_t(1) << (i & 63);
    if (v)
      words[i >> 6] |= m;
    else
      words[i >> 6] &= ~m;
  }
  void flip(std::size_t i) { words[i >> 6] ^= std::uint64_t(1) << (i & 63); }

  void operator^=(const BitVec& o) {
    for (std::size_t w = 0; w < words.size(); ++w) words[w] ^= o.words[w];
  }

  bool any() const {
    for (auto w : words)
      if (w) return true;
    return false;
  }

  // Lowest set bit index, or size if none.
  std::size_t low() const;

  std::size_t popcount() const;

  bool operator==(const BitVec& o) const {
    return size == o.size && words == o.words;
  }
};

// Bit-packed matrix over Z2, rows stored contiguously.
struct Z2Matrix {
  std::size_t rows = 0, cols = 0;
  std::size_t wpr = 0;  // words per row
  std::vector<std::uint64_t> data;

  Z2Matrix() = default;
  Z2Matrix(std::size_t r, std::size_t c)
      : rows(r), cols(c), wpr((c + 63) / 64), data(r * wpr, 0) {}

  bool get(std::size_t i, std::size_t j) const {
    return (data[i * wpr + (j >> 6)] >> (j & 63)) & 1u;
  }
  void set(std::size_t i, std::size_t j, bool v) {
    std::uint64_t m = std::uint64_t(1) << (j & 63);
    if (v)
      data[i * wpr + (j >> 6)] |= m;
    else
      data[i * wpr + (j >> 6)] &= ~m;
  }

  BitVec row(std::size_t i) const;
  BitVec col(std::size_t j) const;
  void set_col(std::size_t j, const BitVec& v);

  Z2Matrix transposed() const;
  bool is_zero() const;
  bool operator==(const Z2Matrix& o) const {
    return rows == o.rows && cols == o.cols && data == o.data;
  }

  static Z2Matrix identity(std::size_t n);
  static Z2Matrix from_rows(std::size_t cols, const std::vector<std::vector<int>>& rows);
};

Z2Matrix multiply(const Z2Matrix& a, const Z2Matrix& b);

// Z2 rank by row elimination with lowest-index pivots; input untouched.
std::size_t rank_z2(const Z2Matrix& m);

// Basis of { x : M x = 0 }, one BitVec of length cols per basis vector,
// deterministic order.
std::vector<BitVec> kernel_basis(const Z2Matrix& m);

// Expresses target in the span of the given vectors if possible.
// Returns coefficient bits (one per input vector).
std::optional<BitVec> solve_in_span(const std::vector<BitVec>& span, const BitVec& target);

// Graded table of Z2 dimensions. `dims` holds the nonzero entries keyed by
// degree; `offset` records the accumulated grading shift relative to the raw
// complex degrees. Table comparisons ignore the offset.
struct GradedDims {
  int offset = 0;
  std::map<int, std::size_t> dims;

  std::size_t at(int q) const {
    auto it = dims.find(q);
    return it == dims.end() ? 0 : it->second;
  }
  void set(int q, std::size_t v) {
    if (v)
      dims[q] = v;
    else
      dims.erase(q);
  }

  GradedDims shifted(int s) const {
    GradedDims g;
    g.offset = offset + s;
    for (auto& [q, v] : dims) g.dims[q + s] = v;
    return g;
  }

  bool nonzero() const { return !dims.empty(); }
  bool same_table(const GradedDims& o) const { return dims == o.dims; }

  std::string to_string() const;
};

}  // namespace conley
