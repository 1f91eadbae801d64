#include "conley/z2.hpp"

#include <bit>

#include "conley/core.hpp"

namespace conley {

std::size_t BitVec::low() const {
  for (std::size_t w = 0; w < words.size(); ++w)
    if (words[w]) return (w << 6) + std::size_t(std::countr_zero(words[w]));
  return size;
}

std::size_t BitVec::popcount() const {
  std::size_t n = 0;
  for (auto w : words) n += std::size_t(std::popcount(w));
  return n;
}

BitVec Z2Matrix::row(std::size_t i) const {
  BitVec v(cols);
  for (std::size_t w = 0; w < wpr; ++w) v.words[w] = data[i * wpr + w];
  return v;
}

BitVec Z2Matrix::col(std::size_t j) const {
  BitVec v(rows);
  for (std::size_t i = 0; i < rows; ++i)
    if (get(i, j)) v.set(i, true);
  return v;
}

void Z2Matrix::set_col(std::size_t j, const BitVec& v) {
  for (std::size_t i = 0; i < rows; ++i) set(i, j, v.get(i));
}

Z2Matrix Z2Matrix::transposed() const {
  Z2Matrix t(cols, rows);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t w = 0; w < wpr; ++w) {
      std::uint64_t bits = data[i * wpr + w];
      while (bits) {
        int b = std::countr_zero(bits);
        bits &= bits - 1;
        t.set((w << 6) + std::size_t(b), i, true);
      }
    }
  return t;
}

bool Z2Matrix::is_zero() const {
  for (auto w : data)
    if (w) return false;
  return true;
}

Z2Matrix Z2Matrix::identity(std::size_t n) {
  Z2Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
  return m;
}

Z2Matrix Z2Matrix::from_rows(std::size_t cols, const std::vector<std::vector<int>>& rows) {
  Z2Matrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (int j : rows[i]) m.set(i, std::size_t(j), true);
  return m;
}

Z2Matrix multiply(const Z2Matrix& a, const Z2Matrix& b) {
  if (a.cols != b.rows) throw Error("z2 multiply: dimension mismatch");
  Z2Matrix c(a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t w = 0; w < a.wpr; ++w) {
      std::uint64_t bits = a.data[i * a.wpr + w];
      while (bits) {
        int bit = std::countr_zero(bits);
        bits &= bits - 1;
        std::size_t k = (w << 6) + std::size_t(bit);
        for (std::size_t ww = 0; ww < b.wpr; ++ww)
          c.data[i * c.wpr + ww] ^= b.data[k * b.wpr + ww];
      }
    }
  }
  return c;
}

namespace {

// Incremental eliminator with lowest-index pivot rule. Rows are fed in a
// fixed order so the reduced set is independent of caller parallelism.
struct Eliminator {
  std::vector<BitVec> pivots;            // reduced rows, one per pivot
  std::vector<std::size_t> pivot_index;  // lowest set bit of each

  // Reduces v against present pivots; returns the residue.
  BitVec reduce(BitVec v) const {
    while (v.any()) {
      std::size_t lo = v.low();
      bool hit = false;
      for (std::size_t p = 0; p < pivots.size(); ++p) {
        if (pivot_index[p] == lo) {
          v ^= pivots[p];
          hit = true;
          break;
        }
      }
      if (!hit) break;
    }
    return v;
  }

  // Adds v if independent; returns true when the rank grew.
  bool add(const BitVec& v) {
    BitVec r = reduce(v);
    if (!r.any()) return false;
    pivot_index.push_back(r.low());
    pivots.push_back(std::move(r));
    return true;
  }
};

}  // namespace

std::size_t rank_z2(const Z2Matrix& m) {
  Eliminator e;
  std::size_t rank = 0;
  for (std::size_t i = 0; i < m.rows; ++i)
    if (e.add(m.row(i))) ++rank;
  return rank;
}

std::vector<BitVec> kernel_basis(const Z2Matrix& m) {
  // Reduce columns while tracking the combination that produced each.
  struct Tracked {
    BitVec val, comb;
  };
  std::vector<Tracked> pivots;
  std::vector<BitVec> kernel;
  for (std::size_t j = 0; j < m.cols; ++j) {
    BitVec v = m.col(j);
    BitVec comb(m.cols);
    comb.set(j, true);
    bool progressed = true;
    while (v.any() && progressed) {
      progressed = false;
      std::size_t lo = v.low();
      for (auto& p : pivots) {
        if (p.val.low() == lo) {
          v ^= p.val;
          comb ^= p.comb;
          progressed = true;
          break;
        }
      }
    }
    if (v.any())
      pivots.push_back({std::move(v), std::move(comb)});
    else
      kernel.push_back(std::move(comb));
  }
  return kernel;
}

std::optional<BitVec> solve_in_span(const std::vector<BitVec>& span, const BitVec& target) {
  struct Tracked {
    BitVec val, comb;
  };
  std::vector<Tracked> pivots;
  for (std::size_t j = 0; j < span.size(); ++j) {
    BitVec v = span[j];
    BitVec comb(span.size());
    comb.set(j, true);
    bool progressed = true;
    while (v.any() && progressed) {
      progressed = false;
      std::size_t lo = v.low();
      for (auto& p : pivots) {
        if (p.val.low() == lo) {
          v ^= p.val;
          comb ^= p.comb;
          progressed = true;
          break;
        }
      }
    }
    if (v.any()) pivots.push_back({std::move(v), std::move(comb)});
  }
  BitVec v = target;
  BitVec comb(span.size());
  bool progressed = true;
  while (v.any() && progressed) {
    progressed = false;
    std::size_t lo = v.low();
    for (auto& p : pivots) {
      if (p.val.low() == lo) {
        v ^= p.val;
        comb ^= p.comb;
        progressed = true;
        break;
      }
    }
  }
  if (v.any()) return std::nullopt;
  return comb;
}

std::string GradedDims::to_string() const {
  std::string s = "{";
  bool first = true;
  for (auto& [q, v] : dims) {
    if (!first) s += ", ";
    first = false;
    s += std::to_string(q) + ": " + std::to_string(v);
  }
  s += "}";
  return s;
}

}  // namespace conley
