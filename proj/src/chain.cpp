#include "conley/chain.hpp"

#include "conley/core.hpp"

namespace conley {

bool ChainComplexZ2::boundary_squares_to_zero() const {
  for (int k = 0; k + 1 <= max_degree(); ++k) {
    const Z2Matrix& dk = boundary[std::size_t(k)];
    const Z2Matrix& dk1 = boundary[std::size_t(k) + 1];
    if (dk.rows == 0 || dk1.cols == 0) continue;
    // d_k (d_{k+1} e_j) via sparse column expansion of d_{k+1}.
    for (std::size_t j = 0; j < dk1.cols; ++j) {
      BitVec acc(dk.rows);
      for (std::size_t i = 0; i < dk1.rows; ++i) {
        if (!dk1.get(i, j)) continue;
        for (std::size_t t = 0; t < dk.rows; ++t)
          if (dk.get(t, i)) acc.flip(t);
      }
      if (acc.any()) return false;
    }
  }
  return true;
}

GradedDims homology_dims(const ChainComplexZ2& c) {
  if (!c.boundary_squares_to_zero())
    throw Error("homology_dims: boundary does not square to zero");
  GradedDims g;
  for (int k = 0; k <= c.max_degree(); ++k) {
    std::size_t n = c.generators(k);
    if (n == 0) continue;
    std::size_t rk = rank_z2(c.boundary[std::size_t(k)]);
    std::size_t rk1 = (k + 1 <= c.max_degree()) ? rank_z2(c.boundary[std::size_t(k) + 1]) : 0;
    g.set(k, n - rk - rk1);
  }
  return g;
}

CohomologyBasis cohomology_basis(const ChainComplexZ2& c) {
  CohomologyBasis out;
  int maxd = c.max_degree();
  out.reps.resize(std::size_t(maxd) + 1);
  out.coboundaries.resize(std::size_t(maxd) + 1);
  for (int k = 0; k <= maxd; ++k) {
    std::size_t n = c.generators(k);
    if (n == 0) continue;
    // Coboundary delta^k = transpose of boundary_{k+1}: C^k -> C^{k+1}.
    Z2Matrix delta_k(0, n);
    if (k + 1 <= maxd) delta_k = c.boundary[std::size_t(k) + 1].transposed();
    std::vector<BitVec> cocycles =
        delta_k.rows == 0 ? std::vector<BitVec>() : kernel_basis(delta_k);
    if (delta_k.rows == 0) {
      // Everything is a cocycle.
      cocycles.reserve(n);
      for (std::size_t j = 0; j < n; ++j) {
        BitVec e(n);
        e.set(j, true);
        cocycles.push_back(e);
      }
    }
    // Image of delta^{k-1} inside C^k.
    std::vector<BitVec> cobs;
    if (k >= 1 && c.generators(k - 1) > 0) {
      Z2Matrix delta_prev = c.boundary[std::size_t(k)].transposed();
      // Independent columns of delta_prev = coboundary basis.
      std::vector<BitVec> cols;
      for (std::size_t j = 0; j < delta_prev.cols; ++j) cols.push_back(delta_prev.col(j));
      std::vector<BitVec> reduced;
      for (auto& v : cols) {
        BitVec r = v;
        bool progressed = true;
        while (r.any() && progressed) {
          progressed = false;
          std::size_t lo = r.low();
          for (auto& p : reduced)
            if (p.low() == lo) {
              r ^= p;
              progressed = true;
              break;
            }
        }
        if (r.any()) reduced.push_back(r);
      }
      cobs = reduced;
    }
    // Extend the coboundary basis to a basis of cocycles; additions represent H^k.
    std::vector<BitVec> reps;
    {
      std::vector<BitVec> echelon;
      for (auto& v : cobs) {
        BitVec r = v;
        bool progressed = true;
        while (r.any() && progressed) {
          progressed = false;
          std::size_t lo = r.low();
          for (auto& p : echelon)
            if (p.low() == lo) {
              r ^= p;
              progressed = true;
              break;
            }
        }
        if (r.any()) echelon.push_back(r);
      }
      for (auto& z : cocycles) {
        BitVec r = z;
        bool progressed = true;
        while (r.any() && progressed) {
          progressed = false;
          std::size_t lo = r.low();
          for (auto& p : echelon)
            if (p.low() == lo) {
              r ^= p;
              progressed = true;
              break;
            }
        }
        if (r.any()) {
          echelon.push_back(r);
          reps.push_back(z);  // keep the original cocycle as representative
        }
      }
    }
    out.reps[std::size_t(k)] = std::move(reps);
    out.coboundaries[std::size_t(k)] = std::move(cobs);
  }
  return out;
}

BitVec CohomologyBasis::coordinates(int k, const BitVec& cocycle) const {
  if (k < 0 || k >= int(reps.size())) throw Error("cohomology coordinates: bad degree");
  const auto& r = reps[std::size_t(k)];
  const auto& b = coboundaries[std::size_t(k)];
  std::vector<BitVec> span;
  span.reserve(b.size() + r.size());
  for (auto& v : b) span.push_back(v);
  for (auto& v : r) span.push_back(v);
  auto sol = solve_in_span(span, cocycle);
  if (!sol) throw Error("cohomology coordinates: vector not a cocycle class member");
  BitVec coords(r.size());
  for (std::size_t i = 0; i < r.size(); ++i)
    if (sol->get(b.size() + i)) coords.set(i, true);
  return coords;
}

GradedDims cohomology_dims(const ChainComplexZ2& c) {
  CohomologyBasis basis = cohomology_basis(c);
  GradedDims g;
  for (int k = 0; k <= c.max_degree(); ++k) g.set(k, basis.dim(k));
  return g;
}

}  // namespace conley
