#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace conley {

using Vec = std::vector<double>;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A stated hypothesis does not hold (isolation lost, closeness gate unmet,
// Lyapunov violation, horizon too small). Maps to CLI exit code 2.
struct HypothesisError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

inline double dot(const Vec& a, const Vec& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

inline Vec operator+(Vec a, const Vec& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

inline Vec operator-(Vec a, const Vec& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  return a;
}

inline Vec operator*(double c, Vec a) {
  for (double& v : a) v *= c;
  return a;
}

inline void axpy(Vec& y, double c, const Vec& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += c * x[i];
}

inline bool all_finite(const Vec& x) {
  for (double v : x)
    if (!std::isfinite(v)) return false;
  return true;
}

// Small dense matrix, row-major.
struct DMatrix {
  int rows = 0, cols = 0;
  std::vector<double> a;

  DMatrix() = default;
  DMatrix(int r, int c) : rows(r), cols(c), a(std::size_t(r) * c, 0.0) {}
  double& operator()(int i, int j) { return a[std::size_t(i) * cols + j]; }
  double operator()(int i, int j) const { return a[std::size_t(i) * cols + j]; }

  Vec apply(const Vec& x) const {
    Vec y(rows, 0.0);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) y[i] += (*this)(i, j) * x[j];
    return y;
  }
};

// Solves A x = b by Gaussian elimination with partial pivoting.
// Throws Error if the pivot falls below tol.
Vec solve_dense(DMatrix A, Vec b, double tol = 1e-12);

// Eigenvalues of a symmetric matrix via cyclic Jacobi, ascending order.
// If vectors is non-null it receives the corresponding orthonormal columns.
std::vector<double> symmetric_eigenvalues(DMatrix A, DMatrix* vectors = nullptr);

double spectral_norm(const DMatrix& A);

// Deterministic splitmix64 generator. All sampling in the toolkit goes
// through this type so results do not depend on platform library details.
struct Rng {
  std::uint64_t state;

  explicit Rng(std::uint64_t seed = 0x9e3779b97f4a7c15ull) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  double uniform01() { return double(next() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  double normal() {
    // Box-Muller, always consumes two draws.
    double u1 = uniform01(), u2 = uniform01();
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  Vec point_in_box(const Vec& lo, const Vec& hi) {
    Vec x(lo.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = uniform(lo[i], hi[i]);
    return x;
  }
};

// Runs fn(begin, end) over disjoint chunks of [0, n). Output arrays indexed
// by the loop variable stay deterministic for any worker count.
void parallel_chunks(std::size_t n, int threads,
                     const std::function<void(std::size_t, std::size_t)>& fn);

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  return int(hw > 8 ? 8 : hw);
}

std::string format_double(double v);

}  // namespace conley
