#include "conley/core.hpp"

#include <algorithm>
#include <cstdio>

namespace conley {

Vec solve_dense(DMatrix A, Vec b, double tol) {
  const int n = A.rows;
  if (A.cols != n || int(b.size()) != n) throw Error("solve_dense: dimension mismatch");
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int i = k + 1; i < n; ++i)
      if (std::fabs(A(i, k)) > std::fabs(A(piv, k))) piv = i;
    if (std::fabs(A(piv, k)) < tol) throw Error("solve_dense: singular matrix");
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(A(piv, j), A(k, j));
      std::swap(b[piv], b[k]);
    }
    for (int i = k + 1; i < n; ++i) {
      double m = A(i, k) / A(k, k);
      if (m == 0.0) continue;
      for (int j = k; j < n; ++j) A(i, j) -= m * A(k, j);
      b[i] -= m * b[k];
    }
  }
  Vec x(n, 0.0);
  for (int i = n - 1; i >= 0; --i) {
    double s = b[i];
    for (int j = i + 1; j < n; ++j) s -= A(i, j) * x[j];
    x[i] = s / A(i, i);
  }
  return x;
}

std::vector<double> symmetric_eigenvalues(DMatrix A, DMatrix* vectors) {
  const int n = A.rows;
  if (A.cols != n) throw Error("symmetric_eigenvalues: not square");
  DMatrix V(n, n);
  for (int i = 0; i < n; ++i) V(i, i) = 1.0;
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += A(p, q) * A(p, q);
    if (off < 1e-26) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double apq = A(p, q);
        if (std::fabs(apq) < 1e-300) continue;
        double theta = 0.5 * (A(q, q) - A(p, p)) / apq;
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (int k = 0; k < n; ++k) {
          double akp = A(k, p), akq = A(k, q);
          A(k, p) = c * akp - s * akq;
          A(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          double apk = A(p, k), aqk = A(q, k);
          A(p, k) = c * apk - s * aqk;
          A(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          double vkp = V(k, p), vkq = V(k, q);
          V(k, p) = c * vkp - s * vkq;
          V(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return A(a, a) < A(b, b); });
  std::vector<double> ev(n);
  for (int i = 0; i < n; ++i) ev[i] = A(order[i], order[i]);
  if (vectors) {
    *vectors = DMatrix(n, n);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) (*vectors)(i, j) = V(i, order[j]);
  }
  return ev;
}

double spectral_norm(const DMatrix& A) {
  // Power iteration on A^T A with a fixed start vector.
  const int n = A.cols;
  if (n == 0 || A.rows == 0) return 0.0;
  Vec v(n, 1.0 / std::sqrt(double(n)));
  double lam = 0;
  for (int it = 0; it < 200; ++it) {
    Vec av(A.rows, 0.0);
    for (int i = 0; i < A.rows; ++i)
      for (int j = 0; j < n; ++j) av[i] += A(i, j) * v[j];
    Vec w(n, 0.0);
    for (int i = 0; i < A.rows; ++i)
      for (int j = 0; j < n; ++j) w[j] += A(i, j) * av[i];
    double nw = norm(w);
    if (nw == 0) return 0.0;
    for (double& c : w) c /= nw;
    double change = norm(w - v);
    v = w;
    lam = nw;
    if (change < 1e-13) break;
  }
  return std::sqrt(lam);
}

void parallel_chunks(std::size_t n, int threads,
                     const std::function<void(std::size_t, std::size_t)>& fn) {
  threads = resolve_threads(threads);
  if (n == 0) return;
  if (threads <= 1 || n < 64) {
    fn(0, n);
    return;
  }
  std::size_t nt = std::min<std::size_t>(threads, n);
  std::vector<std::thread> pool;
  pool.reserve(nt);
  std::size_t chunk = (n + nt - 1) / nt;
  for (std::size_t t = 0; t < nt; ++t) {
    std::size_t b = t * chunk;
    std::size_t e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&fn, b, e] { fn(b, e); });
  }
  for (auto& th : pool) th.join();
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace conley
