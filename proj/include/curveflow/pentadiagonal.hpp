#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "curveflow/errors.hpp"

namespace curveflow {

// Pentadiagonal linear system with periodic wraparound: row i couples
// unknowns i-2 .. i+2 (mod n).  Gauss-Seidel sweeps are the production
// solver; the dense LU path exists as an exact fallback and as the
// correctness oracle in the tests.
struct CyclicPentadiagonal {
  std::size_t n = 0;
  std::vector<double> sub2;  // coefficient of u[i-2]
  std::vector<double> sub1;  // coefficient of u[i-1]
  std::vector<double> diag;  // coefficient of u[i]
  std::vector<double> sup1;  // coefficient of u[i+1]
  std::vector<double> sup2;  // coefficient of u[i+2]
  std::vector<double> rhs;

  static CyclicPentadiagonal zeros(std::size_t n) {
    CyclicPentadiagonal s;
    s.n = n;
    s.sub2.assign(n, 0.0);
    s.sub1.assign(n, 0.0);
    s.diag.assign(n, 0.0);
    s.sup1.assign(n, 0.0);
    s.sup2.assign(n, 0.0);
    s.rhs.assign(n, 0.0);
    return s;
  }

  // (A u)_i with periodic index wrap.
  double row_apply(const std::vector<double>& u, std::size_t i) const {
    const std::size_t im1 = i == 0 ? n - 1 : i - 1;
    const std::size_t im2 = im1 == 0 ? n - 1 : im1 - 1;
    const std::size_t ip1 = i + 1 == n ? 0 : i + 1;
    const std::size_t ip2 = ip1 + 1 == n ? 0 : ip1 + 1;
    return sub2[i] * u[im2] + sub1[i] * u[im1] + diag[i] * u[i] + sup1[i] * u[ip1] +
           sup2[i] * u[ip2];
  }
};

inline double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// max_i |rhs_i - (A u)_i|
inline double residual_norm(const CyclicPentadiagonal& sys, const std::vector<double>& u) {
  double m = 0.0;
  for (std::size_t i = 0; i < sys.n; ++i) m = std::max(m, std::abs(sys.rhs[i] - sys.row_apply(u, i)));
  return m;
}

struct GaussSeidelResult {
  std::vector<double> solution;
  int iterations = 0;
};

// In-place Gauss-Seidel sweeps in index order.  Converged when the residual
// infinity norm drops below rel_tol * max(1, |rhs|_inf).  Throws ZeroDiagonal
// if any diagonal entry vanishes and NotConverged (carrying the final
// residual) when the iteration budget runs out or the iterate degenerates.
inline GaussSeidelResult solve_gauss_seidel(const CyclicPentadiagonal& sys,
                                            std::vector<double> guess, double rel_tol,
                                            int max_iters) {
  const std::size_t n = sys.n;
  for (std::size_t i = 0; i < n; ++i) {
    if (sys.diag[i] == 0.0) {
      throw ZeroDiagonal("gauss_seidel: zero diagonal entry at row " + std::to_string(i));
    }
  }
  if (guess.size() != n) guess.assign(n, 0.0);

  const double scale = std::max(1.0, inf_norm(sys.rhs));
  double residual = residual_norm(sys, guess);
  if (residual <= rel_tol * scale) return {std::move(guess), 0};

  for (int iter = 1; iter <= max_iters; ++iter) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t im1 = i == 0 ? n - 1 : i - 1;
      const std::size_t im2 = im1 == 0 ? n - 1 : im1 - 1;
      const std::size_t ip1 = i + 1 == n ? 0 : i + 1;
      const std::size_t ip2 = ip1 + 1 == n ? 0 : ip1 + 1;
      guess[i] = (sys.rhs[i] - sys.sub2[i] * guess[im2] - sys.sub1[i] * guess[im1] -
                  sys.sup1[i] * guess[ip1] - sys.sup2[i] * guess[ip2]) /
                 sys.diag[i];
    }
    residual = residual_norm(sys, guess);
    if (residual <= rel_tol * scale) return {std::move(guess), iter};
    if (!std::isfinite(residual)) {
      throw NotConverged("gauss_seidel: diverged (residual " + std::to_string(residual) +
                             " after " + std::to_string(iter) + " sweeps)",
                         residual, iter);
    }
  }
  throw NotConverged("gauss_seidel: residual " + std::to_string(residual) + " > tolerance after " +
                         std::to_string(max_iters) + " sweeps",
                     residual, max_iters);
}

// Exact solve of the explicitly materialized n x n matrix by LU with partial
// pivoting.  O(n^3); used as oracle and as the --solver dense fallback.
inline std::vector<double> solve_dense(const CyclicPentadiagonal& sys) {
  const std::size_t n = sys.n;
  std::vector<double> a(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t im1 = i == 0 ? n - 1 : i - 1;
    const std::size_t im2 = im1 == 0 ? n - 1 : im1 - 1;
    const std::size_t ip1 = i + 1 == n ? 0 : i + 1;
    const std::size_t ip2 = ip1 + 1 == n ? 0 : ip1 + 1;
    // += folds bands onto shared columns when n < 5
    a[i * n + im2] += sys.sub2[i];
    a[i * n + im1] += sys.sub1[i];
    a[i * n + i] += sys.diag[i];
    a[i * n + ip1] += sys.sup1[i];
    a[i * n + ip2] += sys.sup2[i];
  }

  double amax = 0.0;
  for (double v : a) amax = std::max(amax, std::abs(v));
  const double pivot_tol = amax * 1e-14 * static_cast<double>(n);
  if (amax == 0.0) throw SingularMatrix("solve_dense: zero matrix");

  std::vector<double> x = sys.rhs;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    double best = std::abs(a[col * n + col]);
    for (std::size_t row = col + 1; row < n; ++row) {
      const double v = std::abs(a[row * n + col]);
      if (v > best) {
        best = v;
        piv = row;
      }
    }
    if (best <= pivot_tol) {
      throw SingularMatrix("solve_dense: singular matrix (pivot " + std::to_string(best) +
                           " at column " + std::to_string(col) + ")");
    }
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a[piv * n + j], a[col * n + j]);
      std::swap(x[piv], x[col]);
    }
    const double inv = 1.0 / a[col * n + col];
    for (std::size_t row = col + 1; row < n; ++row) {
      const double factor = a[row * n + col] * inv;
      if (factor == 0.0) continue;
      for (std::size_t j = col; j < n; ++j) a[row * n + j] -= factor * a[col * n + j];
      x[row] -= factor * x[col];
    }
  }
  for (std::size_t ii = n; ii-- > 0;) {
    double sum = x[ii];
    for (std::size_t j = ii + 1; j < n; ++j) sum -= a[ii * n + j] * x[j];
    x[ii] = sum / a[ii * n + ii];
  }
  return x;
}

}  // namespace curveflow
