#include "igc/core.hpp"

#include <array>
#include <cmath>

namespace igc {

namespace {

// Lower-triangular Cholesky factor of a symmetric positive definite matrix,
// stored dense row-major. Throws if a pivot is not strictly positive.
std::vector<double> cholesky(const SymMatrix& m) {
  const int n = m.dim();
  std::vector<double> L(static_cast<std::size_t>(n) * n, 0.0);
  for (int j = 0; j < n; ++j) {
    double d = m(j, j);
    for (int k = 0; k < j; ++k) d -= L[j * n + k] * L[j * n + k];
    if (!(d > 0.0)) {
      throw NotPositiveDefinite("pivot " + std::to_string(j) +
                                " is not positive during Cholesky factorization");
    }
    L[j * n + j] = std::sqrt(d);
    for (int i = j + 1; i < n; ++i) {
      double s = m(i, j);
      for (int k = 0; k < j; ++k) s -= L[i * n + k] * L[j * n + k];
      L[i * n + j] = s / L[j * n + j];
    }
  }
  return L;
}

}  // namespace

SymMatrix invert_spd(const SymMatrix& m) {
  const int n = m.dim();
  const std::vector<double> L = cholesky(m);

  // Solve L L^T X = e_j column by column.
  SymMatrix inv(n);
  std::vector<double> y(n), x(n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      double s = (i == j) ? 1.0 : 0.0;
      for (int k = 0; k < i; ++k) s -= L[i * n + k] * y[k];
      y[i] = s / L[i * n + i];
    }
    for (int i = n - 1; i >= 0; --i) {
      double s = y[i];
      for (int k = i + 1; k < n; ++k) s -= L[k * n + i] * x[k];
      x[i] = s / L[i * n + i];
    }
    for (int i = j; i < n; ++i) inv.set(i, j, x[i]);
  }
  return inv;
}

double determinant(const SymMatrix& m) {
  const int n = m.dim();
  switch (n) {
    case 1:
      return m(0, 0);
    case 2:
      return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    case 3:
      return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
             m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
             m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    case 4: {
      // Expansion along the first row with 3x3 cofactors.
      auto minor3 = [&](int r0, int r1, int r2, int c0, int c1, int c2) {
        return m(r0, c0) * (m(r1, c1) * m(r2, c2) - m(r1, c2) * m(r2, c1)) -
               m(r0, c1) * (m(r1, c0) * m(r2, c2) - m(r1, c2) * m(r2, c0)) +
               m(r0, c2) * (m(r1, c0) * m(r2, c1) - m(r1, c1) * m(r2, c0));
      };
      return m(0, 0) * minor3(1, 2, 3, 1, 2, 3) - m(0, 1) * minor3(1, 2, 3, 0, 2, 3) +
             m(0, 2) * minor3(1, 2, 3, 0, 1, 3) - m(0, 3) * minor3(1, 2, 3, 0, 1, 2);
    }
    default: {
      // LU with partial pivoting; only reached for the 2n-dimensional
      // diagonal-product metrics with n > 2.
      std::vector<double> a(static_cast<std::size_t>(n) * n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a[i * n + j] = m(i, j);
      double det = 1.0;
      for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int i = k + 1; i < n; ++i)
          if (std::abs(a[i * n + k]) > std::abs(a[piv * n + k])) piv = i;
        if (a[piv * n + k] == 0.0) return 0.0;
        if (piv != k) {
          for (int j = 0; j < n; ++j) std::swap(a[piv * n + j], a[k * n + j]);
          det = -det;
        }
        det *= a[k * n + k];
        for (int i = k + 1; i < n; ++i) {
          const double f = a[i * n + k] / a[k * n + k];
          for (int j = k; j < n; ++j) a[i * n + j] -= f * a[k * n + j];
        }
      }
      return det;
    }
  }
}

}  // namespace igc
