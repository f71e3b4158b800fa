// Core domain types and small symmetric-matrix algebra shared by all modules.

#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace igc {

// ─── Error taxonomy ───────────────────────────────────────────────────────────

struct NotPositiveDefinite : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DomainViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DegenerateSample : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct QuadratureUnconverged : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SingularJacobian : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DegenerateRate : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SigmaCollapse : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct StepFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InsufficientWindow : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ─── Domain types ─────────────────────────────────────────────────────────────

/// Correlation between the two microvariables. Restricted to the open
/// interval (-1, 1); the degenerate endpoints are rejected at construction.
class CorrelationCoefficient {
 public:
  explicit CorrelationCoefficient(double r) : r_(r) {
    if (!(r > -1.0 && r < 1.0)) {
      throw DomainViolation("correlation coefficient r = " + std::to_string(r) +
                            " violates -1 < r < 1");
    }
  }
  double value() const noexcept { return r_; }

 private:
  double r_;
};

/// Point on the reduced three-parameter manifold (common spread sigma),
/// coordinate order (mu_x, mu_y, sigma). The correlation r is a fixed
/// parameter of the model family, not a coordinate.
struct ModelParams3 {
  double mu_x;
  double mu_y;
  double sigma;
  CorrelationCoefficient r;

  ModelParams3(double mu_x_, double mu_y_, double sigma_, CorrelationCoefficient r_)
      : mu_x(mu_x_), mu_y(mu_y_), sigma(sigma_), r(r_) {
    if (!(sigma > 0.0)) {
      throw DomainViolation("sigma = " + std::to_string(sigma) + " violates sigma > 0");
    }
  }
};

/// Point on the full four-parameter manifold, coordinate order
/// (mu_x, sigma_x, mu_y, sigma_y).
struct ModelParams4 {
  double mu_x;
  double sigma_x;
  double mu_y;
  double sigma_y;
  CorrelationCoefficient r;

  ModelParams4(double mu_x_, double sigma_x_, double mu_y_, double sigma_y_,
               CorrelationCoefficient r_)
      : mu_x(mu_x_), sigma_x(sigma_x_), mu_y(mu_y_), sigma_y(sigma_y_), r(r_) {
    if (!(sigma_x > 0.0)) {
      throw DomainViolation("sigma_x = " + std::to_string(sigma_x) + " violates sigma_x > 0");
    }
    if (!(sigma_y > 0.0)) {
      throw DomainViolation("sigma_y = " + std::to_string(sigma_y) + " violates sigma_y > 0");
    }
  }
};

/// Dense symmetric matrix of small dimension. Only the upper triangle is
/// stored; reads mirror it, so entries (i,j) and (j,i) are identical by
/// construction.
class SymMatrix {
 public:
  explicit SymMatrix(int dim) : dim_(dim), upper_(packed_size(dim), 0.0) {
    if (dim < 1) throw DomainViolation("SymMatrix dimension must be >= 1");
  }

  static SymMatrix identity(int dim) {
    SymMatrix m(dim);
    for (int i = 0; i < dim; ++i) m.set(i, i, 1.0);
    return m;
  }

  static SymMatrix diagonal(std::span<const double> d) {
    SymMatrix m(static_cast<int>(d.size()));
    for (int i = 0; i < m.dim(); ++i) m.set(i, i, d[i]);
    return m;
  }

  int dim() const noexcept { return dim_; }

  double operator()(int i, int j) const { return upper_[index(i, j)]; }

  void set(int i, int j, double v) { upper_[index(i, j)] = v; }

  void add(int i, int j, double v) { upper_[index(i, j)] += v; }

  /// Largest absolute entry-wise difference against another matrix of the
  /// same dimension.
  double max_abs_diff(const SymMatrix& other) const {
    double d = 0.0;
    for (std::size_t k = 0; k < upper_.size(); ++k) {
      d = std::max(d, std::abs(upper_[k] - other.upper_[k]));
    }
    return d;
  }

  double max_abs() const {
    double d = 0.0;
    for (double v : upper_) d = std::max(d, std::abs(v));
    return d;
  }

 private:
  static std::size_t packed_size(int dim) {
    return static_cast<std::size_t>(dim) * (dim + 1) / 2;
  }

  std::size_t index(int i, int j) const {
    if (i < 0 || j < 0 || i >= dim_ || j >= dim_) {
      throw std::out_of_range("SymMatrix index out of range");
    }
    if (i > j) std::swap(i, j);
    // row-major upper triangle
    return static_cast<std::size_t>(i) * (2 * dim_ - i - 1) / 2 + j;
  }

  int dim_;
  std::vector<double> upper_;
};

/// Numeric knobs shared across the toolkit.
struct Tolerances {
  double fd_step_scale;  ///< relative step for first-derivative central differences
  double ode_tol;        ///< integrator local error (absolute and relative)
  int quad_order;        ///< Gauss-Hermite nodes per axis
  double matrix_eps;     ///< identity-check tolerance for inverses

  static Tolerances defaults() {
    Tolerances t;
    t.fd_step_scale = std::cbrt(2.220446049250313e-16);
    t.ode_tol = 1e-10;
    t.quad_order = 64;
    t.matrix_eps = 1e-10;
    return t;
  }

  void validate() const {
    if (!(fd_step_scale > 0.0)) throw DomainViolation("fd_step_scale must be > 0");
    if (!(ode_tol > 0.0)) throw DomainViolation("ode_tol must be > 0");
    if (quad_order < 2) throw DomainViolation("quad_order must be >= 2");
    if (!(matrix_eps > 0.0)) throw DomainViolation("matrix_eps must be > 0");
  }
};

// ─── Operations ───────────────────────────────────────────────────────────────

/// Inverse of a symmetric positive definite matrix via Cholesky
/// factorization. Throws NotPositiveDefinite if a pivot is non-positive.
SymMatrix invert_spd(const SymMatrix& m);

/// Determinant. Direct cofactor expansion for dim <= 4, LU with partial
/// pivoting otherwise. Zero is a valid return value.
double determinant(const SymMatrix& m);

}  // namespace igc
