// Generic Riemannian machinery: Christoffel symbols, Ricci tensor and scalar
// curvature of an arbitrary metric field, with analytic-derivative and
// finite-difference backends, plus metric pullback under reparametrization.

#pragma once

#include <functional>
#include <vector>

#include "igc/core.hpp"

namespace igc {

enum class DerivativeMode { analytic, finite_difference };

/// A metric tensor as a field over coordinates. `eval` must return a
/// symmetric positive definite matrix everywhere `in_domain` holds. In
/// analytic mode the exact first and second coordinate derivatives are
/// supplied by the caller; in finite-difference mode they are obtained by
/// central differences of `eval`.
struct MetricField {
  int dim = 0;
  DerivativeMode mode = DerivativeMode::finite_difference;
  std::function<SymMatrix(std::span<const double>)> eval;
  std::function<bool(std::span<const double>)> in_domain;  // null: everywhere
  std::function<SymMatrix(std::span<const double>, int)> first_derivative;
  std::function<SymMatrix(std::span<const double>, int, int)> second_derivative;
  /// Characteristic length per axis, used to size finite-difference steps.
  /// Null means max(1, |x_l|). Scale-invariant families (metric entries
  /// proportional to powers of a coordinate) should return that coordinate
  /// so steps shrink with it.
  std::function<double(std::span<const double>, int)> fd_scale;
};

/// Connection coefficients Gamma^k_ij at a single point, symmetric in the
/// two lower indices by construction.
class ChristoffelField {
 public:
  explicit ChristoffelField(int dim)
      : dim_(dim), gamma_(static_cast<std::size_t>(dim) * dim * dim, 0.0) {}

  int dim() const noexcept { return dim_; }

  double operator()(int k, int i, int j) const { return gamma_[offset(k, i, j)]; }

  void set(int k, int i, int j, double v) {
    gamma_[offset(k, i, j)] = v;
    gamma_[offset(k, j, i)] = v;
  }

  double max_abs_diff(const ChristoffelField& other) const {
    double d = 0.0;
    for (std::size_t a = 0; a < gamma_.size(); ++a) {
      d = std::max(d, std::abs(gamma_[a] - other.gamma_[a]));
    }
    return d;
  }

 private:
  std::size_t offset(int k, int i, int j) const {
    return (static_cast<std::size_t>(k) * dim_ + i) * dim_ + j;
  }

  int dim_;
  std::vector<double> gamma_;
};

struct CurvatureReport {
  std::vector<double> point;
  SymMatrix ricci;
  double scalar;
};

/// Γ^k_ij = (1/2) g^km (d_i g_mj + d_j g_im - d_m g_ij).
ChristoffelField christoffel(const MetricField& field, std::span<const double> point,
                             const Tolerances& tol = Tolerances::defaults());

/// Closed-form connection coefficients of the reduced model, index order
/// (1,2,3) = (mu_x, mu_y, sigma).
ChristoffelField christoffel_reduced_analytic(const ModelParams3& params);

/// Ricci tensor R_ij = d_k Γ^k_ij - d_j Γ^k_ik + Γ^k_ij Γ^n_kn - Γ^m_ik Γ^k_jm.
SymMatrix ricci_tensor(const MetricField& field, std::span<const double> point,
                       const Tolerances& tol = Tolerances::defaults());

/// Full contraction R_ij g^ij.
double scalar_curvature(const MetricField& field, std::span<const double> point,
                        const Tolerances& tol = Tolerances::defaults());

/// Ricci tensor and scalar bundled; in analytic mode the scalar is
/// recomputed from the returned Ricci as a consistency check.
CurvatureReport curvature_report(const MetricField& field, std::span<const double> point,
                                 const Tolerances& tol = Tolerances::defaults());

/// Invertible coordinate change theta' = f(theta), described by the inverse
/// map and its Jacobian: to_base(theta') = f^{-1}(theta') and
/// jacobian_to_base(theta')[a][m] = d theta^a / d theta'^m (row-major).
struct CoordinateMap {
  std::function<std::vector<double>(std::span<const double>)> to_base;
  std::function<std::vector<double>(std::span<const double>)> jacobian_to_base;
};

/// Metric transported to the new coordinates: g'(theta') = J^T g(f^{-1}(theta')) J.
/// Throws SingularJacobian if the Jacobian is singular at the point.
SymMatrix pullback_metric(const MetricField& base, const CoordinateMap& map,
                          std::span<const double> point_prime);

/// The transported metric as a field over the new coordinates
/// (finite-difference mode).
MetricField pullback_field(const MetricField& base, const CoordinateMap& map);

// ─── Shipped metric fields ────────────────────────────────────────────────────

/// Reduced-model metric over (mu_x, mu_y, sigma) with fixed correlation.
MetricField reduced_metric_field(CorrelationCoefficient r,
                                 DerivativeMode mode = DerivativeMode::analytic);

/// Full-model metric over (mu_x, sigma_x, mu_y, sigma_y) with fixed
/// correlation.
MetricField full4d_metric_field(CorrelationCoefficient r,
                                DerivativeMode mode = DerivativeMode::analytic);

/// Independent-product metric over (mu_1, sigma_1, ..., mu_n, sigma_n).
MetricField diagonal_metric_field(int n, DerivativeMode mode = DerivativeMode::analytic);

/// Constant metric (zero curvature); used as the flat reference case.
MetricField constant_metric_field(const SymMatrix& g,
                                  DerivativeMode mode = DerivativeMode::analytic);

/// sigma -> exp(s) reparametrization of the reduced model: new coordinates
/// (mu_x, mu_y, s) with sigma = exp(s).
CoordinateMap exp_spread_map();

}  // namespace igc
