// Gaussian model family: densities, analytic Fisher information matrices,
// an independent quadrature estimator, sampling, and correlation statistics.

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "igc/core.hpp"

namespace igc {

/// Bivariate Gaussian with correlation held fixed; the manifold coordinates
/// are (mu_x, sigma_x, mu_y, sigma_y).
struct BivariateGaussian {
  ModelParams4 params;
};

/// Product of n independent univariate Gaussians, coordinates
/// (mu_1, sigma_1, ..., mu_n, sigma_n).
struct DiagonalGaussianProduct {
  std::vector<double> means;
  std::vector<double> sigmas;

  DiagonalGaussianProduct(std::vector<double> means_, std::vector<double> sigmas_)
      : means(std::move(means_)), sigmas(std::move(sigmas_)) {
    if (means.size() != sigmas.size() || means.empty()) {
      throw DomainViolation("diagonal product needs matching non-empty means/sigmas");
    }
    for (double s : sigmas) {
      if (!(s > 0.0)) throw DomainViolation("diagonal product sigma must be > 0");
    }
  }

  int n() const noexcept { return static_cast<int>(means.size()); }
};

/// Natural log of the bivariate density at (x, y). Finite for all finite
/// inputs.
double log_density(const BivariateGaussian& model, double x, double y);

/// Score vector d log P / d(mu_x, sigma_x, mu_y, sigma_y) at (x, y).
std::array<double, 4> score(const BivariateGaussian& model, double x, double y);

/// Fisher information matrix of the bivariate model in closed form,
/// coordinate order (mu_x, sigma_x, mu_y, sigma_y). Symmetric positive
/// definite for all valid parameters.
SymMatrix fisher_metric_analytic_4d(const ModelParams4& params);

/// Fisher information matrix estimated by tensor-product Gauss-Hermite
/// quadrature of the score outer product, integrating in coordinates
/// whitened by the model's own covariance. Serves as the independent
/// oracle for the closed form. Throws QuadratureUnconverged if doubling
/// the order moves any component by more than 10x the 1e-8 target.
SymMatrix fisher_metric_quadrature(const BivariateGaussian& model,
                                   const Tolerances& tol = Tolerances::defaults());

/// Quadrature of the density over the plane; equals 1 up to quadrature
/// error for any valid parameters. Exercises the normalizer and quadratic
/// form of log_density end to end.
double density_normalization_quadrature(const BivariateGaussian& model,
                                        const Tolerances& tol = Tolerances::defaults());

/// Fisher information matrix of the equal-spread reduced model, coordinate
/// order (mu_x, mu_y, sigma). Every entry scales as 1/sigma^2.
SymMatrix fisher_metric_reduced(const ModelParams3& params);

/// Diagonal Fisher information matrix of the independent product model,
/// entries 1/sigma_j^2 (means) and 2/sigma_j^2 (spreads).
SymMatrix fisher_metric_diagonal(const DiagonalGaussianProduct& model);

/// Sample correlation using population-style (1/N) moments. Throws
/// DegenerateSample if either coordinate has zero variance or fewer than
/// two samples are given.
double correlation_coefficient(std::span<const std::pair<double, double>> samples);

struct LinearMsqFit {
  double c1;        ///< intercept on the standardized variables
  double c2;        ///< slope on the standardized variables
  double residual;  ///< minimal mean-square residual
};

/// Best mean-square linear approximation of the first standardized variable
/// by the second: minimizes <(eta1 - c1 - c2*eta2)^2>. The minimizer is
/// c1 = 0, c2 = sample correlation, residual = 1 - correlation^2, all up to
/// floating-point rounding.
LinearMsqFit best_linear_msq(std::span<const std::pair<double, double>> samples);

/// PRNG pipeline identifier recorded in output metadata.
inline constexpr const char* kSamplerName = "mt19937_64+box-muller";

/// Deterministic draws from the bivariate model: mt19937_64 feeding a
/// Box-Muller transform, then the Cholesky factor of the covariance.
std::vector<std::pair<double, double>> sample_bivariate(const BivariateGaussian& model,
                                                        std::size_t count,
                                                        std::uint64_t seed);

/// Nodes and weights for integrals against the standard normal density:
/// integral f(x) phi(x) dx ~ sum w_i f(x_i).
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Hermite rule rescaled to the standard normal weight.
QuadratureRule gauss_hermite_normal(int order);

}  // namespace igc
