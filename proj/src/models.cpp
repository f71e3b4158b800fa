#include "igc/models.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace igc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Neumaier compensated accumulator; keeps million-sample moment sums at
// a few ulps instead of O(N*eps).
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct BivariateMoments {
  double mean_x, mean_y;
  double var_x, var_y;  // population (1/N) convention
  double cov;
  std::size_t n;
};

BivariateMoments moments(std::span<const std::pair<double, double>> samples) {
  if (samples.size() < 2) {
    throw DegenerateSample("need at least 2 samples, got " + std::to_string(samples.size()));
  }
  CompensatedSum sx, sy;
  for (const auto& [x, y] : samples) {
    sx.add(x);
    sy.add(y);
  }
  const double n = static_cast<double>(samples.size());
  BivariateMoments m;
  m.n = samples.size();
  m.mean_x = sx.value() / n;
  m.mean_y = sy.value() / n;
  CompensatedSum sxx, syy, sxy;
  for (const auto& [x, y] : samples) {
    const double dx = x - m.mean_x;
    const double dy = y - m.mean_y;
    sxx.add(dx * dx);
    syy.add(dy * dy);
    sxy.add(dx * dy);
  }
  m.var_x = sxx.value() / n;
  m.var_y = syy.value() / n;
  m.cov = sxy.value() / n;
  if (!(m.var_x > 0.0) || !(m.var_y > 0.0)) {
    throw DegenerateSample("zero sample variance in at least one coordinate");
  }
  return m;
}

}  // namespace

double log_density(const BivariateGaussian& model, double x, double y) {
  const auto& p = model.params;
  const double r = p.r.value();
  const double u = (x - p.mu_x) / p.sigma_x;
  const double v = (y - p.mu_y) / p.sigma_y;
  const double q = 1.0 / (1.0 - r * r);
  const double quad = q * (u * u - 2.0 * r * u * v + v * v);
  return -std::log(kTwoPi * p.sigma_x * p.sigma_y * std::sqrt(1.0 - r * r)) - 0.5 * quad;
}

std::array<double, 4> score(const BivariateGaussian& model, double x, double y) {
  const auto& p = model.params;
  const double r = p.r.value();
  const double u = (x - p.mu_x) / p.sigma_x;
  const double v = (y - p.mu_y) / p.sigma_y;
  const double q = 1.0 / (1.0 - r * r);
  return {q * (u - r * v) / p.sigma_x,                  // d/d mu_x
          (q * (u * u - r * u * v) - 1.0) / p.sigma_x,  // d/d sigma_x
          q * (v - r * u) / p.sigma_y,                  // d/d mu_y
          (q * (v * v - r * u * v) - 1.0) / p.sigma_y};
}

SymMatrix fisher_metric_analytic_4d(const ModelParams4& p) {
  const double r = p.r.value();
  const double w = 1.0 / (1.0 - r * r);
  const double sx2 = p.sigma_x * p.sigma_x;
  const double sy2 = p.sigma_y * p.sigma_y;
  const double sxy = p.sigma_x * p.sigma_y;

  SymMatrix g(4);
  g.set(0, 0, w / sx2);
  g.set(0, 2, -r * w / sxy);
  g.set(1, 1, (2.0 - r * r) * w / sx2);
  g.set(1, 3, -r * r * w / sxy);
  g.set(2, 2, w / sy2);
  g.set(3, 3, (2.0 - r * r) * w / sy2);
  return g;
}

QuadratureRule gauss_hermite_normal(int order) {
  if (order < 1) throw DomainViolation("quadrature order must be >= 1");
  // Golub-Welsch on the Jacobi matrix of the (physicists') Hermite
  // polynomials; weights from the squared first eigenvector components.
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(order, order);
  for (int i = 1; i < order; ++i) {
    const double b = std::sqrt(i / 2.0);
    J(i - 1, i) = b;
    J(i, i - 1) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  QuadratureRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const double sqrt2 = std::numbers::sqrt2;
  for (int i = 0; i < order; ++i) {
    const double v0 = es.eigenvectors()(0, i);
    // Rescale from weight exp(-z^2) to the standard normal density:
    // x = sqrt(2) z, w -> w / sqrt(pi).
    rule.nodes[i] = sqrt2 * es.eigenvalues()(i);
    rule.weights[i] = v0 * v0;  // already normalized: sum = 1
  }
  return rule;
}

namespace {

SymMatrix fisher_quadrature_at_order(const BivariateGaussian& model, int order) {
  const auto& p = model.params;
  const double r = p.r.value();
  const double c = std::sqrt(1.0 - r * r);
  const double q = 1.0 / (1.0 - r * r);
  const QuadratureRule rule = gauss_hermite_normal(order);

  SymMatrix g(4);
  for (int i = 0; i < order; ++i) {
    const double s = rule.nodes[i];
    for (int j = 0; j < order; ++j) {
      const double t = rule.nodes[j];
      const double w = rule.weights[i] * rule.weights[j];
      // Whitened coordinates: u and v are the standardized residuals, so
      // u = s and v = r s + sqrt(1-r^2) t.
      const double u = s;
      const double v = r * s + c * t;
      const std::array<double, 4> sc = {
          q * (u - r * v) / p.sigma_x, (q * (u * u - r * u * v) - 1.0) / p.sigma_x,
          q * (v - r * u) / p.sigma_y, (q * (v * v - r * u * v) - 1.0) / p.sigma_y};
      for (int a = 0; a < 4; ++a)
        for (int b = a; b < 4; ++b) g.add(a, b, w * sc[a] * sc[b]);
    }
  }
  return g;
}

}  // namespace

SymMatrix fisher_metric_quadrature(const BivariateGaussian& model, const Tolerances& tol) {
  constexpr double kTarget = 1e-8;
  const SymMatrix coarse = fisher_quadrature_at_order(model, tol.quad_order);
  const SymMatrix fine = fisher_quadrature_at_order(model, 2 * tol.quad_order);
  if (coarse.max_abs_diff(fine) > 10.0 * kTarget) {
    throw QuadratureUnconverged("doubling the quadrature order moved a component by " +
                                std::to_string(coarse.max_abs_diff(fine)));
  }
  return fine;
}

double density_normalization_quadrature(const BivariateGaussian& model, const Tolerances& tol) {
  const auto& p = model.params;
  const double r = p.r.value();
  const double c = std::sqrt(1.0 - r * r);
  const double jac = p.sigma_x * p.sigma_y * c;
  const QuadratureRule rule = gauss_hermite_normal(tol.quad_order);

  // integral of exp(log_density) over the plane, transformed to whitened
  // coordinates; the normal weight absorbed by the rule is divided back out
  // so the density itself is what gets integrated.
  CompensatedSum total;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double s = rule.nodes[i];
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
      const double t = rule.nodes[j];
      const double x = p.mu_x + p.sigma_x * s;
      const double y = p.mu_y + p.sigma_y * (r * s + c * t);
      const double log_weight = -0.5 * (s * s + t * t) - std::log(kTwoPi);
      const double f = std::exp(log_density(model, x, y) - log_weight) * jac;
      total.add(rule.weights[i] * rule.weights[j] * f);
    }
  }
  return total.value();
}

SymMatrix fisher_metric_reduced(const ModelParams3& p) {
  const double r = p.r.value();
  const double inv_s2 = 1.0 / (p.sigma * p.sigma);
  const double denom = r * r - 1.0;

  SymMatrix g(3);
  g.set(0, 0, -inv_s2 / denom);
  g.set(0, 1, inv_s2 * r / (2.0 * denom));
  g.set(1, 1, -inv_s2 / denom);
  g.set(2, 2, 4.0 * inv_s2);
  return g;
}

SymMatrix fisher_metric_diagonal(const DiagonalGaussianProduct& model) {
  SymMatrix g(2 * model.n());
  for (int j = 0; j < model.n(); ++j) {
    const double inv_s2 = 1.0 / (model.sigmas[j] * model.sigmas[j]);
    g.set(2 * j, 2 * j, inv_s2);
    g.set(2 * j + 1, 2 * j + 1, 2.0 * inv_s2);
  }
  return g;
}

double correlation_coefficient(std::span<const std::pair<double, double>> samples) {
  const BivariateMoments m = moments(samples);
  return m.cov / (std::sqrt(m.var_x) * std::sqrt(m.var_y));
}

LinearMsqFit best_linear_msq(std::span<const std::pair<double, double>> samples) {
  const BivariateMoments m = moments(samples);
  const double sd_x = std::sqrt(m.var_x);
  const double sd_y = std::sqrt(m.var_y);

  // On the standardized variables the normal equations give c1 = mean(eta1)
  // - c2 mean(eta2) = 0 and c2 = <eta1 eta2> / <eta2^2> = correlation; the
  // attained minimum is evaluated from the same moments.
  const double rhat = m.cov / (sd_x * sd_y);
  LinearMsqFit fit;
  fit.c1 = 0.0;
  fit.c2 = rhat;
  fit.residual = 1.0 - 2.0 * fit.c2 * rhat + fit.c2 * fit.c2;
  return fit;
}

std::vector<std::pair<double, double>> sample_bivariate(const BivariateGaussian& model,
                                                        std::size_t count, std::uint64_t seed) {
  if (count < 1) throw DomainViolation("sample count must be >= 1");
  const auto& p = model.params;
  const double r = p.r.value();
  const double c = std::sqrt(1.0 - r * r);

  std::mt19937_64 rng(seed);
  const double inv_max = 1.0 / (static_cast<double>(std::mt19937_64::max()) + 1.0);
  auto uniform01 = [&]() {
    // (0, 1]: keeps log() finite.
    return (static_cast<double>(rng()) + 1.0) * inv_max;
  };

  std::vector<std::pair<double, double>> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double rho = std::sqrt(-2.0 * std::log(u1));
    const double s = rho * std::cos(kTwoPi * u2);
    const double t = rho * std::sin(kTwoPi * u2);
    out.emplace_back(p.mu_x + p.sigma_x * s, p.mu_y + p.sigma_y * (r * s + c * t));
  }
  return out;
}

}  // namespace igc
