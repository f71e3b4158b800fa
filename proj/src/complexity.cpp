#include "igc/complexity.hpp"

#include <cmath>

namespace igc {

namespace {

// Rate constant with the canonical antisymmetric constants a1 = -a2 = a:
// a^2 (2 + r) / (4 (1 - r^2)).
double rate_constant(double a, double r) {
  return a * a * (2.0 + r) / (4.0 * (1.0 - r * r));
}

// (1 - exp(-x)) / x with a series branch for small x.
double expm1_ratio(double x) {
  if (x < 1e-6) {
    return 1.0 - x / 2.0 + x * x / 6.0;
  }
  return -std::expm1(-x) / x;
}

double volume_closed_form(double sigma0, double a, double r, double tau) {
  const double A = rate_constant(a, r);
  return a * a / (2.0 * A) * fisher_density_prefactor(r) *
         std::exp(-sigma0 * std::sqrt(A) * tau);
}

}  // namespace

double fisher_density_prefactor(double r) {
  return std::sqrt(4.0 * (4.0 - r * r) / ((2.0 - 2.0 * r * r) * (2.0 - 2.0 * r * r)));
}

double fisher_density_reduced(const ModelParams3& params) {
  return fisher_density_prefactor(params.r.value()) / (params.sigma * params.sigma * params.sigma);
}

double volume_decay_rate(const IgcConfig& cfg) {
  return cfg.sigma0 * std::sqrt(rate_constant(cfg.a, cfg.r.value()));
}

double volume_at(const IgcConfig& cfg, double tau) {
  if (!(tau >= 0.0)) throw DomainViolation("tau must be >= 0");
  return volume_closed_form(cfg.sigma0, cfg.a, cfg.r.value(), tau);
}

double avg_volume(const IgcConfig& cfg, double tau) {
  if (!(tau >= 0.0)) throw DomainViolation("tau must be >= 0");
  const double k = volume_decay_rate(cfg);
  // (1/tau) * integral of vol = vol(0) * (1 - exp(-k tau)) / (k tau);
  // the tau -> 0 limit is vol(0).
  return volume_at(cfg, 0.0) * expm1_ratio(k * tau);
}

double ige(const IgcConfig& cfg, double tau) { return std::log(avg_volume(cfg, tau)); }

double volume_at_uncorrelated(double sigma0, double a, double tau) {
  if (!(sigma0 > 0.0) || !(a > 0.0)) throw DomainViolation("sigma0 and a must be > 0");
  if (!(tau >= 0.0)) throw DomainViolation("tau must be >= 0");
  return volume_closed_form(sigma0, a, 0.0, tau);
}

double avg_volume_uncorrelated(double sigma0, double a, double tau) {
  if (!(sigma0 > 0.0) || !(a > 0.0)) throw DomainViolation("sigma0 and a must be > 0");
  if (!(tau >= 0.0)) throw DomainViolation("tau must be >= 0");
  const double A = rate_constant(a, 0.0);
  const double k = sigma0 * std::sqrt(A);
  return volume_closed_form(sigma0, a, 0.0, 0.0) * expm1_ratio(k * tau);
}

double fit_power_law(const IgcCurve& curve, double tau_lo, double tau_hi) {
  double sum_x = 0.0, sum_y = 0.0, sum_xx = 0.0, sum_xy = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < curve.taus.size(); ++i) {
    const double tau = curve.taus[i];
    if (tau < tau_lo || tau > tau_hi) continue;
    const double x = std::log(tau);
    const double y = std::log(curve.avg_vol[i]);
    sum_x += x;
    sum_y += y;
    sum_xx += x * x;
    sum_xy += x * y;
    ++n;
  }
  if (n < 10) {
    throw InsufficientWindow("power-law window [" + std::to_string(tau_lo) + ", " +
                             std::to_string(tau_hi) + "] contains only " + std::to_string(n) +
                             " nodes (need 10)");
  }
  const double dn = static_cast<double>(n);
  const double ss_xx = sum_xx - sum_x * sum_x / dn;
  const double ss_xy = sum_xy - sum_x * sum_y / dn;
  return ss_xy / ss_xx;
}

double compression_ratio(CorrelationCoefficient r) {
  const double rv = r.value();
  if (!(rv > 0.0)) {
    throw DomainViolation("compression ratio requires 0 < r < 1, got r = " + std::to_string(rv));
  }
  // Ratio of the asymptotic averaged volumes at identical (a, sigma0); the
  // a-dependence cancels, leaving prefactor(r)/rate^{3/2}(r) normalized by
  // its r -> 0 limit.
  const double ratio_arg = (2.0 + rv) / (4.0 * (1.0 - rv * rv));
  return std::pow(2.0, -2.5) * fisher_density_prefactor(rv) * std::pow(ratio_arg, -1.5);
}

IgcCurve igc_curve(const IgcConfig& cfg) {
  IgcCurve curve;
  curve.taus = cfg.tau_grid;
  curve.vol.reserve(curve.taus.size());
  curve.avg_vol.reserve(curve.taus.size());
  curve.ige.reserve(curve.taus.size());
  for (double tau : curve.taus) {
    curve.vol.push_back(volume_at(cfg, tau));
    curve.avg_vol.push_back(avg_volume(cfg, tau));
    curve.ige.push_back(std::log(curve.avg_vol.back()));
  }
  const double tau_hi = curve.taus.back();
  curve.fitted_exponent = fit_power_law(curve, tau_hi / 10.0, tau_hi);
  return curve;
}

}  // namespace igc
