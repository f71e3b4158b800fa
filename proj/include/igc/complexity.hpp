// Statistical volume explored by the geodesic flow, its time average, the
// geometric entropy, asymptotic power-law behavior and the correlation
// compression ratio.

#pragma once

#include <utility>
#include <vector>

#include "igc/core.hpp"

namespace igc {

/// Configuration for the positively correlated complexity runs. Fixes the
/// canonical antisymmetric constants a1 = -a2 = a (so a1*a2 < 0, which the
/// volume's positivity requires).
struct IgcConfig {
  CorrelationCoefficient r;  ///< additionally restricted to (0, 1)
  double sigma0;
  double a;
  std::vector<double> tau_grid;  ///< strictly increasing, positive

  IgcConfig(CorrelationCoefficient r_, double sigma0_, double a_, std::vector<double> grid)
      : r(r_), sigma0(sigma0_), a(a_), tau_grid(std::move(grid)) {
    if (!(r.value() > 0.0)) {
      throw DomainViolation("complexity runs require 0 < r < 1, got r = " +
                            std::to_string(r.value()));
    }
    if (!(sigma0 > 0.0)) throw DomainViolation("sigma0 must be > 0");
    if (!(a > 0.0)) throw DomainViolation("a must be > 0");
    if (tau_grid.size() < 2) throw DomainViolation("tau grid needs at least 2 nodes");
    double prev = 0.0;
    for (double t : tau_grid) {
      if (!(t > prev)) throw DomainViolation("tau grid must be strictly increasing and positive");
      prev = t;
    }
  }
};

struct IgcCurve {
  std::vector<double> taus;
  std::vector<double> vol;      ///< instantaneous swept volume
  std::vector<double> avg_vol;  ///< running time average (the complexity measure)
  std::vector<double> ige;      ///< log of avg_vol (the entropy indicator)
  double fitted_exponent;       ///< log-log slope over the last decade of the grid
};

/// Square root of the reduced metric determinant,
/// sqrt(4 (4 - r^2) / (2 - 2 r^2)^2) / sigma^3.
double fisher_density_reduced(const ModelParams3& params);

/// The sigma-independent prefactor of the Fisher density. Valid for any
/// r in (-1, 1); r = 0 gives the uncorrelated baseline value 2.
double fisher_density_prefactor(double r);

/// Decay rate sigma0 * sqrt(rate constant) of the volume for a given
/// configuration.
double volume_decay_rate(const IgcConfig& cfg);

/// Closed-form swept volume at proper time tau >= 0:
/// (a^2 / (2 A)) * prefactor * exp(-sigma0 sqrt(A) tau). Strictly positive
/// and strictly decreasing.
double volume_at(const IgcConfig& cfg, double tau);

/// Running time average (1/tau) integral of volume_at over [0, tau] in
/// closed form; the removable singularity at tau -> 0 is evaluated by
/// series.
double avg_volume(const IgcConfig& cfg, double tau);

/// Natural log of avg_volume.
double ige(const IgcConfig& cfg, double tau);

/// Uncorrelated baselines: the r -> 0 limits of the closed forms.
double volume_at_uncorrelated(double sigma0, double a, double tau);
double avg_volume_uncorrelated(double sigma0, double a, double tau);

/// Least-squares slope of log(avg_vol) against log(tau) over the nodes with
/// tau in [tau_lo, tau_hi]. Requires at least 10 nodes inside the window.
double fit_power_law(const IgcCurve& curve, double tau_lo, double tau_hi);

/// Asymptotic complexity ratio between the correlated model and the
/// uncorrelated baseline at identical (a, sigma0). Monotonically
/// nonincreasing on (0, 1) with values in [0, 1].
double compression_ratio(CorrelationCoefficient r);

/// Evaluates volume, average volume and entropy over the configured grid
/// and fits the power-law exponent over the last decade.
IgcCurve igc_curve(const IgcConfig& cfg);

}  // namespace igc
