// Geodesic flow of the reduced model: closed-form trajectories, an adaptive
// Runge-Kutta integrator for the geodesic equations, and residual checks.

#pragma once

#include <array>
#include <vector>

#include "igc/core.hpp"

namespace igc {

struct GeodesicConfig {
  CorrelationCoefficient r;
  double sigma0;     ///< boundary condition sigma(0)
  double a1;         ///< integration constant: dmu_x/dtau = a1 * sigma^2
  double a2;         ///< integration constant: dmu_y/dtau = a2 * sigma^2
  double tau_max;
  int output_steps;  ///< number of uniformly spaced output nodes, >= 2

  GeodesicConfig(CorrelationCoefficient r_, double sigma0_, double a1_, double a2_,
                 double tau_max_, int output_steps_)
      : r(r_), sigma0(sigma0_), a1(a1_), a2(a2_), tau_max(tau_max_),
        output_steps(output_steps_) {
    if (!(sigma0 > 0.0)) throw DomainViolation("sigma0 must be > 0");
    if (!(tau_max > 0.0)) throw DomainViolation("tau_max must be > 0");
    if (output_steps < 2) throw DomainViolation("output_steps must be >= 2");
  }
};

/// Exponential decay rate constant of the geodesic family,
/// (a1^2 + a2^2 - r a1 a2) / (4 (1 - r^2)). Nonnegative for every real
/// (a1, a2) and r in (-1, 1); zero only when a1 = a2 = 0.
class ARate {
 public:
  double value() const noexcept { return value_; }

 private:
  friend ARate a_rate(double, double, CorrelationCoefficient);
  explicit ARate(double v) : value_(v) {}
  double value_;
};

ARate a_rate(double a1, double a2, CorrelationCoefficient r);

struct GeodesicState {
  double mu_x, mu_y, sigma;
  double dmu_x, dmu_y, dsigma;
};

struct GeodesicPath {
  std::vector<double> taus;
  std::vector<GeodesicState> states;
  /// Max relative drift of dmu/dtau / sigma^2 along the path, over both
  /// mean channels, measured against the initial node.
  double conserved_drift = 0.0;
};

/// Closed-form state at a single proper time.
GeodesicState closed_form_state(const GeodesicConfig& cfg, double tau);

/// Closed-form trajectory sampled on `output_steps` uniform nodes in
/// [0, tau_max]. Throws DegenerateRate if the rate constant vanishes with
/// (a1, a2) != 0; for a1 = a2 = 0 the constant path is returned.
GeodesicPath closed_form_geodesic(const GeodesicConfig& cfg);

/// Numerical solution of the geodesic equations from arbitrary initial
/// data by an embedded Dormand-Prince 5(4) pair with proportional step
/// control and cubic Hermite output. Knows nothing about the closed form.
/// Throws SigmaCollapse if sigma falls below 1e-300 and StepFailure if the
/// controller cannot meet the tolerance.
GeodesicPath integrate_geodesic(const GeodesicConfig& cfg, const GeodesicState& initial,
                                const Tolerances& tol = Tolerances::defaults());

/// Left-hand sides of the three geodesic equations evaluated on the closed
/// form with exact analytic derivatives; all three vanish identically up to
/// rounding.
std::array<double, 3> ode_residual(const GeodesicConfig& cfg, double tau);

}  // namespace igc
