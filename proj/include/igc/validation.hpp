// End-to-end oracle suite: every reproduction target of the toolkit as an
// executable check with pinned tolerances.

#pragma once

#include <string>
#include <vector>

#include "igc/core.hpp"

namespace igc {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string details;
  double elapsed_s = 0.0;
};

/// Test-only perturbations used as negative controls; `none` in normal use.
enum class FaultInjection { none, ricci_sign };

/// Runs the full oracle suite: analytic and finite-difference curvature
/// against the constant -3/2, quadrature against the closed-form Fisher
/// matrices, connection/Ricci ground truths, geodesic integration against
/// the closed form with conserved-ratio drift, the volume-average chain,
/// power-law decay, compression-ratio properties, the correlation
/// statistics and density normalization, and coordinate invariance of the
/// curvature. Deterministic: all random sweeps are seeded.
std::vector<CheckResult> run_validation(const Tolerances& tol = Tolerances::defaults(),
                                        FaultInjection fault = FaultInjection::none);

}  // namespace igc
