#include "igc/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>

#include "igc/complexity.hpp"
#include "igc/geodesics.hpp"
#include "igc/geometry.hpp"
#include "igc/models.hpp"
#include "igc/parallel.hpp"

namespace igc {

namespace {

constexpr std::uint64_t kSweepSeed = 20250801;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

// Closed-form Ricci tensor of the reduced model, index order
// (mu_x, mu_y, sigma).
SymMatrix reduced_ricci_reference(double r, double sigma) {
  const double inv_s2 = 1.0 / (sigma * sigma);
  const double denom = r * r - 1.0;
  SymMatrix ricci(3);
  ricci.set(0, 0, 0.5 / denom * inv_s2);
  ricci.set(0, 1, -0.25 * r / denom * inv_s2);
  ricci.set(1, 1, 0.5 / denom * inv_s2);
  ricci.set(2, 2, -2.0 * inv_s2);
  return ricci;
}

struct ReducedPoint {
  double r, mu_x, mu_y, sigma;
};

std::vector<ReducedPoint> random_reduced_points(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ur(-0.95, 0.95);
  std::uniform_real_distribution<double> umu(-10.0, 10.0);
  std::uniform_real_distribution<double> usig(0.1, 10.0);
  std::vector<ReducedPoint> pts(count);
  for (auto& p : pts) p = {ur(rng), umu(rng), umu(rng), usig(rng)};
  return pts;
}

CheckResult check_scalar_curvature(const Tolerances& tol) {
  const auto pts = random_reduced_points(100, kSweepSeed);
  std::vector<double> dev_analytic(pts.size()), dev_fd(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) {
    const ReducedPoint& p = pts[i];
    const double coords[3] = {p.mu_x, p.mu_y, p.sigma};
    const CorrelationCoefficient r(p.r);
    dev_analytic[i] = std::abs(
        scalar_curvature(reduced_metric_field(r, DerivativeMode::analytic), coords, tol) + 1.5);
    dev_fd[i] = std::abs(
        scalar_curvature(reduced_metric_field(r, DerivativeMode::finite_difference), coords, tol) +
        1.5);
  });
  const double max_a = *std::max_element(dev_analytic.begin(), dev_analytic.end());
  const double max_f = *std::max_element(dev_fd.begin(), dev_fd.end());
  CheckResult res;
  res.name = "scalar-curvature-constant";
  res.pass = max_a < 1e-9 && max_f < 1e-5;
  res.details = "max |R + 3/2| over 100 points: analytic " + fmt(max_a) +
                " (tol 1e-9), finite-difference " + fmt(max_f) + " (tol 1e-5)";
  return res;
}

CheckResult check_fisher_metric_oracle(const Tolerances& tol) {
  std::mt19937_64 rng(kSweepSeed + 1);
  std::uniform_real_distribution<double> ur(-0.9, 0.9);
  std::uniform_real_distribution<double> umu(-10.0, 10.0);
  std::uniform_real_distribution<double> usig(0.2, 5.0);
  std::vector<ModelParams4> sets;
  sets.reserve(20);
  for (int i = 0; i < 20; ++i) {
    sets.emplace_back(umu(rng), usig(rng), umu(rng), usig(rng), CorrelationCoefficient(ur(rng)));
  }
  std::vector<double> dev(sets.size());
  parallel_for(sets.size(), [&](std::size_t i) {
    const SymMatrix analytic = fisher_metric_analytic_4d(sets[i]);
    const SymMatrix quad = fisher_metric_quadrature(BivariateGaussian{sets[i]}, tol);
    dev[i] = analytic.max_abs_diff(quad);
  });
  const double max_dev = *std::max_element(dev.begin(), dev.end());
  CheckResult res;
  res.name = "fisher-metric-oracle";
  res.pass = max_dev < 1e-6;
  res.details = "max |quadrature - analytic| over 20 parameter sets: " + fmt(max_dev) +
                " (tol 1e-6)";
  return res;
}

CheckResult check_connection_ground_truth(const Tolerances& tol, FaultInjection fault) {
  const auto pts = random_reduced_points(100, kSweepSeed + 2);
  std::vector<double> dev_gamma(pts.size()), dev_ricci(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) {
    const ReducedPoint& p = pts[i];
    const double coords[3] = {p.mu_x, p.mu_y, p.sigma};
    const CorrelationCoefficient r(p.r);
    const MetricField field = reduced_metric_field(r, DerivativeMode::finite_difference);
    const ChristoffelField gamma_fd = christoffel(field, coords, tol);
    const ChristoffelField gamma_ref =
        christoffel_reduced_analytic(ModelParams3(p.mu_x, p.mu_y, p.sigma, r));
    dev_gamma[i] = gamma_fd.max_abs_diff(gamma_ref);

    const SymMatrix ricci_fd = ricci_tensor(field, coords, tol);
    SymMatrix ricci_ref = reduced_ricci_reference(p.r, p.sigma);
    if (fault == FaultInjection::ricci_sign) {
      ricci_ref.set(0, 1, -ricci_ref(0, 1));  // negative control
    }
    dev_ricci[i] = ricci_fd.max_abs_diff(ricci_ref);
  });
  const double max_g = *std::max_element(dev_gamma.begin(), dev_gamma.end());
  const double max_r = *std::max_element(dev_ricci.begin(), dev_ricci.end());
  CheckResult res;
  res.name = "christoffel-ricci-ground-truth";
  res.pass = max_g < 1e-5 && max_r < 1e-5;
  res.details = "max deviation over 100 points: Christoffel " + fmt(max_g) + ", Ricci " +
                fmt(max_r) + " (tol 1e-5)";
  return res;
}

CheckResult check_geodesic_equivalence(const Tolerances& tol) {
  std::mt19937_64 rng(kSweepSeed + 3);
  std::uniform_real_distribution<double> ur(0.0, 0.95);
  std::uniform_real_distribution<double> usig(0.2, 5.0);
  std::uniform_real_distribution<double> ua(0.1, 3.0);
  std::vector<GeodesicConfig> cfgs;
  cfgs.reserve(20);
  for (int i = 0; i < 20; ++i) {
    double r = ur(rng);
    if (r == 0.0) r = 0.01;
    cfgs.emplace_back(CorrelationCoefficient(r), usig(rng), ua(rng), -ua(rng), 10.0, 1000);
  }
  std::vector<double> max_err(cfgs.size()), drift(cfgs.size());
  parallel_for(cfgs.size(), [&](std::size_t i) {
    const GeodesicPath exact = closed_form_geodesic(cfgs[i]);
    const GeodesicPath num = integrate_geodesic(cfgs[i], exact.states.front(), tol);
    double e = 0.0;
    for (std::size_t n = 0; n < exact.states.size(); ++n) {
      e = std::max({e, std::abs(num.states[n].mu_x - exact.states[n].mu_x),
                    std::abs(num.states[n].mu_y - exact.states[n].mu_y),
                    std::abs(num.states[n].sigma - exact.states[n].sigma)});
    }
    max_err[i] = e;
    drift[i] = num.conserved_drift;
  });
  const double worst_err = *std::max_element(max_err.begin(), max_err.end());
  const double worst_drift = *std::max_element(drift.begin(), drift.end());
  CheckResult res;
  res.name = "geodesic-equivalence";
  res.pass = worst_err < 1e-6 && worst_drift < 1e-8;
  res.details = "20 configs over tau in [0,10]: max |ODE - closed form| " + fmt(worst_err) +
                " (tol 1e-6), max conserved-ratio drift " + fmt(worst_drift) + " (tol 1e-8)";
  return res;
}

CheckResult check_ode_residual() {
  std::mt19937_64 rng(kSweepSeed + 4);
  std::uniform_real_distribution<double> ur(0.05, 0.9);
  std::uniform_real_distribution<double> usig(0.2, 2.0);
  std::uniform_real_distribution<double> ua(0.1, 2.0);
  double worst = 0.0;
  for (int c = 0; c < 10; ++c) {
    const GeodesicConfig cfg(CorrelationCoefficient(ur(rng)), usig(rng), ua(rng), -ua(rng), 10.0,
                             2);
    for (int i = 0; i < 1000; ++i) {
      const double tau = 10.0 * i / 999.0;
      const auto res = ode_residual(cfg, tau);
      worst = std::max({worst, std::abs(res[0]), std::abs(res[1]), std::abs(res[2])});
    }
  }
  CheckResult res;
  res.name = "closed-form-satisfies-ode";
  res.pass = worst < 1e-10;
  res.details = "max |residual| over 10 configs x 1000 nodes: " + fmt(worst) + " (tol 1e-10)";
  return res;
}

CheckResult check_igc_chain() {
  std::mt19937_64 rng(kSweepSeed + 5);
  std::uniform_real_distribution<double> ur(0.05, 0.9);
  std::uniform_real_distribution<double> usig(0.3, 1.5);
  std::uniform_real_distribution<double> ua(0.2, 1.5);
  std::uniform_real_distribution<double> utau(0.5, 4.0);
  double worst_avg = 0.0;
  double worst_tail = 0.0;
  for (int c = 0; c < 20; ++c) {
    const IgcConfig cfg(CorrelationCoefficient(ur(rng)), usig(rng), ua(rng), {1.0, 2.0});
    const double tau = utau(rng);
    // Trapezoid average of the instantaneous volume on 1e4 nodes.
    const std::size_t n = 10000;
    double sum = 0.5 * (volume_at(cfg, 0.0) + volume_at(cfg, tau));
    for (std::size_t i = 1; i + 1 <= n - 1; ++i) {
      sum += volume_at(cfg, tau * static_cast<double>(i) / (n - 1));
    }
    const double trapezoid = sum * (tau / (n - 1)) / tau;
    const double closed = avg_volume(cfg, tau);
    worst_avg = std::max(worst_avg, std::abs(trapezoid - closed) / closed);

    // Asymptotic regime: the average must collapse onto the pure 1/tau law.
    const double k = volume_decay_rate(cfg);
    const double tau_far = 45.0 / k;
    const double asymptote = volume_at(cfg, 0.0) / (k * tau_far);
    worst_tail = std::max(worst_tail,
                          std::abs(avg_volume(cfg, tau_far) - asymptote) / asymptote);
  }
  CheckResult res;
  res.name = "igc-chain-consistency";
  res.pass = worst_avg < 1e-6 && worst_tail < 1e-12;
  res.details = "20 configs: max trapezoid-vs-closed-form deviation " + fmt(worst_avg) +
                " (tol 1e-6), max asymptote deviation " + fmt(worst_tail) + " (tol 1e-12)";
  return res;
}

CheckResult check_power_law() {
  std::vector<double> grid;
  const int n = 500;
  for (int i = 0; i < n; ++i) {
    grid.push_back(0.1 * std::pow(3000.0, static_cast<double>(i) / (n - 1)));
  }
  const IgcConfig cfg(CorrelationCoefficient(0.5), 1.0, 1.0, grid);
  const IgcCurve curve = igc_curve(cfg);
  const double k = volume_decay_rate(cfg);
  const double window_lo = curve.taus.back() / 10.0;
  const double slope = curve.fitted_exponent;
  CheckResult res;
  res.name = "power-law-decay";
  res.pass = std::abs(slope + 1.0) < 0.01 && k * window_lo >= 20.0;
  res.details = "last-decade slope " + fmt(slope) + " (target -1 +- 0.01), window starts at " +
                "rate*tau = " + fmt(k * window_lo);
  return res;
}

CheckResult check_compression_ratio() {
  const double f_half = compression_ratio(CorrelationCoefficient(0.5));
  const double dev_half = std::abs(f_half - 0.6);

  bool monotone = true;
  bool bounded = true;
  double prev = 2.0;
  for (int i = 1; i <= 1000; ++i) {
    const double r = static_cast<double>(i) / 1001.0;
    const double f = compression_ratio(CorrelationCoefficient(r));
    if (f > prev) monotone = false;
    if (f < 0.0 || f > 1.0) bounded = false;
    prev = f;
  }
  const double f_small = compression_ratio(CorrelationCoefficient(0.001));
  const double dev_small = std::abs(f_small - 1.0);

  // The asymptotic ratio of averaged volumes must realize the closed form.
  double worst_realized = 0.0;
  for (double r : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const double sigma0 = 0.7, a = 1.3;
    const IgcConfig cfg(CorrelationCoefficient(r), sigma0, a, {1.0, 2.0});
    const double k0 = sigma0 * std::sqrt(a * a * 2.0 / 4.0);
    const double tau = 30.0 / k0;
    const double realized = avg_volume(cfg, tau) / avg_volume_uncorrelated(sigma0, a, tau);
    worst_realized = std::max(
        worst_realized, std::abs(realized - compression_ratio(CorrelationCoefficient(r))) /
                            compression_ratio(CorrelationCoefficient(r)));
  }

  CheckResult res;
  res.name = "compression-ratio";
  res.pass = dev_half < 1e-12 && monotone && bounded && dev_small < 1e-3 &&
             worst_realized < 1e-9;
  res.details = "|F(0.5) - 0.6| = " + fmt(dev_half) + " (tol 1e-12); monotone " +
                (monotone ? "yes" : "NO") + "; within [0,1] " + (bounded ? "yes" : "NO") +
                "; |F(0.001) - 1| = " + fmt(dev_small) + " (tol 1e-3); realized-ratio dev " +
                fmt(worst_realized) + " (tol 1e-9)";
  return res;
}

CheckResult check_correlation_statistics() {
  const BivariateGaussian model{
      ModelParams4(0.0, 1.0, 0.0, 1.0, CorrelationCoefficient(0.7))};
  const auto samples = sample_bivariate(model, 1000000, 42);
  const LinearMsqFit fit = best_linear_msq(samples);
  const double rhat = correlation_coefficient(samples);
  const double dev_c2 = std::abs(fit.c2 - 0.7);
  const double dev_res = std::abs(fit.residual - 0.51);
  const double identity = std::abs(fit.residual - (1.0 - rhat * rhat));
  CheckResult res;
  res.name = "correlation-statistics";
  res.pass = dev_c2 < 0.01 && dev_res < 0.01 && identity < 1e-12;
  res.details = "1e6 samples at r = 0.7 (seed 42): |c2 - 0.7| = " + fmt(dev_c2) +
                ", |residual - 0.51| = " + fmt(dev_res) +
                " (tol 0.01); |residual - (1 - rhat^2)| = " + fmt(identity) + " (tol 1e-12)";
  return res;
}

CheckResult check_density_normalization(const Tolerances& tol) {
  std::mt19937_64 rng(kSweepSeed + 6);
  std::uniform_real_distribution<double> ur(-0.9, 0.9);
  std::uniform_real_distribution<double> umu(-10.0, 10.0);
  std::uniform_real_distribution<double> usig(0.2, 5.0);
  std::vector<ModelParams4> sets;
  sets.reserve(20);
  for (int i = 0; i < 20; ++i) {
    sets.emplace_back(umu(rng), usig(rng), umu(rng), usig(rng), CorrelationCoefficient(ur(rng)));
  }
  std::vector<double> dev(sets.size());
  parallel_for(sets.size(), [&](std::size_t i) {
    dev[i] = std::abs(density_normalization_quadrature(BivariateGaussian{sets[i]}, tol) - 1.0);
  });
  const double worst = *std::max_element(dev.begin(), dev.end());
  CheckResult res;
  res.name = "density-normalization";
  res.pass = worst < 1e-8;
  res.details = "max |integral - 1| over 20 parameter sets: " + fmt(worst) + " (tol 1e-8)";
  return res;
}

CheckResult check_coordinate_invariance(const Tolerances& tol) {
  std::mt19937_64 rng(kSweepSeed + 7);
  std::uniform_real_distribution<double> ur(-0.9, 0.9);
  std::uniform_real_distribution<double> umu(-5.0, 5.0);
  std::uniform_real_distribution<double> us(-1.5, 1.5);  // s = log sigma
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const CorrelationCoefficient r(ur(rng));
    const MetricField base = reduced_metric_field(r, DerivativeMode::analytic);
    const MetricField pulled = pullback_field(base, exp_spread_map());
    const double s = us(rng);
    const double prime[3] = {umu(rng), umu(rng), s};
    const double theta[3] = {prime[0], prime[1], std::exp(s)};
    const double scal_prime = scalar_curvature(pulled, prime, tol);
    const double scal_base = scalar_curvature(base, theta, tol);
    worst = std::max(worst, std::abs(scal_prime - scal_base));
  }
  CheckResult res;
  res.name = "coordinate-invariance";
  res.pass = worst < 1e-5;
  res.details = "max |R(exp-reparametrized) - R(base)| over 10 points: " + fmt(worst) +
                " (tol 1e-5)";
  return res;
}

}  // namespace

std::vector<CheckResult> run_validation(const Tolerances& tol, FaultInjection fault) {
  tol.validate();
  using Clock = std::chrono::steady_clock;
  std::vector<CheckResult> results;
  auto run = [&](auto&& fn) {
    const auto t0 = Clock::now();
    CheckResult res = fn();
    res.elapsed_s = std::chrono::duration<double>(Clock::now() - t0).count();
    results.push_back(std::move(res));
  };

  run([&] { return check_scalar_curvature(tol); });
  run([&] { return check_fisher_metric_oracle(tol); });
  run([&] { return check_connection_ground_truth(tol, fault); });
  run([&] { return check_geodesic_equivalence(tol); });
  run([&] { return check_ode_residual(); });
  run([&] { return check_igc_chain(); });
  run([&] { return check_power_law(); });
  run([&] { return check_compression_ratio(); });
  run([&] { return check_correlation_statistics(); });
  run([&] { return check_density_normalization(tol); });
  run([&] { return check_coordinate_invariance(tol); });
  return results;
}

}  // namespace igc
