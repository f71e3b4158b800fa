#include "igc/geodesics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace igc {

namespace {

// Stable sigmoid-style helpers for large arguments.

// 1 / (1 + exp(2u)) without overflow.
double inv_one_plus_exp2(double u) {
  if (u >= 0.0) {
    const double e = std::exp(-2.0 * u);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(2.0 * u));
}

// sech(u) without overflow.
double sech(double u) {
  const double e = std::exp(-std::abs(u));
  return 2.0 * e / (1.0 + e * e);
}

struct ClosedForm {
  double k;          // sigma0 * sqrt(A)
  double amp_x;      // -2 sigma0 a1 / sqrt(A)
  double amp_y;
  const GeodesicConfig* cfg;

  GeodesicState at(double tau) const {
    const double u = k * tau;
    const double w = inv_one_plus_exp2(u);
    const double s = cfg->sigma0 * sech(u);
    GeodesicState st;
    st.mu_x = amp_x * w;
    st.mu_y = amp_y * w;
    st.sigma = s;
    st.dmu_x = cfg->a1 * s * s;
    st.dmu_y = cfg->a2 * s * s;
    st.dsigma = -k * s * std::tanh(u);
    return st;
  }
};

ClosedForm make_closed_form(const GeodesicConfig& cfg) {
  const double A = a_rate(cfg.a1, cfg.a2, cfg.r).value();
  if (!(A > 0.0)) {
    throw DegenerateRate("rate constant vanishes for (a1, a2) = (" + std::to_string(cfg.a1) +
                         ", " + std::to_string(cfg.a2) + ")");
  }
  const double root = std::sqrt(A);
  return ClosedForm{cfg.sigma0 * root, -2.0 * cfg.sigma0 * cfg.a1 / root,
                    -2.0 * cfg.sigma0 * cfg.a2 / root, &cfg};
}

std::vector<double> uniform_grid(double tau_max, int steps) {
  std::vector<double> taus(steps);
  for (int i = 0; i < steps; ++i) {
    taus[i] = tau_max * static_cast<double>(i) / (steps - 1);
  }
  return taus;
}

double conserved_drift_of(const std::vector<GeodesicState>& states) {
  if (states.empty()) return 0.0;
  const double s0 = states.front().sigma;
  const double ax = (states.front().dmu_x / s0) / s0;
  const double ay = (states.front().dmu_y / s0) / s0;
  double drift = 0.0;
  for (const GeodesicState& st : states) {
    // Two-stage division keeps the ratio representable down to sigma ~ 1e-150.
    const double qx = (st.dmu_x / st.sigma) / st.sigma;
    const double qy = (st.dmu_y / st.sigma) / st.sigma;
    const double dx = (ax != 0.0) ? std::abs(qx - ax) / std::abs(ax) : std::abs(qx);
    const double dy = (ay != 0.0) ? std::abs(qy - ay) / std::abs(ay) : std::abs(qy);
    drift = std::max({drift, dx, dy});
  }
  return drift;
}

GeodesicPath constant_path(const GeodesicConfig& cfg) {
  GeodesicPath path;
  path.taus = uniform_grid(cfg.tau_max, cfg.output_steps);
  path.states.assign(path.taus.size(), GeodesicState{0.0, 0.0, cfg.sigma0, 0.0, 0.0, 0.0});
  path.conserved_drift = 0.0;
  return path;
}

}  // namespace

ARate a_rate(double a1, double a2, CorrelationCoefficient r) {
  const double rv = r.value();
  return ARate((a1 * a1 + a2 * a2 - rv * a1 * a2) / (4.0 * (1.0 - rv * rv)));
}

GeodesicState closed_form_state(const GeodesicConfig& cfg, double tau) {
  if (cfg.a1 == 0.0 && cfg.a2 == 0.0) {
    return GeodesicState{0.0, 0.0, cfg.sigma0, 0.0, 0.0, 0.0};
  }
  return make_closed_form(cfg).at(tau);
}

GeodesicPath closed_form_geodesic(const GeodesicConfig& cfg) {
  if (cfg.a1 == 0.0 && cfg.a2 == 0.0) return constant_path(cfg);
  const ClosedForm form = make_closed_form(cfg);

  GeodesicPath path;
  path.taus = uniform_grid(cfg.tau_max, cfg.output_steps);
  path.states.reserve(path.taus.size());
  for (double tau : path.taus) path.states.push_back(form.at(tau));
  path.conserved_drift = conserved_drift_of(path.states);
  return path;
}

namespace {

using State6 = std::array<double, 6>;  // (mu_x, mu_y, sigma, dmu_x, dmu_y, dsigma)

State6 to_array(const GeodesicState& s) {
  return {s.mu_x, s.mu_y, s.sigma, s.dmu_x, s.dmu_y, s.dsigma};
}

GeodesicState to_state(const State6& y) {
  return {y[0], y[1], y[2], y[3], y[4], y[5]};
}

// First-order reduction of the geodesic equations.
struct GeodesicRhs {
  double c_sq;     // 1 / (4 (r^2 - 1))
  double c_cross;  // -r / (4 (r^2 - 1))

  explicit GeodesicRhs(double r)
      : c_sq(1.0 / (4.0 * (r * r - 1.0))), c_cross(-r / (4.0 * (r * r - 1.0))) {}

  State6 operator()(const State6& y) const {
    const double sigma = y[2];
    const double vx = y[3];
    const double vy = y[4];
    const double vs = y[5];
    const double two_vs_over_sigma = 2.0 * vs / sigma;
    return {vx,
            vy,
            vs,
            two_vs_over_sigma * vx,
            two_vs_over_sigma * vy,
            (vs * vs + c_sq * (vx * vx + vy * vy) + c_cross * vx * vy) / sigma};
  }
};

// Dormand-Prince 5(4) tableau.
constexpr double kA21 = 1.0 / 5.0;
constexpr double kA31 = 3.0 / 40.0, kA32 = 9.0 / 40.0;
constexpr double kA41 = 44.0 / 45.0, kA42 = -56.0 / 15.0, kA43 = 32.0 / 9.0;
constexpr double kA51 = 19372.0 / 6561.0, kA52 = -25360.0 / 2187.0, kA53 = 64448.0 / 6561.0,
                 kA54 = -212.0 / 729.0;
constexpr double kA61 = 9017.0 / 3168.0, kA62 = -355.0 / 33.0, kA63 = 46732.0 / 5247.0,
                 kA64 = 49.0 / 176.0, kA65 = -5103.0 / 18656.0;
constexpr double kB1 = 35.0 / 384.0, kB3 = 500.0 / 1113.0, kB4 = 125.0 / 192.0,
                 kB5 = -2187.0 / 6784.0, kB6 = 11.0 / 84.0;
// 5th-order minus embedded 4th-order weights.
constexpr double kE1 = 71.0 / 57600.0, kE3 = -71.0 / 16695.0, kE4 = 71.0 / 1920.0,
                 kE5 = -17253.0 / 339200.0, kE6 = 22.0 / 525.0, kE7 = -1.0 / 40.0;

State6 axpy(const State6& y, double h, std::initializer_list<std::pair<double, const State6*>> terms) {
  State6 out = y;
  for (const auto& [c, k] : terms) {
    for (int i = 0; i < 6; ++i) out[i] += h * c * (*k)[i];
  }
  return out;
}

bool finite(const State6& y) {
  for (double v : y)
    if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace

GeodesicPath integrate_geodesic(const GeodesicConfig& cfg, const GeodesicState& initial,
                                const Tolerances& tol) {
  if (!(initial.sigma > 0.0)) throw DomainViolation("initial sigma must be > 0");
  const GeodesicRhs rhs(cfg.r.value());
  // The controller runs a factor below the requested local error so that
  // accumulated drift in the conserved ratios stays well under it.
  const double rtol = 0.05 * tol.ode_tol;
  // A tiny absolute floor keeps the error norm defined through exact zeros
  // while leaving the decaying tail under relative control, which the
  // conserved-ratio diagnostics require.
  const double atol = 1e-280;
  const double span = cfg.tau_max;
  const double h_max = span / 64.0;
  const double h_min = 32.0 * std::numeric_limits<double>::epsilon() * span;

  GeodesicPath path;
  path.taus = uniform_grid(cfg.tau_max, cfg.output_steps);
  path.states.resize(path.taus.size());
  path.states[0] = initial;
  std::size_t next_node = 1;

  State6 y = to_array(initial);
  State6 f = rhs(y);
  if (!finite(f)) throw DomainViolation("geodesic right-hand side is not finite at tau = 0");
  double t = 0.0;
  double h = std::min(h_max, span / 1000.0);

  int consecutive_rejects = 0;
  while (t < span) {
    h = std::min(h, span - t);

    const State6 k1 = f;
    const State6 k2 = rhs(axpy(y, h, {{kA21, &k1}}));
    const State6 k3 = rhs(axpy(y, h, {{kA31, &k1}, {kA32, &k2}}));
    const State6 k4 = rhs(axpy(y, h, {{kA41, &k1}, {kA42, &k2}, {kA43, &k3}}));
    const State6 k5 = rhs(axpy(y, h, {{kA51, &k1}, {kA52, &k2}, {kA53, &k3}, {kA54, &k4}}));
    const State6 k6 =
        rhs(axpy(y, h, {{kA61, &k1}, {kA62, &k2}, {kA63, &k3}, {kA64, &k4}, {kA65, &k5}}));
    const State6 y_new =
        axpy(y, h, {{kB1, &k1}, {kB3, &k3}, {kB4, &k4}, {kB5, &k5}, {kB6, &k6}});
    const State6 k7 = rhs(y_new);

    double err_sq = 0.0;
    bool usable = finite(y_new) && finite(k7);
    if (usable) {
      for (int i = 0; i < 6; ++i) {
        const double e = h * (kE1 * k1[i] + kE3 * k3[i] + kE4 * k4[i] + kE5 * k5[i] +
                              kE6 * k6[i] + kE7 * k7[i]);
        const double sc = atol + rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
        err_sq += (e / sc) * (e / sc);
      }
    }
    const double err = usable ? std::sqrt(err_sq / 6.0) : std::numeric_limits<double>::infinity();

    if (err <= 1.0) {
      consecutive_rejects = 0;
      // Dense output over (t, t + h] by cubic Hermite interpolation.
      const double t_new = t + h;
      while (next_node < path.taus.size() && path.taus[next_node] <= t_new + 1e-14 * span) {
        const double theta = std::clamp((path.taus[next_node] - t) / h, 0.0, 1.0);
        const double th2 = theta * theta;
        const double h00 = (1.0 + 2.0 * theta) * (1.0 - theta) * (1.0 - theta);
        const double h10 = theta * (1.0 - theta) * (1.0 - theta);
        const double h01 = th2 * (3.0 - 2.0 * theta);
        const double h11 = th2 * (theta - 1.0);
        State6 node;
        for (int i = 0; i < 6; ++i) {
          node[i] = h00 * y[i] + h10 * h * k1[i] + h01 * y_new[i] + h11 * h * k7[i];
        }
        path.states[next_node] = to_state(node);
        ++next_node;
      }
      y = y_new;
      f = k7;  // first-same-as-last
      t = t_new;
      if (!(y[2] > 1e-300)) {
        throw SigmaCollapse("sigma fell below 1e-300 at tau = " + std::to_string(t));
      }
    } else {
      ++consecutive_rejects;
      if (consecutive_rejects > 60) {
        throw StepFailure("step controller rejected 60 consecutive steps at tau = " +
                          std::to_string(t));
      }
    }

    const double factor =
        usable ? std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0) : 0.2;
    h = std::min(h * factor, h_max);
    if (h < h_min) {
      throw StepFailure("step size underflow at tau = " + std::to_string(t));
    }
  }

  // The loop exits only after interpolating through tau_max; pin the final
  // node to the integrated state to avoid 1e-14-scale grid slop.
  path.states.back() = to_state(y);
  path.conserved_drift = conserved_drift_of(path.states);
  return path;
}

std::array<double, 3> ode_residual(const GeodesicConfig& cfg, double tau) {
  if (cfg.a1 == 0.0 && cfg.a2 == 0.0) return {0.0, 0.0, 0.0};
  const ClosedForm form = make_closed_form(cfg);
  const GeodesicState st = form.at(tau);

  const double u = form.k * tau;
  const double tanh_u = std::tanh(u);
  const double sech_u = sech(u);
  const double k2 = form.k * form.k;
  const double ddsigma = k2 * st.sigma * (tanh_u * tanh_u - sech_u * sech_u);
  const double ddmu_x = 2.0 * cfg.a1 * st.sigma * st.dsigma;
  const double ddmu_y = 2.0 * cfg.a2 * st.sigma * st.dsigma;

  const double r = cfg.r.value();
  const double q4 = 1.0 / (4.0 * (r * r - 1.0));

  const double res1 = ddmu_x - (2.0 / st.sigma) * st.dmu_x * st.dsigma;
  const double res2 = ddmu_y - (2.0 / st.sigma) * st.dmu_y * st.dsigma;
  const double res3 = ddsigma - st.dsigma * st.dsigma / st.sigma -
                      q4 * (st.dmu_x * st.dmu_x + st.dmu_y * st.dmu_y) / st.sigma +
                      r * q4 * st.dmu_x * st.dmu_y / st.sigma;
  return {res1, res2, res3};
}

}  // namespace igc
