#include "igc/geometry.hpp"

#include <cmath>

#include "igc/models.hpp"

namespace igc {

namespace {

bool in_domain(const MetricField& field, std::span<const double> p) {
  return !field.in_domain || field.in_domain(p);
}

void require_in_domain(const MetricField& field, std::span<const double> p) {
  if (!in_domain(field, p)) {
    throw DomainViolation("evaluation point is outside the metric's domain");
  }
}

// Picks a difference step along axis k such that the whole stencil
// (extent * step on either side) stays inside the domain. Shrinks once by
// 10x, then gives up; silent clamping would corrupt the derivative.
double admissible_step(const MetricField& field, std::span<const double> p, int k, double step,
                       double extent) {
  std::vector<double> probe(p.begin(), p.end());
  for (int attempt = 0; attempt < 2; ++attempt) {
    probe[k] = p[k] + extent * step;
    const bool hi = in_domain(field, probe);
    probe[k] = p[k] - extent * step;
    const bool lo = in_domain(field, probe);
    probe[k] = p[k];
    if (hi && lo) return step;
    step /= 10.0;
  }
  throw DomainViolation("finite-difference stencil leaves the metric domain along axis " +
                        std::to_string(k));
}

double axis_scale(const MetricField& field, std::span<const double> p, int k) {
  if (field.fd_scale) {
    const double s = field.fd_scale(p, k);
    if (s > 0.0) return s;
  }
  return std::max(1.0, std::abs(p[k]));
}

// d_k g by second-order central difference of eval, step per the shared
// fd_step_scale knob. This is the christoffel-facing derivative.
SymMatrix metric_derivative_fd(const MetricField& field, std::span<const double> p, int k,
                               double step_scale) {
  const double h =
      admissible_step(field, p, k, step_scale * std::max(1.0, std::abs(p[k])), 1.0);
  std::vector<double> q(p.begin(), p.end());
  q[k] = p[k] + h;
  SymMatrix hi = field.eval(q);
  q[k] = p[k] - h;
  const SymMatrix lo = field.eval(q);
  const double inv2h = 1.0 / (2.0 * h);
  SymMatrix d(field.dim);
  for (int i = 0; i < field.dim; ++i)
    for (int j = i; j < field.dim; ++j) d.set(i, j, (hi(i, j) - lo(i, j)) * inv2h);
  return d;
}

SymMatrix metric_derivative(const MetricField& field, std::span<const double> p, int k,
                            const Tolerances& tol) {
  if (field.mode == DerivativeMode::analytic) return field.first_derivative(p, k);
  return metric_derivative_fd(field, p, k, tol.fd_step_scale);
}

// Fourth-order central difference of a matrix-valued function along axis l.
template <typename Fn>
SymMatrix diff4(int dim, std::span<const double> p, int l, double h, Fn&& fn) {
  std::vector<double> q(p.begin(), p.end());
  q[l] = p[l] + 2.0 * h;
  const SymMatrix f_p2 = fn(q);
  q[l] = p[l] + h;
  const SymMatrix f_p1 = fn(q);
  q[l] = p[l] - h;
  const SymMatrix f_m1 = fn(q);
  q[l] = p[l] - 2.0 * h;
  const SymMatrix f_m2 = fn(q);
  const double inv12h = 1.0 / (12.0 * h);
  SymMatrix d(dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = i; j < dim; ++j) {
      d.set(i, j, (-f_p2(i, j) + 8.0 * f_p1(i, j) - 8.0 * f_m1(i, j) + f_m2(i, j)) * inv12h);
    }
  }
  return d;
}

// Step constants for the curvature-facing differences, relative to the axis
// scale. Two nested fourth-order stages: the inner step balances h^4
// truncation against eps/h rounding (h ~ eps^(1/5)); the outer step
// balances h^4 truncation against the ~1e-12 relative noise the inner
// stage leaves (h ~ (noise)^(1/5)). Second-order stages cannot reach the
// accuracy the curvature ground-truth comparisons need once the metric
// entries grow like 1/sigma^2.
constexpr double kInnerStep = 7.4e-4;
constexpr double kOuterStep = 1.5e-3;

// High-accuracy d_k g used inside the curvature pipeline.
SymMatrix metric_derivative_curvature(const MetricField& field, std::span<const double> p,
                                      int k) {
  if (field.mode == DerivativeMode::analytic) return field.first_derivative(p, k);
  const double h = admissible_step(field, p, k, kInnerStep * axis_scale(field, p, k), 2.0);
  return diff4(field.dim, p, k, h, [&](std::span<const double> q) { return field.eval(q); });
}

// d_l d_k g: exact callback in analytic mode, otherwise a fourth-order
// outer difference of the inner first-derivative field.
SymMatrix metric_second_derivative(const MetricField& field, std::span<const double> p, int k,
                                   int l) {
  if (field.mode == DerivativeMode::analytic) return field.second_derivative(p, k, l);
  const double h_inner_extent = 2.0 * kInnerStep;  // inner stencil reach, relative
  const double h = admissible_step(field, p, l, kOuterStep * axis_scale(field, p, l),
                                   2.0 + h_inner_extent / kOuterStep);
  return diff4(field.dim, p, l, h, [&](std::span<const double> q) {
    return metric_derivative_curvature(field, q, k);
  });
}

struct LocalGeometry {
  int dim;
  SymMatrix g;
  SymMatrix ginv;
  std::vector<SymMatrix> dg;                 // dg[k] = d_k g
  std::vector<std::vector<SymMatrix>> ddg;   // ddg[k][l] = d_k d_l g (symmetrized)
  bool with_second = false;
};

LocalGeometry local_geometry(const MetricField& field, std::span<const double> p,
                             const Tolerances& tol, bool with_second) {
  require_in_domain(field, p);
  LocalGeometry loc{field.dim, field.eval(p), SymMatrix(field.dim), {}, {}, with_second};
  loc.ginv = invert_spd(loc.g);
  loc.dg.reserve(field.dim);
  for (int k = 0; k < field.dim; ++k) {
    // The curvature pipeline carries its first derivatives at the same
    // accuracy as its second derivatives; the plain connection keeps the
    // shared fd_step_scale knob.
    loc.dg.push_back(with_second ? metric_derivative_curvature(field, p, k)
                                 : metric_derivative(field, p, k, tol));
  }
  if (with_second) {
    loc.ddg.assign(field.dim, {});
    for (int k = 0; k < field.dim; ++k) {
      loc.ddg[k].reserve(field.dim);
      for (int l = 0; l < field.dim; ++l) {
        loc.ddg[k].push_back(metric_second_derivative(field, p, k, l));
      }
    }
    // Mixed partials commute; average the two evaluation orders.
    for (int k = 0; k < field.dim; ++k) {
      for (int l = k + 1; l < field.dim; ++l) {
        SymMatrix sym(field.dim);
        for (int i = 0; i < field.dim; ++i)
          for (int j = i; j < field.dim; ++j)
            sym.set(i, j, 0.5 * (loc.ddg[k][l](i, j) + loc.ddg[l][k](i, j)));
        loc.ddg[k][l] = sym;
        loc.ddg[l][k] = sym;
      }
    }
  }
  return loc;
}

ChristoffelField christoffel_from(const LocalGeometry& loc) {
  const int n = loc.dim;
  ChristoffelField gamma(n);
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        double sum = 0.0;
        for (int m = 0; m < n; ++m) {
          sum += loc.ginv(k, m) * (loc.dg[i](m, j) + loc.dg[j](i, m) - loc.dg[m](i, j));
        }
        gamma.set(k, i, j, 0.5 * sum);
      }
    }
  }
  return gamma;
}

// d_l Γ^k_ij assembled from the metric, its inverse and its first and
// second derivatives:
//   d_l Γ^k_ij = (1/2) d_l g^km (d_i g_mj + d_j g_im - d_m g_ij)
//              + (1/2) g^km (d_l d_i g_mj + d_l d_j g_im - d_l d_m g_ij)
// with d_l g^km = -g^ka (d_l g_ab) g^bm.
double christoffel_derivative(const LocalGeometry& loc, int l, int k, int i, int j) {
  const int n = loc.dim;
  double sum = 0.0;
  for (int m = 0; m < n; ++m) {
    double dginv_km = 0.0;
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        dginv_km -= loc.ginv(k, a) * loc.dg[l](a, b) * loc.ginv(b, m);
      }
    }
    sum += dginv_km * (loc.dg[i](m, j) + loc.dg[j](i, m) - loc.dg[m](i, j));
    sum += loc.ginv(k, m) *
           (loc.ddg[l][i](m, j) + loc.ddg[l][j](i, m) - loc.ddg[l][m](i, j));
  }
  return 0.5 * sum;
}

SymMatrix ricci_from(const LocalGeometry& loc) {
  const int n = loc.dim;
  const ChristoffelField gamma = christoffel_from(loc);

  // Γ^n_kn traces, reused below.
  std::vector<double> trace(n, 0.0);
  for (int k = 0; k < n; ++k) {
    for (int m = 0; m < n; ++m) trace[k] += gamma(m, k, m);
  }

  SymMatrix ricci(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      double value = 0.0;
      for (int k = 0; k < n; ++k) {
        value += christoffel_derivative(loc, k, k, i, j);  // d_k Γ^k_ij
        value -= christoffel_derivative(loc, j, k, i, k);  // d_j Γ^k_ik
        value += gamma(k, i, j) * trace[k];                // Γ^k_ij Γ^n_kn
        for (int m = 0; m < n; ++m) {
          value -= gamma(m, i, k) * gamma(k, j, m);        // Γ^m_ik Γ^k_jm
        }
      }
      ricci.set(i, j, value);
    }
  }
  return ricci;
}

}  // namespace

ChristoffelField christoffel(const MetricField& field, std::span<const double> point,
                             const Tolerances& tol) {
  return christoffel_from(local_geometry(field, point, tol, false));
}

ChristoffelField christoffel_reduced_analytic(const ModelParams3& params) {
  const double r = params.r.value();
  const double s = params.sigma;
  const double denom = r * r - 1.0;

  ChristoffelField gamma(3);
  gamma.set(2, 0, 0, -0.25 / denom / s);
  gamma.set(2, 0, 1, r / (8.0 * denom) / s);
  gamma.set(0, 0, 2, -1.0 / s);
  gamma.set(2, 1, 1, -0.25 / denom / s);
  gamma.set(1, 1, 2, -1.0 / s);
  gamma.set(2, 2, 2, -1.0 / s);
  return gamma;
}

SymMatrix ricci_tensor(const MetricField& field, std::span<const double> point,
                       const Tolerances& tol) {
  return ricci_from(local_geometry(field, point, tol, true));
}

double scalar_curvature(const MetricField& field, std::span<const double> point,
                        const Tolerances& tol) {
  const LocalGeometry loc = local_geometry(field, point, tol, true);
  const SymMatrix ricci = ricci_from(loc);
  double scalar = 0.0;
  for (int i = 0; i < loc.dim; ++i)
    for (int j = 0; j < loc.dim; ++j) scalar += loc.ginv(i, j) * ricci(i, j);
  return scalar;
}

CurvatureReport curvature_report(const MetricField& field, std::span<const double> point,
                                 const Tolerances& tol) {
  const LocalGeometry loc = local_geometry(field, point, tol, true);
  const SymMatrix ricci = ricci_from(loc);
  double scalar = 0.0;
  for (int i = 0; i < loc.dim; ++i)
    for (int j = 0; j < loc.dim; ++j) scalar += loc.ginv(i, j) * ricci(i, j);

  if (field.mode == DerivativeMode::analytic) {
    // Recontract from scratch as a self-check.
    const SymMatrix ginv = invert_spd(field.eval(point));
    double recontracted = 0.0;
    for (int i = 0; i < loc.dim; ++i)
      for (int j = 0; j < loc.dim; ++j) recontracted += ginv(i, j) * ricci(i, j);
    if (std::abs(recontracted - scalar) > 1e-10) {
      throw std::logic_error("scalar/Ricci contraction mismatch");
    }
  }
  return CurvatureReport{std::vector<double>(point.begin(), point.end()), ricci, scalar};
}

SymMatrix pullback_metric(const MetricField& base, const CoordinateMap& map,
                          std::span<const double> point_prime) {
  const std::vector<double> theta = map.to_base(point_prime);
  const std::vector<double> jac = map.jacobian_to_base(point_prime);
  const int n = base.dim;

  // Jacobian must be nonsingular for the change of coordinates to be valid.
  {
    SymMatrix jtj(n);
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        double s = 0.0;
        for (int a = 0; a < n; ++a) s += jac[a * n + i] * jac[a * n + j];
        jtj.set(i, j, s);
      }
    }
    const double d = determinant(jtj);
    if (!(std::abs(d) > 1e-24)) {
      throw SingularJacobian("reparametrization Jacobian is singular (det J^T J = " +
                             std::to_string(d) + ")");
    }
  }

  require_in_domain(base, theta);
  const SymMatrix g = base.eval(theta);
  SymMatrix out(n);
  for (int mu = 0; mu < n; ++mu) {
    for (int nu = mu; nu < n; ++nu) {
      double s = 0.0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) s += jac[a * n + mu] * g(a, b) * jac[b * n + nu];
      out.set(mu, nu, s);
    }
  }
  return out;
}

MetricField pullback_field(const MetricField& base, const CoordinateMap& map) {
  MetricField field;
  field.dim = base.dim;
  field.mode = DerivativeMode::finite_difference;
  field.eval = [base, map](std::span<const double> p) { return pullback_metric(base, map, p); };
  if (base.in_domain) {
    field.in_domain = [base, map](std::span<const double> p) {
      const std::vector<double> theta = map.to_base(p);
      return base.in_domain(theta);
    };
  }
  return field;
}

MetricField reduced_metric_field(CorrelationCoefficient r, DerivativeMode mode) {
  MetricField field;
  field.dim = 3;
  field.mode = mode;
  field.eval = [r](std::span<const double> p) {
    return fisher_metric_reduced(ModelParams3(p[0], p[1], p[2], r));
  };
  field.in_domain = [](std::span<const double> p) { return p[2] > 0.0; };
  field.fd_scale = [](std::span<const double> p, int k) {
    return k == 2 ? p[2] : std::max(1.0, std::abs(p[k]));
  };
  if (mode == DerivativeMode::analytic) {
    // Entries scale as 1/sigma^2 and depend on no other coordinate.
    field.first_derivative = [r](std::span<const double> p, int k) {
      SymMatrix d(3);
      if (k == 2) {
        const SymMatrix g = fisher_metric_reduced(ModelParams3(p[0], p[1], p[2], r));
        for (int i = 0; i < 3; ++i)
          for (int j = i; j < 3; ++j) d.set(i, j, -2.0 * g(i, j) / p[2]);
      }
      return d;
    };
    field.second_derivative = [r](std::span<const double> p, int k, int l) {
      SymMatrix d(3);
      if (k == 2 && l == 2) {
        const SymMatrix g = fisher_metric_reduced(ModelParams3(p[0], p[1], p[2], r));
        for (int i = 0; i < 3; ++i)
          for (int j = i; j < 3; ++j) d.set(i, j, 6.0 * g(i, j) / (p[2] * p[2]));
      }
      return d;
    };
  }
  return field;
}

namespace {

// Each entry of the full 4D metric has the form c * sigma_x^px * sigma_y^py
// with (px, py) in {(-2,0), (-1,-1), (0,-2)}; coordinates 1 and 3 are the
// spreads.
struct PowerEntry {
  int i, j;
  double c;
  int px, py;
};

std::vector<PowerEntry> full4d_entries(double r) {
  const double w = 1.0 / (1.0 - r * r);
  return {{0, 0, w, -2, 0},
          {0, 2, -r * w, -1, -1},
          {1, 1, (2.0 - r * r) * w, -2, 0},
          {1, 3, -r * r * w, -1, -1},
          {2, 2, w, 0, -2},
          {3, 3, (2.0 - r * r) * w, 0, -2}};
}

double power_term(double c, int px, int py, double sx, double sy) {
  return c * std::pow(sx, px) * std::pow(sy, py);
}

}  // namespace

MetricField full4d_metric_field(CorrelationCoefficient r, DerivativeMode mode) {
  MetricField field;
  field.dim = 4;
  field.mode = mode;
  field.eval = [r](std::span<const double> p) {
    return fisher_metric_analytic_4d(ModelParams4(p[0], p[1], p[2], p[3], r));
  };
  field.in_domain = [](std::span<const double> p) { return p[1] > 0.0 && p[3] > 0.0; };
  field.fd_scale = [](std::span<const double> p, int k) {
    return (k == 1 || k == 3) ? p[k] : std::max(1.0, std::abs(p[k]));
  };
  if (mode == DerivativeMode::analytic) {
    const double rv = r.value();
    field.first_derivative = [rv](std::span<const double> p, int k) {
      SymMatrix d(4);
      if (k == 1 || k == 3) {
        for (const PowerEntry& e : full4d_entries(rv)) {
          const int pw = (k == 1) ? e.px : e.py;
          if (pw == 0) continue;
          double v = power_term(e.c, e.px, e.py, p[1], p[3]);
          d.set(e.i, e.j, v * pw / p[k]);
        }
      }
      return d;
    };
    field.second_derivative = [rv](std::span<const double> p, int k, int l) {
      SymMatrix d(4);
      if ((k != 1 && k != 3) || (l != 1 && l != 3)) return d;
      for (const PowerEntry& e : full4d_entries(rv)) {
        const double v = power_term(e.c, e.px, e.py, p[1], p[3]);
        const int pk = (k == 1) ? e.px : e.py;
        const int pl = (l == 1) ? e.px : e.py;
        if (k == l) {
          if (pk != 0) d.set(e.i, e.j, v * pk * (pk - 1) / (p[k] * p[k]));
        } else {
          if (pk != 0 && pl != 0) d.set(e.i, e.j, v * pk * pl / (p[k] * p[l]));
        }
      }
      return d;
    };
  }
  return field;
}

MetricField diagonal_metric_field(int n, DerivativeMode mode) {
  if (n < 1) throw DomainViolation("diagonal metric needs n >= 1");
  MetricField field;
  field.dim = 2 * n;
  field.mode = mode;
  field.eval = [n](std::span<const double> p) {
    SymMatrix g(2 * n);
    for (int j = 0; j < n; ++j) {
      const double s = p[2 * j + 1];
      if (!(s > 0.0)) throw DomainViolation("diagonal metric sigma must be > 0");
      g.set(2 * j, 2 * j, 1.0 / (s * s));
      g.set(2 * j + 1, 2 * j + 1, 2.0 / (s * s));
    }
    return g;
  };
  field.in_domain = [n](std::span<const double> p) {
    for (int j = 0; j < n; ++j)
      if (!(p[2 * j + 1] > 0.0)) return false;
    return true;
  };
  field.fd_scale = [](std::span<const double> p, int k) {
    return (k % 2 == 1) ? p[k] : std::max(1.0, std::abs(p[k]));
  };
  if (mode == DerivativeMode::analytic) {
    field.first_derivative = [n](std::span<const double> p, int k) {
      SymMatrix d(2 * n);
      if (k % 2 == 1) {
        const double s = p[k];
        d.set(k - 1, k - 1, -2.0 / (s * s * s));
        d.set(k, k, -4.0 / (s * s * s));
      }
      return d;
    };
    field.second_derivative = [n](std::span<const double> p, int k, int l) {
      SymMatrix d(2 * n);
      if (k == l && k % 2 == 1) {
        const double s = p[k];
        d.set(k - 1, k - 1, 6.0 / (s * s * s * s));
        d.set(k, k, 12.0 / (s * s * s * s));
      }
      return d;
    };
  }
  return field;
}

MetricField constant_metric_field(const SymMatrix& g, DerivativeMode mode) {
  MetricField field;
  field.dim = g.dim();
  field.mode = mode;
  field.eval = [g](std::span<const double>) { return g; };
  if (mode == DerivativeMode::analytic) {
    const int n = g.dim();
    field.first_derivative = [n](std::span<const double>, int) { return SymMatrix(n); };
    field.second_derivative = [n](std::span<const double>, int, int) { return SymMatrix(n); };
  }
  return field;
}

CoordinateMap exp_spread_map() {
  CoordinateMap map;
  map.to_base = [](std::span<const double> p) {
    return std::vector<double>{p[0], p[1], std::exp(p[2])};
  };
  map.jacobian_to_base = [](std::span<const double> p) {
    std::vector<double> jac(9, 0.0);
    jac[0 * 3 + 0] = 1.0;
    jac[1 * 3 + 1] = 1.0;
    jac[2 * 3 + 2] = std::exp(p[2]);
    return jac;
  };
  return map;
}

}  // namespace igc
