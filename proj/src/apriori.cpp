#include "horocm/apriori.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include "horocm/symfunc.hpp"

namespace horocm::apriori {

namespace {

// Largest root of fn on (1, T]: doubles T until fn > 0, then bisects.
// fn must be < 0 somewhere left of the root and > 0 beyond it.
double bisect_up(const std::function<double(double)>& fn, double lo) {
  double hi = std::max(2.0, 2.0 * lo);
  int guard = 0;
  while (fn(hi) <= 0.0) {
    hi *= 2.0;
    if (++guard > 200) throw std::runtime_error("bisect_up: no sign change");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (fn(mid) <= 0.0)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-14 * hi) break;
  }
  return 0.5 * (lo + hi);
}

double half_sum_with_reciprocal(double x) { return 0.5 * (x + 1.0 / x); }

}  // namespace

GRoots g_roots(double a, double p, int k) {
  if (!(p > 2.0 * k)) throw std::invalid_argument("g_roots: requires p > 2k");
  if (!(a > 0.0)) throw std::invalid_argument("g_roots: requires a > 0");
  const double a0 =
      (2.0 * k / p) * std::pow((p - 2.0 * k) / p, (p - 2.0 * k) / (2.0 * k));
  if (a > a0 * (1.0 + 1e-12))
    throw std::domain_error("g_roots: a > a0, g has no nonpositive values");
  auto g = [&](double t) { return a * std::pow(t, p / k) - t * t + 1.0; };
  GRoots out;
  out.t0 = std::pow(2.0 * k / (a * p), k / (p - 2.0 * k));
  if (a >= a0 * (1.0 - 1e-12)) {
    out.degenerate = true;
    out.t1 = out.t2 = out.t0;
    return out;
  }
  // g decreases on (1, t0), increases after: bisect each side of t0
  double lo = 1.0, hi = out.t0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  out.t1 = 0.5 * (lo + hi);
  lo = out.t0;
  hi = 2.0 * out.t0;
  while (g(hi) <= 0.0) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) <= 0.0)
      lo = mid;
    else
      hi = mid;
  }
  out.t2 = 0.5 * (lo + hi);
  return out;
}

C0Bounds c0_bounds(double fmin, double fmax, double p, int k, int n) {
  if (!(0.0 < fmin && fmin <= fmax))
    throw std::invalid_argument("c0_bounds: need 0 < fmin <= fmax");
  const double Cnk = static_cast<double>(symfunc::binomial(n, k));
  const double qmin = std::pow(fmin / Cnk, 1.0 / k);
  const double qmax = std::pow(fmax / Cnk, 1.0 / k);
  C0Bounds out;

  if (p == 0.0) {
    const double root = std::sqrt(1.0 + 2.0 * qmin);
    out.lower = 0.5 * root + 0.5 / root;
    out.upper = std::sqrt(1.0 + 2.0 * qmax) + std::sqrt(2.0 * qmax);
    return out;
  }
  if (p <= 2.0 * k) {
    const double amin = 2.0 * qmin, amax = 2.0 * qmax;
    if (p == 2.0 * k && !(amax < 1.0))
      throw std::domain_error(
          "c0_bounds: p = 2k requires max f < C_n^k / 2^k");
    // max phi >= M_low, the root of m^2 - amin m^{p/k} - 1
    const double m_low = bisect_up(
        [&](double m) { return m * m - amin * std::pow(m, p / k) - 1.0; }, 1.0);
    out.lower = half_sum_with_reciprocal(m_low);
    // min phi <= M_up, the largest root of m^2 - amax m^{p/k} - 1
    const double m_up = bisect_up(
        [&](double m) { return m * m - amax * std::pow(m, p / k) - 1.0; }, 1.0);
    out.upper = m_up + std::sqrt(m_up * m_up - 1.0);
    return out;
  }
  // p > 2k: bracket through g(t) = a t^{p/k} - t^2 + 1 with a from fmin
  const double a = 2.0 * qmin;
  GRoots roots;
  try {
    roots = g_roots(a, p, k);
  } catch (const std::domain_error&) {
    throw std::domain_error("c0_bounds: p > 2k requires min f <= gamma_p");
  }
  out.lower = half_sum_with_reciprocal(roots.t1);
  out.upper = roots.t2;
  return out;
}

double check_gradient_bound(const SupportFunction& sf) {
  const SphereGrid& g = *sf.phi.grid;
  const VectorField dphi = g.gradient(sf.phi);
  double worst = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < g.node_count(); ++i) {
    const double ph = sf.phi.v[i];
    const double lhs = dphi.comps.row(i).squaredNorm() / (ph * ph);
    worst = std::max(worst, lhs - (1.0 - 1.0 / (ph * ph)));
  }
  return worst;
}

ScalarField trace_H(const SupportFunction& sf) {
  const SphereGrid& g = *sf.phi.grid;
  const int n = g.dim();
  const ScalarField lap = g.laplacian(sf.phi);
  const VectorField dphi = g.gradient(sf.phi);
  ScalarField H{&g, Eigen::VectorXd(g.node_count())};
  for (Eigen::Index i = 0; i < g.node_count(); ++i) {
    const double ph = sf.phi.v[i];
    H.v[i] = lap.v[i] - n * dphi.comps.row(i).squaredNorm() / (2.0 * ph) +
             0.5 * n * (ph - 1.0 / ph);
  }
  return H;
}

BoundsCertificate certify(const SupportFunction& sf, const ScalarField& f,
                          double p, int k, double residual_tol) {
  const SphereGrid& g = *sf.phi.grid;
  g.require_same_grid(f, "certify");
  BoundsCertificate cert;
  const double h2 = g.mesh_width() * g.mesh_width();
  const double fscale = f.v.cwiseAbs().maxCoeff();

  const C0Bounds bounds = c0_bounds(f.v.minCoeff(), f.v.maxCoeff(), p, k, g.dim());
  cert.c0_lower = bounds.lower;
  cert.c0_upper = bounds.upper;
  cert.phi_min = sf.phi.v.minCoeff();
  cert.phi_max = sf.phi.v.maxCoeff();
  cert.tol_bounds = 1e-6 + 10.0 * h2;
  cert.bounds_pass = (cert.phi_min >= cert.c0_lower - cert.tol_bounds) &&
                     (cert.phi_max <= cert.c0_upper + cert.tol_bounds) &&
                     (cert.phi_min > 1.0);

  cert.gradient_bound_violation = check_gradient_bound(sf);
  cert.tol_gradient = 1e-6 + 10.0 * h2;
  cert.gradient_pass = cert.gradient_bound_violation <= cert.tol_gradient;

  cert.trace_H_max = trace_H(sf).v.maxCoeff();

  const ScalarField res = equation_residual(sf, f, p, k);
  cert.residual_sup = res.v.cwiseAbs().maxCoeff();
  cert.tol_residual = residual_tol > 0.0 ? residual_tol : 1e-8 * (1.0 + fscale);
  cert.residual_pass = cert.residual_sup <= cert.tol_residual;

  cert.hconvexity_margin = hconvexity_margin(sf);
  cert.margin_pass = cert.hconvexity_margin > 0.0;

  cert.pass = cert.bounds_pass && cert.gradient_pass && cert.residual_pass &&
              cert.margin_pass && std::isfinite(cert.trace_H_max);
  return cert;
}

}  // namespace horocm::apriori
