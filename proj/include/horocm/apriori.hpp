#pragma once

#include "horocm/horo_geometry.hpp"
#include "horocm/sphere_grid.hpp"

// Computable forms of the a priori estimates for sigma_k(A[phi]) = phi^{p-k} f:
// C^0 bounds from the maximum principle, the C^1 bound
// |Dphi|^2/phi^2 <= 1 - 1/phi^2 for even h-convex bodies, and the trace
// H = trace A[phi] that controls the C^2 norm. Used both as solver safeguards
// and as post-hoc solution certificates.

namespace horocm::apriori {

struct C0Bounds {
  double lower = 0.0;  // > 1
  double upper = 0.0;
};

// Root bracket of g(t) = a t^{p/k} - t^2 + 1 on (1, infinity) for p > 2k.
// g(1) = a > 0; for a < a0 the set {g <= 0} is exactly (t1, t2); at the
// degenerate a = a0 both roots collapse onto the minimizer t0.
struct GRoots {
  bool degenerate = false;
  double t0 = 0.0;
  double t1 = 0.0;
  double t2 = 0.0;
};

GRoots g_roots(double a, double p, int k);

// Regime-split C^0 bounds from the bounds of f. Throws std::domain_error
// naming the failing hypothesis when the regime's auxiliary condition is
// violated (fmax >= C_n^k/2^k at p = 2k, fmin > gamma_p at p > 2k).
C0Bounds c0_bounds(double fmin, double fmax, double p, int k, int n);

// max over nodes of |Dphi|^2/phi^2 - (1 - 1/phi^2); <= tol certifies the
// gradient bound.
double check_gradient_bound(const SupportFunction& phi);

// H = trace A[phi] = Lap phi - n|Dphi|^2/(2phi) + n(phi - 1/phi)/2.
ScalarField trace_H(const SupportFunction& phi);

struct BoundsCertificate {
  double c0_lower = 0.0, c0_upper = 0.0;
  double phi_min = 0.0, phi_max = 0.0;
  double gradient_bound_violation = 0.0;
  double trace_H_max = 0.0;
  double residual_sup = 0.0;
  double hconvexity_margin = 0.0;
  double tol_bounds = 0.0, tol_gradient = 0.0, tol_residual = 0.0;
  bool bounds_pass = false, gradient_pass = false, residual_pass = false,
       margin_pass = false;
  bool pass = false;
};

// Evaluates every explicitly computable estimate for a claimed solution of
// sigma_k(A[phi]) = phi^{p-k} f. Tolerances are discretization-aware and
// reported in the output.
BoundsCertificate certify(const SupportFunction& phi, const ScalarField& f,
                          double p, int k, double residual_tol = -1.0);

}  // namespace horocm::apriori
