#pragma once

#include <Eigen/Dense>

#include "horocm/sphere_grid.hpp"

// Horospherical support-function geometry: the tensor A[phi], h-convexity
// certificates, the hyperboloid embedding, normals, curvature radii, area
// element and measure densities.
//
// Conventions follow the hyperboloid model of H^{n+1} in Minkowski space
// R^{n+1,1} with product <(y,y0),(z,z0)> = y.z - y0 z0. The support function
// phi = e^u > 1 parametrizes the boundary over S^n through the horospherical
// Gauss map; A[phi] = D^2 phi - (|Dphi|^2/2phi) g + (phi - 1/phi)/2 g.

namespace horocm {

struct SupportFunction {
  ScalarField phi;
  bool even = true;
};

// Validates phi > 1 everywhere (names the first offending node otherwise)
// and, if require_even, evenness under the grid pairing.
SupportFunction make_support(ScalarField phi, bool require_even = true);

struct MinkowskiField {
  const SphereGrid* grid = nullptr;
  Eigen::MatrixXd spatial;  // N x (n+1)
  Eigen::VectorXd time;     // N
};

double lorentz_dot(const Eigen::VectorXd& y, double y0, const Eigen::VectorXd& z,
                   double z0);

// A[phi] in the per-node orthonormal frame.
TensorField tensor_A(const SupportFunction& phi);

// min over nodes of lambda_min(A[phi]); > 0 certifies discrete uniform
// h-convexity.
double hconvexity_margin(const SupportFunction& phi);

// Boundary embedding X(x) = phi/2 (-x,1) + ((|Dphi|^2/phi + 1/phi)/2)(x,1)
// - (Dphi, 0); satisfies <X,X> = -1 up to discretization error.
MinkowskiField embed(const SupportFunction& phi);

// Outward unit normal nu = X - (1/phi)(x,1).
MinkowskiField normal_field(const SupportFunction& phi);

// Hyperbolic curvature radii: eigenvalues of phi A[phi] per node, ascending.
// Principal curvatures recover as kappa_i = 1 + 1/R_i. Requires A[phi] > 0.
Eigen::MatrixXd curvature_radii(const SupportFunction& phi);

// det A[phi] per node; integrate() of it approximates the hypersurface area.
ScalarField area_element(const SupportFunction& phi);

// k-th horospherical p-surface area measure density
// (1/C_n^{n-k}) phi^{-p-k} sigma_{n-k}(A[phi]).
ScalarField measure_density_pk(const SupportFunction& phi, double p, int k);

// Poincare-ball projection y/(1 + y0) of hyperboloid points.
Eigen::MatrixXd to_poincare_ball(const MinkowskiField& X);

// Pointwise residual of sigma_k(A[phi]) = phi^{p-k} f. The PDE's left side is
// evaluated by small closed-form principal-minor formulas; see
// sigma_k_of_tensor.
ScalarField equation_residual(const SupportFunction& phi, const ScalarField& f,
                              double p, int k);

// sigma_k of a packed symmetric tensor at one node (closed forms for n <= 3).
double sigma_k_of_tensor(const TensorField& T, Eigen::Index node, int k);

}  // namespace horocm
