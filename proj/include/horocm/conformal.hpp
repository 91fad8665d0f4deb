#pragma once

#include <Eigen/Dense>

#include "horocm/horo_geometry.hpp"

// Dictionary between hyperbolic curvature radii and the Schouten-tensor
// eigenvalues of the conformal metric g = phi^{-2} g_{S^n}: R_i = lambda_i -
// 1/2, and the induced identity expressing sigma_k of the radii as a linear
// combination of sigma_j of the Schouten eigenvalues.

namespace horocm::conformal {

struct NirenbergCoefficients {
  int k = 0, n = 0;
  Eigen::VectorXd c;  // c_j = C_{n-j}^{k-j} (-1)^{k-j} 2^{j-k}, j = 0..k
};

NirenbergCoefficients nirenberg_coeffs(int k, int n);

// lambda_i = R_i + 1/2, elementwise on a per-node radii matrix.
Eigen::MatrixXd radii_to_schouten(const Eigen::MatrixXd& radii);

struct CombinationCheck {
  double lhs = 0.0;  // sigma_k(R)
  double rhs = 0.0;  // sum_j c_j sigma_j(R + 1/2)
  double gap = 0.0;
};

CombinationCheck check_combination_identity(const Eigen::VectorXd& radii, int k);

// True iff all radii are positive at every node, equivalently all Schouten
// eigenvalues exceed 1/2, equivalently A[phi] > 0. Schouten semantics require
// n >= 3; for n = 2 only the radii-positivity reading applies.
bool regularity_condition(const SupportFunction& phi);

}  // namespace horocm::conformal
