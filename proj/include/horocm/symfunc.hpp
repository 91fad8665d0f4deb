#pragma once

#include <Eigen/Dense>
#include <vector>

// Elementary symmetric functions of vectors and symmetric matrices, their
// first and second derivatives, and Garding-cone membership.

namespace horocm::symfunc {

// Exact binomial coefficient, computed in integer arithmetic.
long long binomial(int n, int k);

// sigma_0..sigma_kmax of the entries of lambda in one Newton-style sweep.
Eigen::VectorXd sigma_all(const Eigen::VectorXd& lambda, int kmax);

// k-th elementary symmetric polynomial; sigma_0 = 1, sigma_m = 0 for m > n.
double sigma_k(const Eigen::VectorXd& lambda, int k);

// sigma_k of lambda with the listed entries (0-based, distinct) set to zero,
// i.e. sigma_k(lambda|i) and sigma_k(lambda|ij).
double sigma_k_deleted(const Eigen::VectorXd& lambda, int k,
                       const std::vector<int>& deleted);

// sigma_k(A) = e_k(eigenvalues of A), evaluated as the sum of k x k principal
// minors. Throws std::invalid_argument for non-symmetric input.
double sigma_k_matrix(const Eigen::MatrixXd& A, int k);

// Same quantity through the eigenvalue route. Kept as an independent
// evaluation path for cross-checks; do not collapse the two.
double sigma_k_matrix_eig(const Eigen::MatrixXd& A, int k);

// Matrix of partial derivatives d sigma_k / d A_ij (entries treated as
// independent variables). Symmetric; diagonal in any eigenbasis of A with
// entries sigma_{k-1}(lambda|i). k = 0 or k > n gives the zero matrix.
Eigen::MatrixXd sigma_k_grad(const Eigen::MatrixXd& A, int k);

// Second-derivative contraction sigma_k^{ij,rs}(A) xi_ij xi_rs, evaluated by
// orthogonal diagonalization of A; xi need not be symmetric. Returns 0 for
// k < 2 (each entry pattern of sigma_1 is linear).
double sigma_k_hess_contract(const Eigen::MatrixXd& A, int k,
                             const Eigen::MatrixXd& xi);

// Garding cone Gamma_k: sigma_j(lambda) > 0 for all j = 1..k.
bool in_gamma_k(const Eigen::VectorXd& lambda, int k);

}  // namespace horocm::symfunc
