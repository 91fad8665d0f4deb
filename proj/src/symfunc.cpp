#include "horocm/symfunc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace horocm::symfunc {

long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  long long r = 1;
  for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
  return r;
}

Eigen::VectorXd sigma_all(const Eigen::VectorXd& lambda, int kmax) {
  if (kmax < 0) throw std::invalid_argument("sigma_all: kmax < 0");
  Eigen::VectorXd e = Eigen::VectorXd::Zero(kmax + 1);
  e[0] = 1.0;
  const int n = static_cast<int>(lambda.size());
  for (int i = 0; i < n; ++i) {
    for (int j = std::min(kmax, i + 1); j >= 1; --j)
      e[j] += lambda[i] * e[j - 1];
  }
  return e;
}

double sigma_k(const Eigen::VectorXd& lambda, int k) {
  if (k < 0) throw std::invalid_argument("sigma_k: k < 0");
  if (k == 0) return 1.0;
  if (k > lambda.size()) return 0.0;
  return sigma_all(lambda, k)[k];
}

double sigma_k_deleted(const Eigen::VectorXd& lambda, int k,
                       const std::vector<int>& deleted) {
  Eigen::VectorXd mu = lambda;
  for (size_t a = 0; a < deleted.size(); ++a) {
    const int i = deleted[a];
    if (i < 0 || i >= lambda.size())
      throw std::invalid_argument("sigma_k_deleted: index out of range");
    for (size_t b = 0; b < a; ++b)
      if (deleted[b] == i)
        throw std::invalid_argument("sigma_k_deleted: repeated index");
    mu[i] = 0.0;
  }
  return sigma_k(mu, k);
}

namespace {

void require_symmetric(const Eigen::MatrixXd& A, const char* who) {
  if (A.rows() != A.cols())
    throw std::invalid_argument(std::string(who) + ": matrix not square");
  const double scale = 1.0 + A.cwiseAbs().maxCoeff();
  if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::invalid_argument(std::string(who) + ": matrix not symmetric");
}

// Sum of k x k principal minors of a square matrix (no symmetry needed).
double principal_minor_sum(const Eigen::MatrixXd& A, int k) {
  const int n = static_cast<int>(A.rows());
  if (k == 0) return 1.0;
  if (k > n) return 0.0;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  double total = 0.0;
  Eigen::MatrixXd sub(k, k);
  while (true) {
    for (int r = 0; r < k; ++r)
      for (int c = 0; c < k; ++c) sub(r, c) = A(idx[r], idx[c]);
    total += sub.determinant();
    // next k-combination of {0..n-1}
    int pos = k - 1;
    while (pos >= 0 && idx[pos] == n - k + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int q = pos + 1; q < k; ++q) idx[q] = idx[q - 1] + 1;
  }
  return total;
}

}  // namespace

double sigma_k_matrix(const Eigen::MatrixXd& A, int k) {
  require_symmetric(A, "sigma_k_matrix");
  if (k < 0) throw std::invalid_argument("sigma_k_matrix: k < 0");
  return principal_minor_sum(A, k);
}

double sigma_k_matrix_eig(const Eigen::MatrixXd& A, int k) {
  require_symmetric(A, "sigma_k_matrix_eig");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
  return sigma_k(es.eigenvalues(), k);
}

Eigen::MatrixXd sigma_k_grad(const Eigen::MatrixXd& A, int k) {
  require_symmetric(A, "sigma_k_grad");
  const int n = static_cast<int>(A.rows());
  if (k <= 0 || k > n) return Eigen::MatrixXd::Zero(n, n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  const Eigen::VectorXd lam = es.eigenvalues();
  Eigen::VectorXd d(n);
  for (int i = 0; i < n; ++i) d[i] = sigma_k_deleted(lam, k - 1, {i});
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

double sigma_k_hess_contract(const Eigen::MatrixXd& A, int k,
                             const Eigen::MatrixXd& xi) {
  require_symmetric(A, "sigma_k_hess_contract");
  const int n = static_cast<int>(A.rows());
  if (xi.rows() != n || xi.cols() != n)
    throw std::invalid_argument("sigma_k_hess_contract: xi shape mismatch");
  if (k < 2 || k > n) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  const Eigen::VectorXd lam = es.eigenvalues();
  const Eigen::MatrixXd eta =
      es.eigenvectors().transpose() * xi * es.eigenvectors();
  // Case rules in the eigenbasis:
  //   sigma_{k-2}(lam|ir) eta_ii eta_rr  (i != r)
  //   -sigma_{k-2}(lam|ij) eta_ij eta_ji (i != j)
  Eigen::MatrixXd s2(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      s2(i, j) = s2(j, i) = sigma_k_deleted(lam, k - 2, {i, j});
    }
  double total = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      total += s2(i, j) * (eta(i, i) * eta(j, j) - eta(i, j) * eta(j, i));
    }
  return total;
}

bool in_gamma_k(const Eigen::VectorXd& lambda, int k) {
  if (k < 1 || k > lambda.size())
    throw std::invalid_argument("in_gamma_k: need 1 <= k <= n");
  const Eigen::VectorXd e = sigma_all(lambda, k);
  for (int j = 1; j <= k; ++j)
    if (!(e[j] > 0.0)) return false;
  return true;
}

}  // namespace horocm::symfunc
