#include "horocm/conformal.hpp"

#include <cmath>
#include <stdexcept>

#include "horocm/symfunc.hpp"

namespace horocm::conformal {

NirenbergCoefficients nirenberg_coeffs(int k, int n) {
  if (k < 1 || k > n) throw std::invalid_argument("nirenberg_coeffs: 1 <= k <= n");
  NirenbergCoefficients out{k, n, Eigen::VectorXd(k + 1)};
  for (int j = 0; j <= k; ++j) {
    const double sign = ((k - j) % 2 == 0) ? 1.0 : -1.0;
    out.c[j] = static_cast<double>(symfunc::binomial(n - j, k - j)) * sign *
               std::pow(2.0, j - k);
  }
  return out;
}

Eigen::MatrixXd radii_to_schouten(const Eigen::MatrixXd& radii) {
  return radii.array() + 0.5;
}

CombinationCheck check_combination_identity(const Eigen::VectorXd& radii, int k) {
  const int n = static_cast<int>(radii.size());
  const NirenbergCoefficients nc = nirenberg_coeffs(k, n);
  CombinationCheck out;
  out.lhs = symfunc::sigma_k(radii, k);
  const Eigen::VectorXd lam = radii.array() + 0.5;
  const Eigen::VectorXd sig = symfunc::sigma_all(lam, k);
  out.rhs = 0.0;
  for (int j = 0; j <= k; ++j) out.rhs += nc.c[j] * sig[j];
  out.gap = std::abs(out.lhs - out.rhs);
  return out;
}

bool regularity_condition(const SupportFunction& phi) {
  // all R_i > 0 at every node <=> phi A[phi] > 0 <=> A[phi] > 0 (phi > 1)
  return hconvexity_margin(phi) > 0.0;
}

}  // namespace horocm::conformal
