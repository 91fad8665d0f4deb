#include "horocm/families.hpp"

#include <cmath>
#include <stdexcept>

#include "horocm/assumptions.hpp"
#include "horocm/symfunc.hpp"

namespace horocm::families {

ScalarField zonal_p2(const SphereGrid& g) {
  const Eigen::ArrayXd u = g.nodes().col(g.dim()).array();
  return ScalarField{&g, (1.5 * u.square() - 0.5).matrix()};
}

ScalarField admissible(const SphereGrid& g, double base, double amp, int k,
                       double C) {
  const ScalarField y2 = zonal_p2(g);
  ScalarField h{&g, (base + amp * y2.v.array().square()).matrix()};
  if (!(h.v.minCoeff() > 0.0))
    throw std::domain_error("admissible: profile not positive");
  return assumptions::make_admissible_f(h, k, C);
}

Manufactured manufactured_zonal(const SphereGrid& g, double c, double eps,
                                int k, double p, bool analytic) {
  const int n = g.dim();
  const ScalarField y2 = zonal_p2(g);
  ScalarField phi{&g, (c + eps * y2.v.array()).matrix()};
  SupportFunction sf = make_support(g.project_even(phi));

  Manufactured out{sf, ScalarField{}};
  if (!analytic) {
    const TensorField A = tensor_A(sf);
    ScalarField f{&g, Eigen::VectorXd(g.node_count())};
    for (Eigen::Index i = 0; i < g.node_count(); ++i)
      f.v[i] = sigma_k_of_tensor(A, i, k) *
               std::pow(sf.phi.v[i], static_cast<double>(k) - p);
    if (!(f.v.minCoeff() > 0.0))
      throw std::domain_error("manufactured_zonal: datum not positive (A[phi*] "
                              "leaves Gamma_k; reduce eps)");
    out.f = g.project_even(f);  // discrete sigma_k is even only to roundoff
    return out;
  }

  // Closed form: A[phi*] = 3 eps Du (x) Du + q g with u = x.e,
  // q = -|Dphi*|^2/(2 phi*) + (phi* - 1/phi*)/2 - 3 eps u^2, so the
  // eigenvalues are q (n-1 fold) and q + 3 eps (1 - u^2).
  const double cnm1k = static_cast<double>(symfunc::binomial(n - 1, k));
  const double cnm1km1 = static_cast<double>(symfunc::binomial(n - 1, k - 1));
  ScalarField f{&g, Eigen::VectorXd(g.node_count())};
  for (Eigen::Index i = 0; i < g.node_count(); ++i) {
    const double u = g.nodes()(i, n);
    const double ph = sf.phi.v[i];
    const double grad2 = 9.0 * eps * eps * u * u * (1.0 - u * u);
    const double q = -grad2 / (2.0 * ph) + 0.5 * (ph - 1.0 / ph) -
                     3.0 * eps * u * u;
    const double lam_tan = q + 3.0 * eps * (1.0 - u * u);
    const double sig =
        std::pow(q, k - 1) * (cnm1k * q + cnm1km1 * lam_tan);
    f.v[i] = sig * std::pow(ph, static_cast<double>(k) - p);
  }
  if (!(f.v.minCoeff() > 0.0))
    throw std::domain_error("manufactured_zonal: datum not positive (A[phi*] "
                            "leaves Gamma_k; reduce eps)");
  out.f = f;
  return out;
}

}  // namespace horocm::families
