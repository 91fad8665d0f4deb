#include "horocm/horo_geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "horocm/symfunc.hpp"

namespace horocm {

SupportFunction make_support(ScalarField phi, bool require_even) {
  const SphereGrid& g = *phi.grid;
  g.require_same_grid(phi, "make_support");
  for (Eigen::Index i = 0; i < g.node_count(); ++i)
    if (!(phi.v[i] > 1.0))
      throw std::domain_error("support function: phi <= 1 at node " +
                              std::to_string(i));
  if (require_even) {
    for (Eigen::Index i = 0; i < g.node_count(); ++i) {
      const double gap = std::abs(phi.v[i] - phi.v[g.antipode()[i]]);
      if (gap > 1e-12 * (1.0 + std::abs(phi.v[i])))
        throw std::domain_error("support function: not even at node " +
                                std::to_string(i));
    }
  }
  return SupportFunction{std::move(phi), require_even};
}

double lorentz_dot(const Eigen::VectorXd& y, double y0, const Eigen::VectorXd& z,
                   double z0) {
  return y.dot(z) - y0 * z0;
}

TensorField tensor_A(const SupportFunction& sf) {
  const SphereGrid& g = *sf.phi.grid;
  const int n = g.dim();
  for (Eigen::Index i = 0; i < g.node_count(); ++i)
    if (!(sf.phi.v[i] > 1.0))
      throw std::domain_error("tensor_A: phi <= 1 at node " + std::to_string(i));

  TensorField A = g.hessian(sf.phi);
  const VectorField dphi = g.gradient(sf.phi);
  for (Eigen::Index i = 0; i < g.node_count(); ++i) {
    const double ph = sf.phi.v[i];
    const double grad2 = dphi.comps.row(i).squaredNorm();
    const double diag = -grad2 / (2.0 * ph) + 0.5 * (ph - 1.0 / ph);
    for (int a = 0; a < n; ++a)
      A.comps(i, TensorField::pack_index(n, a, a)) += diag;
  }
  return A;
}

double hconvexity_margin(const SupportFunction& sf) {
  const TensorField A = tensor_A(sf);
  double margin = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < A.comps.rows(); ++i) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A.node(i),
                                                      Eigen::EigenvaluesOnly);
    margin = std::min(margin, es.eigenvalues()[0]);
  }
  return margin;
}

MinkowskiField embed(const SupportFunction& sf) {
  const SphereGrid& g = *sf.phi.grid;
  const int d = g.dim() + 1;  // ambient spatial dimension
  const VectorField dphi = g.gradient(sf.phi);
  MinkowskiField X{&g, Eigen::MatrixXd(g.node_count(), d),
                   Eigen::VectorXd(g.node_count())};
  for (Eigen::Index i = 0; i < g.node_count(); ++i) {
    const double ph = sf.phi.v[i];
    if (!(ph > 1.0))
      throw std::domain_error("embed: phi <= 1 at node " + std::to_string(i));
    Eigen::VectorXd grad_amb = Eigen::VectorXd::Zero(d);
    for (int a = 0; a < g.dim(); ++a)
      grad_amb += dphi.comps(i, a) * g.frame(a).row(i).transpose();
    const double q = (grad_amb.squaredNorm() / ph + 1.0 / ph);
    X.spatial.row(i) = -0.5 * ph * g.nodes().row(i) +
                       0.5 * q * g.nodes().row(i) - grad_amb.transpose();
    X.time[i] = 0.5 * ph + 0.5 * q;
  }
  return X;
}

MinkowskiField normal_field(const SupportFunction& sf) {
  MinkowskiField nu = embed(sf);
  const SphereGrid& g = *sf.phi.grid;
  for (Eigen::Index i = 0; i < g.node_count(); ++i) {
    const double inv = 1.0 / sf.phi.v[i];
    nu.spatial.row(i) -= inv * g.nodes().row(i);
    nu.time[i] -= inv;
  }
  return nu;
}

Eigen::MatrixXd curvature_radii(const SupportFunction& sf) {
  const SphereGrid& g = *sf.phi.grid;
  const int n = g.dim();
  const TensorField A = tensor_A(sf);
  Eigen::MatrixXd radii(g.node_count(), n);
  for (Eigen::Index i = 0; i < g.node_count(); ++i) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sf.phi.v[i] * A.node(i),
                                                      Eigen::EigenvaluesOnly);
    if (!(es.eigenvalues()[0] > 0.0))
      throw std::domain_error("curvature_radii: A[phi] not positive at node " +
                              std::to_string(i));
    radii.row(i) = es.eigenvalues().transpose();  // ascending
  }
  return radii;
}

ScalarField area_element(const SupportFunction& sf) {
  const SphereGrid& g = *sf.phi.grid;
  const TensorField A = tensor_A(sf);
  ScalarField out{&g, Eigen::VectorXd(g.node_count())};
  for (Eigen::Index i = 0; i < g.node_count(); ++i)
    out.v[i] = A.node(i).determinant();
  return out;
}

ScalarField measure_density_pk(const SupportFunction& sf, double p, int k) {
  const SphereGrid& g = *sf.phi.grid;
  const int n = g.dim();
  if (k < 0 || k > n)
    throw std::invalid_argument("measure_density_pk: need 0 <= k <= n");
  const TensorField A = tensor_A(sf);
  const double norm = 1.0 / static_cast<double>(symfunc::binomial(n, n - k));
  ScalarField out{&g, Eigen::VectorXd(g.node_count())};
  for (Eigen::Index i = 0; i < g.node_count(); ++i)
    out.v[i] = norm * std::pow(sf.phi.v[i], -p - k) *
               sigma_k_of_tensor(A, i, n - k);
  return out;
}

Eigen::MatrixXd to_poincare_ball(const MinkowskiField& X) {
  Eigen::MatrixXd ball(X.spatial.rows(), X.spatial.cols());
  for (Eigen::Index i = 0; i < X.spatial.rows(); ++i) {
    if (!(X.time[i] > 0.0))
      throw std::domain_error("to_poincare_ball: y0 <= 0 at node " +
                              std::to_string(i));
    ball.row(i) = X.spatial.row(i) / (1.0 + X.time[i]);
  }
  return ball;
}

double sigma_k_of_tensor(const TensorField& T, Eigen::Index i, int k) {
  const int n = T.n;
  if (k == 0) return 1.0;
  if (k > n) return 0.0;
  if (k == 1) {
    double tr = 0.0;
    for (int a = 0; a < n; ++a) tr += T.comps(i, TensorField::pack_index(n, a, a));
    return tr;
  }
  const Eigen::MatrixXd M = T.node(i);
  if (k == 2) return 0.5 * (M.trace() * M.trace() - M.squaredNorm());
  if (k == n) return M.determinant();
  return symfunc::sigma_k_matrix(M, k);
}

ScalarField equation_residual(const SupportFunction& sf, const ScalarField& f,
                              double p, int k) {
  const SphereGrid& g = *sf.phi.grid;
  g.require_same_grid(f, "equation_residual");
  const TensorField A = tensor_A(sf);
  ScalarField r{&g, Eigen::VectorXd(g.node_count())};
  for (Eigen::Index i = 0; i < g.node_count(); ++i)
    r.v[i] = sigma_k_of_tensor(A, i, k) - std::pow(sf.phi.v[i], p - k) * f.v[i];
  return r;
}

}  // namespace horocm
