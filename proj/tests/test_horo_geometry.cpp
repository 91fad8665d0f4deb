#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>

#include "horocm/horo_geometry.hpp"
#include "test_helpers.hpp"

using namespace horocm;
using testutil::harmonic;

namespace {

SupportFunction constant_support(const SphereGrid& g, double c) {
  return make_support(g.make_field(c));
}

SupportFunction perturbed_support(const SphereGrid& g, double c, double eps) {
  ScalarField f = harmonic(g, 2, 0);
  ScalarField phi{&g, c + eps * f.v.array()};
  return make_support(g.project_even(phi));
}

}  // namespace

TEST_CASE("tensor_A at constants and geodesic spheres") {
  SphereGrid g(2, 16);
  const double c = 2.5;
  TensorField A = tensor_A(constant_support(g, c));
  const double expect = 0.5 * (c - 1.0 / c);
  for (Eigen::Index i = 0; i < g.node_count(); ++i) {
    Eigen::MatrixXd M = A.node(i);
    CHECK((M - expect * Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() <
          1e-9);
  }

  const double r = 0.8;
  TensorField Ar = tensor_A(constant_support(g, std::exp(r)));
  for (Eigen::Index i = 0; i < g.node_count(); i += 11)
    CHECK(Ar.node(i)(0, 0) == doctest::Approx(std::sinh(r)).epsilon(1e-9));

  ScalarField bad = g.make_field(0.9);
  CHECK_THROWS_AS(make_support(bad), std::domain_error);
}

TEST_CASE("tensor_A linearization against finite differences") {
  SphereGrid g(2, 24);
  const double c = 2.0, eps = 1e-4;
  ScalarField Y = harmonic(g, 2, 0);
  ScalarField up{&g, c + eps * Y.v.array()};
  ScalarField dn{&g, c - eps * Y.v.array()};
  TensorField Ap = tensor_A(make_support(up));
  TensorField Am = tensor_A(make_support(dn));
  Eigen::MatrixXd fd = (Ap.comps - Am.comps) / (2.0 * eps);

  TensorField HY = g.hessian(Y);
  Eigen::MatrixXd expected = HY.comps;
  const double coef = 0.5 * (1.0 + 1.0 / (c * c));
  for (int a = 0; a < 2; ++a)
    expected.col(TensorField::pack_index(2, a, a)) += coef * Y.v;
  CHECK((fd - expected).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("hconvexity_margin") {
  SphereGrid g(2, 16);
  CHECK(hconvexity_margin(constant_support(g, std::sqrt(3.0))) ==
        doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-8));
  CHECK(hconvexity_margin(perturbed_support(g, 2.0, 0.01)) > 0.0);
  // large second-harmonic perturbation destroys h-convexity
  CHECK(hconvexity_margin(perturbed_support(g, 2.0, 0.9)) < 0.0);
}

TEST_CASE("embed: geodesic sphere and hyperboloid constraint") {
  SphereGrid g(2, 32);
  const double r = 0.7;
  MinkowskiField X = embed(constant_support(g, std::exp(r)));
  // X(x) = (-sinh r x, cosh r): the support direction x is attained at the
  // antipodal boundary point.
  for (Eigen::Index i = 0; i < g.node_count(); ++i) {
    CHECK((X.spatial.row(i) + std::sinh(r) * g.nodes().row(i)).norm() < 1e-10);
    CHECK(X.time[i] == doctest::Approx(std::cosh(r)).epsilon(1e-12));
  }

  // near-degenerate body shrinks to the north pole N = (0,1)
  MinkowskiField Xs = embed(constant_support(g, 1.0 + 1e-8));
  CHECK(Xs.spatial.row(0).norm() < 1e-7);
  CHECK(Xs.time[0] == doctest::Approx(1.0).epsilon(1e-7));

  const double h2 = g.mesh_width() * g.mesh_width();
  MinkowskiField Xp = embed(perturbed_support(g, 2.0, 0.05));
  for (Eigen::Index i = 0; i < g.node_count(); ++i) {
    const double c = lorentz_dot(Xp.spatial.row(i), Xp.time[i],
                                 Xp.spatial.row(i), Xp.time[i]);
    CHECK(std::abs(c + 1.0) < h2);
  }
}

TEST_CASE("normal: geodesic sphere, unit norm, orthogonality") {
  SphereGrid g(2, 32);
  const double r = 0.6, h2 = g.mesh_width() * g.mesh_width();
  SupportFunction sph = constant_support(g, std::exp(r));
  MinkowskiField nu = normal_field(sph);
  for (Eigen::Index i = 0; i < g.node_count(); i += 13) {
    CHECK((nu.spatial.row(i) + std::cosh(r) * g.nodes().row(i)).norm() < 1e-10);
    CHECK(nu.time[i] == doctest::Approx(std::sinh(r)).epsilon(1e-10));
  }

  SupportFunction pert = perturbed_support(g, 2.0, 0.05);
  MinkowskiField X = embed(pert), nup = normal_field(pert);
  for (Eigen::Index i = 0; i < g.node_count(); ++i) {
    CHECK(std::abs(lorentz_dot(nup.spatial.row(i), nup.time[i],
                               nup.spatial.row(i), nup.time[i]) -
                   1.0) < h2);
    CHECK(std::abs(lorentz_dot(X.spatial.row(i), X.time[i],
                               nup.spatial.row(i), nup.time[i])) < h2);
  }
}

TEST_CASE("tangency and induced-metric identity") {
  SphereGrid g(2, 32);
  const double h2 = g.mesh_width() * g.mesh_width();
  SupportFunction pert = perturbed_support(g, 2.0, 0.05);
  MinkowskiField X = embed(pert);
  MinkowskiField nu = normal_field(pert);
  TensorField A = tensor_A(pert);

  // discrete tangent vectors: chart derivatives of each ambient component
  std::vector<Eigen::MatrixXd> dX(2);
  std::vector<Eigen::VectorXd> dX0(2);
  for (int a = 0; a < 2; ++a) {
    dX[a].resize(g.node_count(), 3);
    for (int c = 0; c < 3; ++c) {
      ScalarField comp{&g, X.spatial.col(c).eval()};
      dX[a].col(c) = g.gradient(comp).comps.col(a);
    }
    ScalarField tcomp{&g, X.time};
    dX0[a] = g.gradient(tcomp).comps.col(a);
  }
  for (Eigen::Index i = 0; i < g.node_count(); ++i) {
    Eigen::Matrix2d gin, AA = A.node(i) * A.node(i);
    for (int a = 0; a < 2; ++a) {
      CHECK(std::abs(lorentz_dot(dX[a].row(i), dX0[a][i], nu.spatial.row(i),
                                 nu.time[i])) < 2.0 * h2);
      for (int b = 0; b < 2; ++b)
        gin(a, b) = lorentz_dot(dX[a].row(i), dX0[a][i], dX[b].row(i), dX0[b][i]);
    }
    CHECK((gin - AA).cwiseAbs().maxCoeff() < 5.0 * h2);
  }
}

TEST_CASE("curvature radii: geodesic sphere and constants") {
  SphereGrid g(2, 32);
  const double r = 0.9;
  Eigen::MatrixXd radii = curvature_radii(constant_support(g, std::exp(r)));
  const double expect = std::exp(r) * std::sinh(r);
  CHECK((radii.array() - expect).abs().maxCoeff() < 1e-9);
  // kappa = 1 + 1/R = coth r
  CHECK(1.0 + 1.0 / radii(0, 0) ==
        doctest::Approx(1.0 / std::tanh(r)).epsilon(1e-9));

  const double c = 2.2;
  Eigen::MatrixXd rc = curvature_radii(constant_support(g, c));
  CHECK((rc.array() - (c * c - 1.0) / 2.0).abs().maxCoeff() < 1e-9);

  // perturbed body: radii match a direct eigen-decomposition of phi A
  SupportFunction pert = perturbed_support(g, 2.0, 0.05);
  TensorField A = tensor_A(pert);
  Eigen::MatrixXd rp = curvature_radii(pert);
  for (Eigen::Index i = 0; i < g.node_count(); i += 17) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(pert.phi.v[i] * A.node(i));
    CHECK((rp.row(i).transpose() - es.eigenvalues()).cwiseAbs().maxCoeff() <
          1e-12);
    // Weingarten consistency at the eigenvalue level
    for (int a = 0; a < 2; ++a) {
      const double kappa = 1.0 + 1.0 / rp(i, a);
      CHECK((kappa - 1.0) * rp(i, a) == doctest::Approx(1.0).epsilon(1e-14));
    }
  }

  CHECK_THROWS_AS(curvature_radii(perturbed_support(g, 2.0, 0.9)),
                  std::domain_error);
}

TEST_CASE("area element") {
  SphereGrid g(2, 32);
  const double r = 0.75;
  SupportFunction sph = constant_support(g, std::exp(r));
  ScalarField da = area_element(sph);
  const double sh2 = std::sinh(r) * std::sinh(r);
  CHECK((da.v.array() - sh2).abs().maxCoeff() < 1e-9);
  CHECK(g.integrate(da) == doctest::Approx(4.0 * M_PI * sh2).epsilon(1e-8));

  const double c = 1.9;
  ScalarField dac = area_element(constant_support(g, c));
  CHECK(dac.v[0] == doctest::Approx(std::pow(0.5 * (c - 1.0 / c), 2)));

  SupportFunction pert = perturbed_support(g, 2.0, 0.05);
  CHECK(hconvexity_margin(pert) > 0.0);
  CHECK(area_element(pert).v.minCoeff() > 0.0);
}

TEST_CASE("measure density") {
  SphereGrid g(3, 8);
  const int n = 3;
  const double c = 2.0;
  SupportFunction sf = constant_support(g, c);

  // p=0, k=n-1: (1/C_n^1) c^{-(n-1)} * n * (c - 1/c)/2
  ScalarField d1 = measure_density_pk(sf, 0.0, n - 1);
  const double expect =
      std::pow(c, -(n - 1.0)) * n * 0.5 * (c - 1.0 / c) / n;
  CHECK(d1.v[0] == doctest::Approx(expect).epsilon(1e-9));

  // k = n, p = 0 reduces to phi^{-n} (sigma_0 = 1, C_n^0 = 1)
  ScalarField dn = measure_density_pk(sf, 0.0, n);
  CHECK(dn.v[0] == doctest::Approx(std::pow(c, -n)).epsilon(1e-12));

  SphereGrid g2(2, 16);
  SupportFunction pert = perturbed_support(g2, 2.0, 0.05);
  ScalarField dp = measure_density_pk(pert, 1.5, 1);
  CHECK(dp.v.minCoeff() > 0.0);
}

TEST_CASE("Poincare ball projection") {
  SphereGrid g(2, 16);
  const double r = 1.1;
  MinkowskiField X = embed(constant_support(g, std::exp(r)));
  Eigen::MatrixXd ball = to_poincare_ball(X);
  for (Eigen::Index i = 0; i < g.node_count(); ++i) {
    CHECK(ball.row(i).norm() == doctest::Approx(std::tanh(r / 2.0)).epsilon(1e-9));
    CHECK(ball.row(i).norm() < 1.0);
  }
  MinkowskiField origin{&g, Eigen::MatrixXd::Zero(1, 3),
                        Eigen::VectorXd::Ones(1)};
  CHECK(to_poincare_ball(origin).row(0).norm() == 0.0);
}

TEST_CASE("equation residual closed forms") {
  SphereGrid g(2, 16);
  const double c = std::sqrt(3.0);
  SupportFunction sf = constant_support(g, c);
  // n=2, k=1, p=0, f == 2: sigma_1(A[c]) = 2*(c-1/c)/2 = c - 1/c = 2/c
  ScalarField f = g.make_field(2.0);
  ScalarField r = equation_residual(sf, f, 0.0, 1);
  CHECK(r.v.cwiseAbs().maxCoeff() < 1e-10);
}
