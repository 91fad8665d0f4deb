#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "horocm/assumptions.hpp"
#include "horocm/families.hpp"
#include "horocm/solver.hpp"
#include "horocm/symfunc.hpp"
#include "test_helpers.hpp"

using namespace horocm;
using namespace horocm::solver;

TEST_CASE("f0_constant") {
  SphereGrid g(2, 16);
  ScalarField f{&g, (2.0 - testutil::zonal_u(g).v.array().square()).matrix()};
  // cell-centered nodes: the discrete max sits at u = sin(pi/32)
  const double fmax_oracle = 2.0 - std::pow(std::sin(M_PI / 32.0), 2);
  CHECK(f0_constant(f, 0.0, 1, 2) == doctest::Approx(fmax_oracle).epsilon(1e-14));
  // p > 2k: gamma_p regardless of f
  SphereGrid g3(3, 8);
  ScalarField f3 = g3.make_field(0.01);
  const double gp = 4.0 * std::pow(1.0, 0.5) / std::pow(5.0, 2.5) * 3.0;
  CHECK(f0_constant(f3, 5.0, 2, 3) == doctest::Approx(gp).epsilon(1e-12));
  // p = 2k demands max f < C_n^k/2^k
  CHECK_THROWS_AS(f0_constant(f, 2.0, 1, 2), std::domain_error);
}

TEST_CASE("f_t endpoints and midpoint formula") {
  SphereGrid g(2, 16);
  const Eigen::ArrayXd u2 = testutil::zonal_u(g).v.array().square();
  ScalarField f{&g, (1.0 + u2).matrix()};  // range [1,2], max 2
  ScalarField f1 = f_t(f, 1.0, 0.0, 1);
  CHECK((f1.v - f.v).cwiseAbs().maxCoeff() == 0.0);  // bit-exact endpoint
  ScalarField f0 = f_t(f, 0.0, 0.0, 1);
  CHECK((f0.v.array() == f.v.maxCoeff()).all());
  ScalarField fh = f_t(f, 0.5, 0.0, 1);
  const double fmax = f.v.maxCoeff();
  for (Eigen::Index i = 0; i < g.node_count(); i += 31) {
    const double expect = 1.0 / (0.5 / fmax + 0.5 / f.v[i]);
    CHECK(fh.v[i] == doctest::Approx(expect).epsilon(1e-14));
  }
  // p > 2k family starts at gamma_p
  SphereGrid g3(3, 8);
  ScalarField fc = g3.make_field(0.05);
  ScalarField fc0 = f_t(fc, 0.0, 5.0, 2);
  CHECK(fc0.v[0] == doctest::Approx(assumptions::gamma_p(5.0, 2, 3)));
}

TEST_CASE("constant_solution closed forms and residual zero") {
  CHECK(constant_solution(2.0, 0.0, 1, 2) ==
        doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));
  const double g6 = assumptions::gamma_p(6.0, 2, 3);
  CHECK(constant_solution(g6, 6.0, 2, 3) ==
        doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
  // p = k: c - 1/c = 2 (gamma/C)^(1/k)
  const double c = constant_solution(1.5, 1.0, 1, 2);
  CHECK(c - 1.0 / c == doctest::Approx(2.0 * 1.5 / 2.0).epsilon(1e-12));
  // generic scalar solve satisfies the defining equation
  for (double p : {0.5, 1.7, 2.0}) {
    for (double gamma : {0.3, 0.9}) {
      const double cc = constant_solution(gamma, p, 1, 2);
      const double lhs = 2.0 * 0.5 * (cc - 1.0 / cc);
      CHECK(lhs == doctest::Approx(std::pow(cc, p - 1.0) * gamma).epsilon(1e-12));
      CHECK(cc > 1.0);
    }
  }
  CHECK_THROWS_AS(constant_solution(0.9 * g6, 6.0, 2, 3), std::domain_error);
  CHECK_THROWS_AS(constant_solution(2.0, 2.0, 1, 2), std::domain_error);
}

TEST_CASE("residual at constants, manufactured data, and perturbations") {
  SphereGrid g(2, 16);
  ScalarField f = g.make_field(2.0);
  ProblemSpec spec = make_problem(g, 1, 0.0, f);
  SupportFunction c3 = make_support(g.make_field(std::sqrt(3.0)));
  for (double t : {0.0, 0.37, 1.0})
    CHECK(residual(c3, spec, t).v.cwiseAbs().maxCoeff() < 1e-10);

  // discrete manufactured datum: residual vanishes identically
  auto man = families::manufactured_zonal(g, 1.8, 0.05, 1, 0.0, false);
  ProblemSpec mspec = make_problem(g, 1, 0.0, man.f);
  CHECK(residual(man.phi_star, mspec, 1.0).v.cwiseAbs().maxCoeff() < 5e-12);

  // non-solution: residual matches an independent nodewise recomputation
  ScalarField y2 = families::zonal_p2(g);
  SupportFunction pert =
      make_support(ScalarField{&g, (2.0 + 0.1 * y2.v.array()).matrix()});
  ScalarField r = residual(pert, spec, 1.0);
  const TensorField A = tensor_A(pert);
  for (Eigen::Index i = 0; i < g.node_count(); i += 41) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A.node(i),
                                                      Eigen::EigenvaluesOnly);
    const double indep =
        es.eigenvalues().sum() - 2.0 / pert.phi.v[i];  // sigma_1 - phi^{-1} f
    CHECK(r.v[i] == doctest::Approx(indep).epsilon(1e-10));
  }
  CHECK(r.v.cwiseAbs().maxCoeff() > 1e-3);
}

TEST_CASE("jacobian equals a(Lap + b) at constant solutions") {
  SphereGrid g(2, 16);
  for (double p : {0.0, 1.0}) {
    const double gamma = 2.0;
    const double c = constant_solution(gamma, p, 1, 2);
    ProblemSpec spec = make_problem(g, 1, p, g.make_field(gamma));
    SupportFunction phic = make_support(g.make_field(c));
    SpMat J = assemble_jacobian(phic, spec, 1.0);
    auto [a, b] = constant_linearization_coeffs(c, p, 1, 2);
    if (p == 0.0) {
      CHECK(a == doctest::Approx(1.0));
      CHECK(b == doctest::Approx(2.0));  // Lap + n
    }
    for (int l : {1, 2, 3}) {
      ScalarField y = testutil::harmonic(g, l, l % 2);
      Eigen::VectorXd lhs = J * y.v;
      Eigen::VectorXd rhs = a * (g.laplacian_op() * y.v + b * y.v);
      CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-9);
    }
    // eigenfunction check on the first harmonic: J Y1 = a(-n + b) Y1
    ScalarField y1 = testutil::harmonic(g, 1, 0);
    Eigen::VectorXd jy = J * y1.v;
    Eigen::VectorXd ey = a * (-2.0 + b) * y1.v;
    const double h2 = g.mesh_width() * g.mesh_width();
    CHECK((jy - ey).cwiseAbs().maxCoeff() < 10.0 * h2 * h2 + 1e-9);
  }
}

TEST_CASE("jacobian matches finite differences of the residual") {
  SphereGrid g(2, 16);
  std::mt19937 rng(21);
  std::normal_distribution<double> gauss;
  ScalarField y2 = families::zonal_p2(g);
  ScalarField base{&g, (2.0 + 0.08 * y2.v.array()).matrix()};
  SupportFunction phi = make_support(g.project_even(base));
  ScalarField f = families::admissible(g, 2.0, 0.3, 1, 4.0);
  ProblemSpec spec = make_problem(g, 1, 1.0, f);
  SpMat J = assemble_jacobian(phi, spec, 0.7);

  const double eps = 1e-5;
  for (int rep = 0; rep < 3; ++rep) {
    Eigen::VectorXd psi(g.node_count());
    for (Eigen::Index i = 0; i < g.node_count(); ++i) psi[i] = gauss(rng);
    psi = expand_even(g, restrict_even(g, psi));  // even direction
    psi /= psi.cwiseAbs().maxCoeff();
    SupportFunction up{ScalarField{&g, phi.phi.v + eps * psi}, true};
    SupportFunction dn{ScalarField{&g, phi.phi.v - eps * psi}, true};
    Eigen::VectorXd fd =
        (residual(up, spec, 0.7).v - residual(dn, spec, 0.7).v) / (2.0 * eps);
    Eigen::VectorXd an = J * psi;
    const double scale = an.cwiseAbs().maxCoeff();
    CHECK((fd - an).cwiseAbs().maxCoeff() <= 1e-6 * scale);
  }
}

TEST_CASE("newton: exact start, quadratic convergence, controlled failure") {
  SphereGrid g(2, 16);
  ProblemSpec spec = make_problem(g, 1, 0.0, g.make_field(2.0));
  HomotopyConfig cfg;

  SupportFunction exact = make_support(g.make_field(std::sqrt(3.0)));
  NewtonResult r0 = newton_solve(exact, spec, 1.0, cfg);
  CHECK(r0.status == NewtonStatus::ok);
  CHECK(r0.iterations <= 1);

  // perturbed start: residual history contracts at least quadratically-ish
  ScalarField y2 = families::zonal_p2(g);
  ScalarField pert{&g, (std::sqrt(3.0) + 1e-3 * y2.v.array()).matrix()};
  NewtonResult r1 = newton_solve(make_support(g.project_even(pert)), spec, 1.0, cfg);
  CHECK(r1.status == NewtonStatus::ok);
  CHECK(r1.iterations <= 4);
  REQUIRE(r1.residual_history.size() >= 2);
  const double rr0 = r1.residual_history[0], rr1 = r1.residual_history[1];
  CHECK(rr1 <= 100.0 * rr0 * rr0 + 1e-13);  // quadratic contraction

  // evenness of every iterate is exact under the pairing
  for (Eigen::Index i = 0; i < g.node_count(); ++i)
    CHECK(r1.phi.phi.v[i] == r1.phi.phi.v[g.antipode()[i]]);

  // far start under a tight iteration budget: distinct failure diagnostic,
  // no silent wrong answer
  HomotopyConfig tight = cfg;
  tight.newton_max_iter = 2;
  ScalarField far{&g, (1.0 + 1e-6 + 0.0 * y2.v.array()).matrix()};
  NewtonResult r2 = newton_solve(make_support(far), spec, 1.0, tight);
  CHECK(r2.status == NewtonStatus::max_iterations);
  CHECK(r2.residual_sup > tight.newton_tol);
}

TEST_CASE("continuation: constant data is a single sweep") {
  SphereGrid g(2, 16);
  ProblemSpec spec = make_problem(g, 1, 0.0, g.make_field(2.0));
  HomotopyConfig cfg;
  SolveReport rep = continuation_solve(spec, cfg);
  CHECK(rep.converged);
  CHECK((rep.phi.phi.v.array() - std::sqrt(3.0)).abs().maxCoeff() < 1e-8);
  CHECK(rep.margin > 0.0);
  CHECK(rep.certificate.pass);
  CHECK(rep.t_schedule.back() == 1.0);
}

TEST_CASE("continuation: admissible family end-to-end with certificates") {
  SphereGrid g(2, 16);
  ScalarField f = families::admissible(g, 2.0, 0.3, 1, 8.0);
  ProblemSpec spec = make_problem(g, 1, 0.0, f);
  HomotopyConfig cfg;
  SolveReport rep = continuation_solve(spec, cfg);
  CHECK(rep.converged);
  CHECK(rep.assumption_pass);
  CHECK(rep.margin > 0.0);
  CHECK(rep.certificate.bounds_pass);
  CHECK(rep.certificate.gradient_pass);
  CHECK(rep.certificate.pass);
  // barrier honesty: the recorded trace stays inside the barriers
  for (double m : rep.margin_history) CHECK(m > cfg.delta_A);
  // solution is even
  for (Eigen::Index i = 0; i < g.node_count(); ++i)
    CHECK(rep.phi.phi.v[i] == rep.phi.phi.v[g.antipode()[i]]);

  // residual consistency: independent sigma_k route at the solution
  const TensorField A = tensor_A(rep.phi);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < g.node_count(); ++i) {
    const double minor_route = sigma_k_of_tensor(A, i, 1);
    const double eig_route = symfunc::sigma_k_matrix_eig(A.node(i), 1);
    worst = std::max(worst, std::abs(minor_route - eig_route));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("continuation: manufactured datum recovers phi*") {
  SphereGrid g(2, 16);
  auto man = families::manufactured_zonal(g, 1.8, 0.05, 1, 0.0, true);
  ProblemSpec spec = make_problem(g, 1, 0.0, man.f);
  HomotopyConfig cfg;
  SolveReport rep = continuation_solve(spec, cfg);
  CHECK(rep.converged);
  const double err =
      (rep.phi.phi.v - man.phi_star.phi.v).cwiseAbs().maxCoeff();
  CHECK(err < 1e-4);  // discretization error only
}

TEST_CASE("S^3, k = 2 problems") {
  SphereGrid g(3, 8);
  ProblemSpec spec = make_problem(g, 2, 0.0, g.make_field(3.0));
  HomotopyConfig cfg;
  SolveReport rep = continuation_solve(spec, cfg);
  CHECK(rep.converged);
  CHECK((rep.phi.phi.v.array() - std::sqrt(3.0)).abs().maxCoeff() < 1e-6);

  // Jacobian at constants: a(Lap + b) with the k = 2 coefficients
  const double c = std::sqrt(3.0);
  auto [a, b] = constant_linearization_coeffs(c, 0.0, 2, 3);
  CHECK(a == doctest::Approx(2.0 / std::sqrt(3.0)).epsilon(1e-12));
  CHECK(b == doctest::Approx(3.0).epsilon(1e-12));
  SupportFunction phic = make_support(g.make_field(c));
  SpMat J = assemble_jacobian(phic, spec, 1.0);
  ScalarField y = testutil::harmonic(g, 2, 0);
  Eigen::VectorXd lhs = J * y.v;
  Eigen::VectorXd rhs = a * (g.laplacian_op() * y.v + b * y.v);
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-9);
}
