#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "horocm/conformal.hpp"
#include "horocm/families.hpp"
#include "test_helpers.hpp"

using namespace horocm;
using namespace horocm::conformal;

TEST_CASE("nirenberg coefficients: pinned values") {
  NirenbergCoefficients c1 = nirenberg_coeffs(1, 4);
  CHECK(c1.c[0] == doctest::Approx(-2.0));  // -n/2
  CHECK(c1.c[1] == doctest::Approx(1.0));

  NirenbergCoefficients c2 = nirenberg_coeffs(2, 3);
  CHECK(c2.c[0] == doctest::Approx(0.75));
  CHECK(c2.c[1] == doctest::Approx(-1.0));
  CHECK(c2.c[2] == doctest::Approx(1.0));

  for (int n = 1; n <= 6; ++n)
    for (int k = 1; k <= n; ++k) {
      NirenbergCoefficients c = nirenberg_coeffs(k, n);
      CHECK(c.c[k] == 1.0);
      // alternating signs ending positive at j = k
      for (int j = 0; j <= k; ++j)
        CHECK(c.c[j] * ((k - j) % 2 == 0 ? 1.0 : -1.0) > 0.0);
    }
}

TEST_CASE("radii/Schouten dictionary") {
  Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(4, 3);
  CHECK((radii_to_schouten(zero).array() == 0.5).all());

  const double r = 0.45;
  Eigen::MatrixXd geo = Eigen::MatrixXd::Constant(
      2, 3, std::exp(r) * std::sinh(r));
  Eigen::MatrixXd lam = radii_to_schouten(geo);
  CHECK(lam(0, 0) == doctest::Approx(std::exp(2.0 * r) / 2.0).epsilon(1e-14));

  // round trip is the identity (up to one rounding of the +1/2 shift)
  Eigen::MatrixXd back = lam.array() - 0.5;
  CHECK((back - geo).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("combination identity: pinned case and random sweep") {
  Eigen::Vector3d ones(1.0, 1.0, 1.0);
  CombinationCheck c = check_combination_identity(ones, 2);
  CHECK(c.lhs == doctest::Approx(3.0));
  CHECK(c.rhs == doctest::Approx(3.0));  // 3/4 - 9/2 + 27/4
  CHECK(c.gap <= 1e-12 * (1.0 + std::abs(c.lhs)));

  std::mt19937 rng(31);
  std::normal_distribution<double> g;
  for (int rep = 0; rep < 1000; ++rep) {
    const int n = 1 + rep % 6;
    const int k = 1 + rep % n;
    Eigen::VectorXd radii(n);
    for (int i = 0; i < n; ++i) radii[i] = 2.0 * g(rng);
    CombinationCheck cc = check_combination_identity(radii, k);
    CHECK(cc.gap <= 1e-12 * (1.0 + std::abs(cc.lhs)));
    if (k == 1) {
      // sigma_1(R) = sigma_1(lambda) - n/2
      const double direct = (radii.array() + 0.5).sum() - 0.5 * n;
      CHECK(std::abs(cc.lhs - direct) <= 1e-13 * (1.0 + std::abs(cc.lhs)));
    }
  }
}

TEST_CASE("regularity condition tracks uniform h-convexity") {
  SphereGrid g(2, 16);
  const double c = 1.8;
  SupportFunction konst = make_support(g.make_field(c));
  CHECK(regularity_condition(konst));
  // margin of the radii at constants is (c^2 - 1)/2
  Eigen::MatrixXd radii = curvature_radii(konst);
  CHECK(radii.minCoeff() ==
        doctest::Approx((c * c - 1.0) / 2.0).epsilon(1e-9));

  ScalarField y2 = families::zonal_p2(g);
  ScalarField bump{&g, (2.0 + 0.9 * y2.v.array()).matrix()};
  SupportFunction bad = make_support(g.project_even(bump));
  CHECK(hconvexity_margin(bad) < 0.0);
  CHECK_FALSE(regularity_condition(bad));
}
