#include "horocm/assumptions.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "horocm/symfunc.hpp"

namespace horocm::assumptions {

int classify_case(double p, int k) {
  if (k < 1) throw std::invalid_argument("classify_case: k < 1");
  if (p < 0.0) throw std::invalid_argument("classify_case: p < 0 out of scope");
  if (p == 0.0) return 1;
  if (p <= 0.5 * k) return 2;
  if (p < k) return 3;
  if (p < 2.0 * k) return 4;
  if (p == 2.0 * k) return 5;
  return 6;
}

double gamma_p(double p, int k, int n) {
  if (!(p > 2.0 * k)) throw std::invalid_argument("gamma_p: requires p > 2k");
  return std::pow(static_cast<double>(k), k) *
         std::pow(p - 2.0 * k, 0.5 * (p - 2.0 * k)) / std::pow(p, 0.5 * p) *
         static_cast<double>(symfunc::binomial(n, k));
}

namespace {

void validate_even_positive(const ScalarField& f, const char* who) {
  const SphereGrid& g = *f.grid;
  g.require_same_grid(f, who);
  for (Eigen::Index i = 0; i < g.node_count(); ++i) {
    if (!(f.v[i] > 0.0))
      throw std::domain_error(std::string(who) + ": f <= 0 at node " +
                              std::to_string(i));
    if (std::abs(f.v[i] - f.v[g.antipode()[i]]) > 1e-12 * (1.0 + f.v[i]))
      throw std::domain_error(std::string(who) + ": f not even at node " +
                              std::to_string(i));
  }
}

}  // namespace

AssumptionReport check_assumption(const ScalarField& f, double p, int k) {
  validate_even_positive(f, "check_assumption");
  const SphereGrid& g = *f.grid;
  const int n = g.dim();
  AssumptionReport rep;
  rep.case_id = classify_case(p, k);

  const double Cnk = static_cast<double>(symfunc::binomial(n, k));
  const double expo = (rep.case_id <= 3) ? -1.0 / k : -1.0 / p;
  ScalarField F{&g, f.v.array().pow(expo).matrix()};
  const TensorField HF = g.hessian(F);
  const VectorField DF = g.gradient(F);
  const double fmax = f.v.maxCoeff(), fmin = f.v.minCoeff();

  rep.margin = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < g.node_count(); ++i) {
    const double grad = DF.comps.row(i).norm();
    const double grad2 = grad * grad;
    const double Fi = F.v[i];
    double coef = 0.0;
    switch (rep.case_id) {
      case 1:
        coef = -grad + Fi / (2.0 + 8.0 * std::pow(fmax / Cnk, 1.0 / k));
        break;
      case 2:
        coef = -(k + 2.0 * p) / k * grad + (p * p) / (k * k) * Fi;
        break;
      case 3:
        coef = -std::pow(3.0 * k - 2.0 * p, 2) / (p * (2.0 * p - k)) * grad2 /
                   (2.0 * Fi) +
               0.5 * (p / k) * Fi;
        break;
      case 4:
      case 5:
        coef = -grad2 / (2.0 * Fi) + 0.5 * Fi;
        break;
      case 6:
        coef = -grad2 / (2.0 * Fi) + (k / p) * Fi;
        break;
    }
    Eigen::MatrixXd T =
        HF.node(i) + coef * Eigen::MatrixXd::Identity(n, n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T, Eigen::EigenvaluesOnly);
    rep.margin = std::min(rep.margin, es.eigenvalues()[0]);
  }
  rep.tol = 1e-8 * (1.0 + fmax);

  if (rep.case_id == 5) {
    const double bound = Cnk / std::pow(2.0, k);
    rep.aux.push_back({"max_f_below_Cnk_over_2k", fmax, bound, fmax < bound});
  }
  if (rep.case_id == 6) {
    rep.aux.push_back({"k_in_range", static_cast<double>(k),
                       static_cast<double>(n - 1), 2 <= k && k <= n - 1});
    const double gp = gamma_p(p, k, n);
    rep.aux.push_back({"min_f_at_most_gamma_p", fmin, gp, fmin <= gp});
  }

  rep.pass = rep.margin >= -rep.tol;
  for (const auto& a : rep.aux) rep.pass = rep.pass && a.pass;
  return rep;
}

ScalarField make_admissible_f(const ScalarField& h, int k, double C) {
  validate_even_positive(h, "make_admissible_f");
  if (C < 0.0) throw std::invalid_argument("make_admissible_f: C < 0");
  ScalarField f{h.grid,
                (h.v.array().pow(-1.0 / k) + C).pow(-static_cast<double>(k))
                    .matrix()};
  return f;
}

}  // namespace horocm::assumptions
