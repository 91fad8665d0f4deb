#include "horocm/solver.hpp"

#include <Eigen/SparseLU>
#include <cmath>
#include <stdexcept>

#include "horocm/assumptions.hpp"
#include "horocm/symfunc.hpp"

namespace horocm::solver {

const char* to_string(NewtonStatus s) {
  switch (s) {
    case NewtonStatus::ok: return "ok";
    case NewtonStatus::line_search_failure: return "line_search_failure";
    case NewtonStatus::max_iterations: return "max_iterations";
    case NewtonStatus::barrier_violation: return "barrier_violation";
    case NewtonStatus::linear_solve_failure: return "linear_solve_failure";
  }
  return "unknown";
}

ProblemSpec make_problem(const SphereGrid& grid, int k, double p,
                         ScalarField f) {
  grid.require_same_grid(f, "make_problem");
  if (k < 1 || k > grid.dim() - 1)
    throw std::invalid_argument("make_problem: need 1 <= k <= n-1");
  if (p < 0.0) throw std::invalid_argument("make_problem: p < 0 out of scope");
  for (Eigen::Index i = 0; i < grid.node_count(); ++i) {
    if (!(f.v[i] > 0.0))
      throw std::domain_error("make_problem: f <= 0 at node " + std::to_string(i));
    if (std::abs(f.v[i] - f.v[grid.antipode()[i]]) > 1e-12 * (1.0 + f.v[i]))
      throw std::domain_error("make_problem: f not even at node " +
                              std::to_string(i));
  }
  return ProblemSpec{&grid, k, p, std::move(f)};
}

double f0_constant(const ScalarField& f, double p, int k, int n) {
  const double fmax = f.v.maxCoeff();
  if (p > 2.0 * k) return assumptions::gamma_p(p, k, n);
  if (p == 2.0 * k) {
    const double bound =
        static_cast<double>(symfunc::binomial(n, k)) / std::pow(2.0, k);
    if (!(fmax < bound))
      throw std::domain_error("f0_constant: p = 2k requires max f < C_n^k/2^k");
  }
  return fmax;
}

ScalarField f_t(const ScalarField& f, double t, double p, int k) {
  if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("f_t: t outside [0,1]");
  const SphereGrid& g = *f.grid;
  if (t == 1.0) return ScalarField{&g, f.v};
  const int n = g.dim();
  const double e = (p < k) ? -1.0 / k : -1.0 / p;
  const double base =
      (p > 2.0 * k) ? assumptions::gamma_p(p, k, n) : f.v.maxCoeff();
  if (t == 0.0) return g.make_field(base);
  const double b = std::pow(base, e);
  ScalarField out{&g, Eigen::VectorXd(g.node_count())};
  for (Eigen::Index i = 0; i < g.node_count(); ++i)
    out.v[i] = std::pow((1.0 - t) * b + t * std::pow(f.v[i], e), 1.0 / e);
  return out;
}

double constant_solution(double gamma, double p, int k, int n) {
  if (!(gamma > 0.0)) throw std::invalid_argument("constant_solution: gamma <= 0");
  if (k < 1 || k > n - 1)
    throw std::invalid_argument("constant_solution: need 1 <= k <= n-1");
  const double Cnk = static_cast<double>(symfunc::binomial(n, k));
  if (p == 0.0) return std::sqrt(1.0 + 2.0 * std::pow(gamma / Cnk, 1.0 / k));
  if (p > 2.0 * k) {
    const double gp = assumptions::gamma_p(p, k, n);
    if (std::abs(gamma - gp) > 1e-10 * gp)
      throw std::domain_error(
          "constant_solution: p > 2k admits a constant solution only at "
          "gamma = gamma_p");
    return std::sqrt(p / (p - 2.0 * k));
  }
  if (p == 2.0 * k && !(gamma < Cnk / std::pow(2.0, k)))
    throw std::domain_error(
        "constant_solution: p = 2k requires gamma < C_n^k/2^k");
  if (p == static_cast<double>(k)) {
    const double q = std::pow(gamma / Cnk, 1.0 / k);
    return q + std::sqrt(q * q + 1.0);
  }
  auto G = [&](double c) {
    return Cnk * std::pow(0.5 * (c - 1.0 / c), k) - std::pow(c, p - k) * gamma;
  };
  double lo = 1.0, hi = 2.0;
  while (G(hi) <= 0.0) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (G(mid) <= 0.0 ? lo : hi) = mid;
  }
  double c = 0.5 * (lo + hi);
  for (int it = 0; it < 4; ++it) {  // Newton polish
    const double s = 0.5 * (c - 1.0 / c);
    const double dG = Cnk * k * std::pow(s, k - 1) * 0.5 * (1.0 + 1.0 / (c * c)) -
                      (p - k) * std::pow(c, p - k - 1) * gamma;
    if (dG == 0.0) break;
    c -= G(c) / dG;
  }
  return c;
}

LinearizationCoeffs constant_linearization_coeffs(double c, double p, int k,
                                                  int n) {
  const double s = 0.5 * (c - 1.0 / c);
  LinearizationCoeffs out;
  out.a = static_cast<double>(symfunc::binomial(n - 1, k - 1)) *
          std::pow(s, k - 1);
  out.b = n - (n * p / k) * (0.5 - 0.5 / (c * c));
  return out;
}

ScalarField residual(const SupportFunction& phi, const ProblemSpec& spec,
                     double t) {
  const ScalarField ft = f_t(spec.f, t, spec.p, spec.k);
  return equation_residual(phi, ft, spec.p, spec.k);
}

namespace {

// d sigma_k / dA at one node, closed forms for the supported (n, k) range.
Eigen::MatrixXd sigma_grad_node(const Eigen::MatrixXd& A, int k) {
  const int n = static_cast<int>(A.rows());
  if (k == 1) return Eigen::MatrixXd::Identity(n, n);
  if (k == 2) return A.trace() * Eigen::MatrixXd::Identity(n, n) - A;
  return symfunc::sigma_k_grad(A, k);
}

}  // namespace

SpMat assemble_jacobian(const SupportFunction& phi, const ProblemSpec& spec,
                        double t) {
  const SphereGrid& g = *spec.grid;
  const int n = g.dim();
  const Eigen::Index N = g.node_count();
  const TensorField A = tensor_A(phi);
  const VectorField dphi = g.gradient(phi.phi);
  const ScalarField ft = f_t(spec.f, t, spec.p, spec.k);

  const int npack = n * (n + 1) / 2;
  std::vector<Eigen::VectorXd> S(npack, Eigen::VectorXd(N));
  Eigen::VectorXd trS(N), diag(N);
  for (Eigen::Index i = 0; i < N; ++i) {
    const Eigen::MatrixXd Si = sigma_grad_node(A.node(i), spec.k);
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b)
        S[TensorField::pack_index(n, a, b)][i] = Si(a, b);
    trS[i] = Si.trace();
    const double ph = phi.phi.v[i];
    const double grad2 = dphi.comps.row(i).squaredNorm();
    diag[i] = trS[i] * (grad2 / (2.0 * ph * ph) + 0.5 * (1.0 + 1.0 / (ph * ph))) -
              (spec.p - spec.k) * std::pow(ph, spec.p - spec.k - 1.0) * ft.v[i];
  }

  SpMat J(N, N);
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      const int pkidx = TensorField::pack_index(n, a, b);
      const double mult = (a == b) ? 1.0 : 2.0;
      J += SpMat((mult * S[pkidx]).asDiagonal() * g.hess_op(a, b));
    }
  for (int a = 0; a < n; ++a) {
    const Eigen::VectorXd w =
        -trS.cwiseProduct(dphi.comps.col(a)).cwiseQuotient(phi.phi.v);
    J += SpMat(w.asDiagonal() * g.grad_op(a));
  }
  SpMat D(N, N);
  D.setIdentity();
  J += SpMat(diag.asDiagonal() * D);
  J.makeCompressed();
  return J;
}

SpMat fold_even(const SphereGrid& g, const SpMat& J) {
  const auto& reps = g.even_reps();
  const auto& idx = g.even_index();
  const Eigen::Index M = static_cast<Eigen::Index>(reps.size());
  std::vector<bool> is_rep(g.node_count(), false);
  for (Eigen::Index r = 0; r < M; ++r) is_rep[reps[r]] = true;
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(J.nonZeros() / 2 + 1);
  for (int col = 0; col < J.outerSize(); ++col)
    for (SpMat::InnerIterator it(J, col); it; ++it)
      if (is_rep[it.row()])
        trips.emplace_back(idx[it.row()], idx[col], it.value());
  SpMat R(M, M);
  R.setFromTriplets(trips.begin(), trips.end());
  return R;
}

Eigen::VectorXd restrict_even(const SphereGrid& g, const Eigen::VectorXd& full) {
  const auto& reps = g.even_reps();
  Eigen::VectorXd r(reps.size());
  for (size_t i = 0; i < reps.size(); ++i) r[i] = full[reps[i]];
  return r;
}

Eigen::VectorXd expand_even(const SphereGrid& g, const Eigen::VectorXd& reduced) {
  Eigen::VectorXd full(g.node_count());
  for (Eigen::Index i = 0; i < g.node_count(); ++i)
    full[i] = reduced[g.even_index()[i]];
  return full;
}

namespace {

bool barriers_ok(const SphereGrid& g, const Eigen::VectorXd& phi_full,
                 const HomotopyConfig& cfg, double* margin_out = nullptr) {
  if (!(phi_full.minCoeff() > 1.0 + cfg.delta_phi)) return false;
  SupportFunction sf{ScalarField{&g, phi_full}, true};
  const double margin = hconvexity_margin(sf);
  if (margin_out) *margin_out = margin;
  return margin > cfg.delta_A;
}

}  // namespace

NewtonResult newton_solve(const SupportFunction& phi0, const ProblemSpec& spec,
                          double t, const HomotopyConfig& cfg) {
  const SphereGrid& g = *spec.grid;
  NewtonResult out;
  // snap onto the even subspace; the expansion is exactly even
  Eigen::VectorXd phi_red = restrict_even(g, phi0.phi.v);
  SupportFunction phi{ScalarField{&g, expand_even(g, phi_red)}, true};

  if (!barriers_ok(g, phi.phi.v, cfg)) {
    out.status = NewtonStatus::barrier_violation;
    out.phi = phi;
    return out;
  }

  Eigen::VectorXd R = residual(phi, spec, t).v;
  double r = R.cwiseAbs().maxCoeff();
  out.residual_history.push_back(r);

  for (int iter = 0; iter < cfg.newton_max_iter; ++iter) {
    if (r <= cfg.newton_tol) {
      out.status = NewtonStatus::ok;
      out.phi = phi;
      out.residual_sup = r;
      out.iterations = iter;
      return out;
    }
    const SpMat Jred = fold_even(g, assemble_jacobian(phi, spec, t));
    Eigen::SparseLU<SpMat> lu(Jred);
    if (lu.info() != Eigen::Success) {
      out.status = NewtonStatus::linear_solve_failure;
      out.phi = phi;
      out.residual_sup = r;
      out.iterations = iter;
      return out;
    }
    const Eigen::VectorXd dx = lu.solve(-restrict_even(g, R));

    double alpha = 1.0;
    bool accepted = false, any_barrier_pass = false;
    Eigen::VectorXd cand_red, cand_full, Rc;
    double rc = 0.0;
    for (int bt = 0; bt < cfg.max_backtracks; ++bt) {
      cand_red = phi_red + alpha * dx;
      cand_full = expand_even(g, cand_red);
      if (!barriers_ok(g, cand_full, cfg)) {
        alpha *= 0.5;
        continue;
      }
      any_barrier_pass = true;
      SupportFunction cand{ScalarField{&g, cand_full}, true};
      Rc = residual(cand, spec, t).v;
      rc = Rc.cwiseAbs().maxCoeff();
      if (rc < (1.0 - 1e-4 * alpha) * r) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      out.status = any_barrier_pass ? NewtonStatus::line_search_failure
                                    : NewtonStatus::barrier_violation;
      out.phi = phi;
      out.residual_sup = r;
      out.iterations = iter;
      return out;
    }
    phi_red = cand_red;
    phi = SupportFunction{ScalarField{&g, cand_full}, true};
    R = Rc;
    r = rc;
    out.residual_history.push_back(r);
  }
  if (r <= cfg.newton_tol) {
    out.status = NewtonStatus::ok;
  } else {
    out.status = NewtonStatus::max_iterations;
  }
  out.phi = phi;
  out.residual_sup = r;
  out.iterations = cfg.newton_max_iter;
  return out;
}

SolveReport continuation_solve(const ProblemSpec& spec,
                               const HomotopyConfig& cfg) {
  const SphereGrid& g = *spec.grid;
  const int n = g.dim();
  SolveReport rep;

  const assumptions::AssumptionReport arep =
      assumptions::check_assumption(spec.f, spec.p, spec.k);
  rep.assumption_pass = arep.pass;  // warn-only: the solver may still succeed
  rep.assumption_case = arep.case_id;

  const double gamma0 = f0_constant(spec.f, spec.p, spec.k, n);
  const double c = constant_solution(gamma0, spec.p, spec.k, n);
  SupportFunction cur{g.make_field(c), true};

  double t_cur = 0.0;
  {
    NewtonResult nr = newton_solve(cur, spec, 0.0, cfg);
    if (nr.status != NewtonStatus::ok) {
      rep.status = std::string("start_failure: ") + to_string(nr.status);
      rep.phi = nr.phi;
      rep.residual_sup = nr.residual_sup;
      return rep;
    }
    cur = nr.phi;
    rep.t_schedule.push_back(0.0);
    rep.residual_history.push_back(nr.residual_sup);
    rep.margin_history.push_back(hconvexity_margin(cur));
  }

  bool have_prev = false;
  Eigen::VectorXd prev_red;
  double t_prev = 0.0;
  double dt = cfg.t_init;

  while (t_cur < 1.0) {
    const double t_next = std::min(1.0, t_cur + dt);
    // secant predictor from the last two accepted states
    Eigen::VectorXd pred_red = restrict_even(g, cur.phi.v);
    if (have_prev && t_cur > t_prev) {
      const double s = (t_next - t_cur) / (t_cur - t_prev);
      Eigen::VectorXd extrap = pred_red + s * (pred_red - prev_red);
      if (barriers_ok(g, expand_even(g, extrap), cfg)) pred_red = extrap;
    }
    SupportFunction pred{ScalarField{&g, expand_even(g, pred_red)}, true};
    NewtonResult nr = newton_solve(pred, spec, t_next, cfg);
    if (nr.status == NewtonStatus::ok) {
      prev_red = restrict_even(g, cur.phi.v);
      t_prev = t_cur;
      have_prev = true;
      cur = nr.phi;
      t_cur = t_next;
      rep.t_schedule.push_back(t_cur);
      rep.residual_history.push_back(nr.residual_sup);
      rep.margin_history.push_back(hconvexity_margin(cur));
      dt = std::min(cfg.grow * dt, cfg.t_max);
    } else {
      dt *= 0.5;
      if (dt < cfg.t_min) {
        rep.status = std::string("step_underflow at t = ") +
                     std::to_string(t_next) + " (" + to_string(nr.status) + ")";
        rep.phi = cur;
        rep.residual_sup = rep.residual_history.back();
        rep.margin = rep.margin_history.back();
        return rep;
      }
    }
  }

  rep.phi = cur;
  rep.residual_sup = rep.residual_history.back();
  rep.margin = rep.margin_history.back();
  const double res_tol =
      std::max(10.0 * cfg.newton_tol, 1e-10 * (1.0 + spec.f.v.maxCoeff()));
  rep.certificate = apriori::certify(cur, spec.f, spec.p, spec.k, res_tol);
  rep.converged =
      rep.residual_sup <= cfg.newton_tol && rep.margin > cfg.delta_A;
  rep.status = rep.converged ? "converged" : "finished_without_convergence";
  return rep;
}

}  // namespace horocm::solver
