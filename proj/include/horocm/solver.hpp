#pragma once

#include <string>
#include <vector>

#include "horocm/apriori.hpp"
#include "horocm/horo_geometry.hpp"
#include "horocm/sphere_grid.hpp"

// Discrete residual and Jacobian of sigma_k(A[phi]) = phi^{p-k} f_t, damped
// Newton in the even subspace, and predictor-corrector continuation in t
// along the interpolation family f_t from the explicit constant solution.

namespace horocm::solver {

struct ProblemSpec {
  const SphereGrid* grid = nullptr;
  int k = 1;
  double p = 0.0;
  ScalarField f;  // positive, even
};

ProblemSpec make_problem(const SphereGrid& grid, int k, double p, ScalarField f);

struct HomotopyConfig {
  double t_init = 0.2;
  double t_min = 1e-4;
  double t_max = 0.5;
  double newton_tol = 1e-10;   // residual sup-norm
  int newton_max_iter = 30;
  int max_backtracks = 40;
  double delta_A = 1e-10;      // h-convexity floor
  double delta_phi = 1e-8;     // floor on phi - 1
  double grow = 1.5;
};

enum class NewtonStatus {
  ok,
  line_search_failure,
  max_iterations,
  barrier_violation,
  linear_solve_failure,
};

const char* to_string(NewtonStatus s);

struct NewtonResult {
  NewtonStatus status = NewtonStatus::ok;
  SupportFunction phi;
  double residual_sup = 0.0;
  int iterations = 0;
  std::vector<double> residual_history;
};

struct SolveReport {
  bool converged = false;
  std::string status;
  SupportFunction phi;
  double residual_sup = 0.0;
  double margin = 0.0;
  std::vector<double> t_schedule;
  std::vector<double> residual_history;  // per accepted t-step
  std::vector<double> margin_history;
  apriori::BoundsCertificate certificate;
  bool assumption_pass = false;
  int assumption_case = 0;
};

// Constant datum of the homotopy at t = 0: max f for 0 <= p <= 2k (requires
// max f < C_n^k/2^k when p = 2k), gamma_p for p > 2k.
double f0_constant(const ScalarField& f, double p, int k, int n);

// Harmonic-type interpolation between f_0 and f; endpoints reproduce the
// inputs bit-for-bit.
ScalarField f_t(const ScalarField& f, double t, double p, int k);

// The unique even uniformly h-convex constant solution c > 1 of
// C_n^k ((c - 1/c)/2)^k = c^{p-k} gamma; closed forms at p = 0, p = k and
// p > 2k (gamma = gamma_p), scalar Newton/bisection otherwise.
double constant_solution(double gamma, double p, int k, int n);

// Pointwise residual sigma_k(A[phi]) - phi^{p-k} f_t.
ScalarField residual(const SupportFunction& phi, const ProblemSpec& spec,
                     double t);

// Frechet derivative of the residual at phi, assembled over all grid nodes.
SpMat assemble_jacobian(const SupportFunction& phi, const ProblemSpec& spec,
                        double t);

// Even-subspace reduction: fold full-grid rows/columns onto antipodal-pair
// representatives, and expand a reduced vector back to the grid.
SpMat fold_even(const SphereGrid& grid, const SpMat& J);
Eigen::VectorXd restrict_even(const SphereGrid& grid, const Eigen::VectorXd& full);
Eigen::VectorXd expand_even(const SphereGrid& grid, const Eigen::VectorXd& reduced);

// Coefficients of the linearized operator a(Lap + b) at a constant solution
// phi == c of the constant-datum problem.
struct LinearizationCoeffs {
  double a = 0.0;
  double b = 0.0;
};
LinearizationCoeffs constant_linearization_coeffs(double c, double p, int k, int n);

// Damped Newton with backtracking on the residual sup-norm; iterates stay in
// the even subspace and steps violating the phi or h-convexity barriers are
// rejected.
NewtonResult newton_solve(const SupportFunction& phi0, const ProblemSpec& spec,
                          double t, const HomotopyConfig& cfg);

SolveReport continuation_solve(const ProblemSpec& spec, const HomotopyConfig& cfg);

}  // namespace horocm::solver
