#pragma once

#include <string>
#include <vector>

#include "horocm/sphere_grid.hpp"

// Verifier for the six admissibility regimes of the prescribed function f,
// plus the generator of admissible test data f = (h^{-1/k} + C)^{-k}.
//
// Regimes by (p, k):
//   (1) p = 0        (2) 0 < p <= k/2   (3) k/2 < p < k
//   (4) k <= p < 2k  (5) p = 2k         (6) p > 2k
// Each regime requires a tensor expression in F = f^{-1/k} (cases 1-3) or
// F = f^{-1/p} (cases 4-6) to be positive semi-definite; cases 5 and 6 carry
// auxiliary scalar conditions (max f < C_n^k/2^k, min f <= gamma_p).

namespace horocm::assumptions {

struct AuxCheck {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  bool pass = true;
};

struct AssumptionReport {
  int case_id = 0;
  double margin = 0.0;  // min over nodes of lambda_min of the case tensor
  double tol = 0.0;
  std::vector<AuxCheck> aux;
  bool pass = false;
};

// Exactly one of the six regimes; throws for p < 0.
int classify_case(double p, int k);

// gamma_p = k^k (p-2k)^{(p-2k)/2} / p^{p/2} * C_n^k, defined for p > 2k.
double gamma_p(double p, int k, int n);

AssumptionReport check_assumption(const ScalarField& f, double p, int k);

// The admissible family f = (h^{-1/k} + C)^{-k} for h > 0 even, C >= 0.
ScalarField make_admissible_f(const ScalarField& h, int k, double C);

}  // namespace horocm::assumptions
