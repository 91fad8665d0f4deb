#pragma once

#include "horocm/horo_geometry.hpp"
#include "horocm/sphere_grid.hpp"

// Built-in data families used by the CLI and the verification suites:
// constant data, the admissible family (h^{-1/k} + C)^{-k} built from an even
// zonal profile, and manufactured solutions with their reverse-engineered
// right-hand sides.

namespace horocm::families {

// Zonal second-harmonic profile (3 (x.e)^2 - 1)/2 with e the last axis.
ScalarField zonal_p2(const SphereGrid& grid);

// f = (h^{-1/k} + C)^{-k} with h = base + amp * zonal_p2^2.
ScalarField admissible(const SphereGrid& grid, double base, double amp, int k,
                       double C);

struct Manufactured {
  SupportFunction phi_star;
  ScalarField f;
};

// phi* = c + eps * zonal_p2, projected even. With analytic = true the datum
// f = sigma_k(A[phi*]) phi*^{k-p} is evaluated in closed form from the
// eigenvalues of A[phi*] (so the discrete solution differs from phi* by
// discretization error only); with analytic = false, f is computed from the
// discrete tensor and phi* is the exact discrete solution.
Manufactured manufactured_zonal(const SphereGrid& grid, double c, double eps,
                                int k, double p, bool analytic = true);

}  // namespace horocm::families
