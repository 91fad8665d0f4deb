#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <vector>

// Discretization of S^n (n = 2 primary, n = 3 at coarse resolution) with
// covariant differential operators for the round metric, exact antipodal
// pairing and quadrature.
//
// Chart layout. Angular coordinates are cell-centered so no node sits on a
// coordinate pole; grids extend smoothly across the poles by the exact chart
// identities (e.g. f(-theta, phi) = f(theta, phi + pi)), which keeps every
// stencil centered. Nodes, weights and the antipodal involution are
// mirror-constructed, so x_{pair(i)} = -x_i and w_{pair(i)} = w_i hold
// bit-exactly.
//
//   n = 2: (theta, phi), theta_i = (i+1/2) pi/res, phi_j = j pi/res,
//          res x 2*res nodes.
//   n = 3: (chi, theta, phi) with x = (sin chi sin theta cos phi,
//          sin chi sin theta sin phi, sin chi cos theta, cos chi),
//          res x res x 2*res nodes.
//
// Derivatives are 4th-order centered finite differences in chart coordinates
// with the Christoffel correction applied analytically; tensor output is in
// the per-node orthonormal coordinate frame.

namespace horocm {

using SpMat = Eigen::SparseMatrix<double>;

class SphereGrid;

struct ScalarField {
  const SphereGrid* grid = nullptr;
  Eigen::VectorXd v;
};

// Orthonormal-frame components, one column per frame direction.
struct VectorField {
  const SphereGrid* grid = nullptr;
  Eigen::MatrixXd comps;  // N x n
};

// Symmetric 2-tensor in the per-node orthonormal frame, packed upper
// triangle: pairs (a,b) with a <= b in lexicographic order.
struct TensorField {
  const SphereGrid* grid = nullptr;
  int n = 0;
  Eigen::MatrixXd comps;  // N x n(n+1)/2

  static int pack_index(int n, int a, int b);
  Eigen::MatrixXd node(Eigen::Index i) const;  // unpack to n x n
  double at(Eigen::Index i, int a, int b) const {
    return comps(i, pack_index(n, std::min(a, b), std::max(a, b)));
  }
};

class SphereGrid {
 public:
  // n in {2,3}; resolution even and >= 8 (<= 24 per angle for n = 3).
  SphereGrid(int n, int resolution);

  SphereGrid(const SphereGrid&) = delete;
  SphereGrid& operator=(const SphereGrid&) = delete;

  int dim() const { return n_; }
  int resolution() const { return res_; }
  Eigen::Index node_count() const { return nodes_.rows(); }
  double mesh_width() const { return M_PI / res_; }

  const Eigen::MatrixXd& nodes() const { return nodes_; }      // N x (n+1)
  const Eigen::MatrixXd& angles() const { return angles_; }    // N x n
  const Eigen::VectorXd& weights() const { return weights_; }
  const std::vector<Eigen::Index>& antipode() const { return antipode_; }
  // Ambient components of the a-th orthonormal frame vector, N x (n+1).
  const Eigen::MatrixXd& frame(int a) const { return frames_[a]; }

  // Even (antipodally symmetric) reduction: one representative per pair.
  const std::vector<Eigen::Index>& even_reps() const { return even_reps_; }
  // node index -> position of its pair's representative in even_reps().
  const std::vector<Eigen::Index>& even_index() const { return even_index_; }

  ScalarField make_field(double value = 0.0) const;

  VectorField gradient(const ScalarField& f) const;
  TensorField hessian(const ScalarField& f) const;
  // Trace of hessian(); computed from the same tensor components.
  ScalarField laplacian(const ScalarField& f) const;
  ScalarField project_even(const ScalarField& f) const;
  double integrate(const ScalarField& f) const;

  // Operator forms, for Jacobian assembly and operator-level tests.
  const SpMat& grad_op(int a) const { return grad_ops_[a]; }
  const SpMat& hess_op(int a, int b) const {
    return hess_ops_[TensorField::pack_index(n_, std::min(a, b),
                                             std::max(a, b))];
  }
  const SpMat& laplacian_op() const { return lap_op_; }

  void require_same_grid(const ScalarField& f, const char* who) const;

 private:
  void build_s2();
  void build_s3();
  void build_ops();
  Eigen::Index neighbor(int axis, Eigen::Index node, int offset) const;

  int n_ = 0, res_ = 0;
  std::vector<int> dims_;  // nodes per chart axis
  Eigen::MatrixXd nodes_, angles_;
  Eigen::VectorXd weights_;
  std::vector<Eigen::Index> antipode_, even_reps_, even_index_;
  std::vector<Eigen::MatrixXd> frames_;
  std::vector<SpMat> d1_, d2_;           // per-axis chart derivatives
  std::vector<SpMat> grad_ops_, hess_ops_;
  SpMat lap_op_;
};

}  // namespace horocm
