#include "horocm/sphere_grid.hpp"

#include <cmath>
#include <stdexcept>

namespace horocm {

int TensorField::pack_index(int n, int a, int b) {
  // (a,b), a <= b, lexicographic
  return a * n - a * (a - 1) / 2 + (b - a);
}

Eigen::MatrixXd TensorField::node(Eigen::Index i) const {
  Eigen::MatrixXd M(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      M(a, b) = comps(i, pack_index(n, a, b));
      M(b, a) = M(a, b);
    }
  return M;
}

SphereGrid::SphereGrid(int n, int resolution) : n_(n), res_(resolution) {
  if (n != 2 && n != 3)
    throw std::invalid_argument("SphereGrid: only n = 2 and n = 3 supported");
  if (resolution < 8 || resolution % 2 != 0)
    throw std::invalid_argument("SphereGrid: resolution must be even and >= 8");
  if (n == 3 && resolution > 24)
    throw std::invalid_argument("SphereGrid: n = 3 supported up to resolution 24");
  if (n == 2)
    build_s2();
  else
    build_s3();

  even_index_.assign(node_count(), -1);
  for (Eigen::Index i = 0; i < node_count(); ++i) {
    if (i < antipode_[i]) {
      even_index_[i] = static_cast<Eigen::Index>(even_reps_.size());
      even_reps_.push_back(i);
    }
  }
  for (Eigen::Index i = 0; i < node_count(); ++i)
    if (even_index_[i] < 0) even_index_[i] = even_index_[antipode_[i]];

  build_ops();
}

void SphereGrid::build_s2() {
  const int nt = res_, np = 2 * res_;
  const double dt = M_PI / nt, dp = 2.0 * M_PI / np;
  const Eigen::Index N = static_cast<Eigen::Index>(nt) * np;
  nodes_.resize(N, 3);
  angles_.resize(N, 2);
  weights_.resize(N);
  antipode_.resize(N);
  frames_.assign(2, Eigen::MatrixXd(N, 3));

  auto id = [np](int i, int j) { return static_cast<Eigen::Index>(i) * np + j; };

  for (int i = 0; i < nt; ++i) {
    const double th = (i + 0.5) * dt;
    for (int j = 0; j < np; ++j) {
      const Eigen::Index k = id(i, j);
      const double ph = j * dp;
      angles_(k, 0) = th;
      angles_(k, 1) = ph;
      antipode_[k] = id(nt - 1 - i, (j + np / 2) % np);
      const double ct = std::cos(th), st = std::sin(th);
      const double cp = std::cos(ph), sp = std::sin(ph);
      frames_[0].row(k) << ct * cp, ct * sp, -st;
      frames_[1].row(k) << -sp, cp, 0.0;
    }
  }
  // Mirror-construct the southern half so pairing is exact by construction.
  for (int i = 0; i < nt / 2; ++i) {
    const double th = (i + 0.5) * dt;
    const double w = (std::cos(th - 0.5 * dt) - std::cos(th + 0.5 * dt)) * dp;
    for (int j = 0; j < np; ++j) {
      const Eigen::Index k = id(i, j);
      const double ph = j * dp;
      nodes_.row(k) << std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph),
          std::cos(th);
      nodes_.row(antipode_[k]) = -nodes_.row(k);
      weights_[k] = w;
      weights_[antipode_[k]] = w;
    }
  }
  dims_ = {nt, np};
}

void SphereGrid::build_s3() {
  const int nc = res_, nt = res_, np = 2 * res_;
  const double dc = M_PI / nc, dt = M_PI / nt, dp = 2.0 * M_PI / np;
  const Eigen::Index N = static_cast<Eigen::Index>(nc) * nt * np;
  nodes_.resize(N, 4);
  angles_.resize(N, 3);
  weights_.resize(N);
  antipode_.resize(N);
  frames_.assign(3, Eigen::MatrixXd(N, 4));

  auto id = [nt, np](int i, int j, int l) {
    return (static_cast<Eigen::Index>(i) * nt + j) * np + l;
  };
  // cell-exact weights: integral of sin^2 over a chi cell
  auto Fc = [](double c) { return 0.5 * (c - std::sin(c) * std::cos(c)); };

  for (int i = 0; i < nc; ++i) {
    const double ch = (i + 0.5) * dc;
    for (int j = 0; j < nt; ++j) {
      const double th = (j + 0.5) * dt;
      for (int l = 0; l < np; ++l) {
        const Eigen::Index k = id(i, j, l);
        const double ph = l * dp;
        angles_(k, 0) = ch;
        angles_(k, 1) = th;
        angles_(k, 2) = ph;
        antipode_[k] = id(nc - 1 - i, nt - 1 - j, (l + np / 2) % np);
        const double cc = std::cos(ch), sc = std::sin(ch);
        const double ct = std::cos(th), st = std::sin(th);
        const double cp = std::cos(ph), sp = std::sin(ph);
        frames_[0].row(k) << cc * st * cp, cc * st * sp, cc * ct, -sc;
        frames_[1].row(k) << ct * cp, ct * sp, -st, 0.0;
        frames_[2].row(k) << -sp, cp, 0.0, 0.0;
      }
    }
  }
  for (int i = 0; i < nc / 2; ++i) {
    const double ch = (i + 0.5) * dc;
    const double wc = Fc(ch + 0.5 * dc) - Fc(ch - 0.5 * dc);
    for (int j = 0; j < nt; ++j) {
      const double th = (j + 0.5) * dt;
      const double wt = std::cos(th - 0.5 * dt) - std::cos(th + 0.5 * dt);
      for (int l = 0; l < np; ++l) {
        const Eigen::Index k = id(i, j, l);
        const double ph = l * dp;
        const double sc = std::sin(ch), st = std::sin(th);
        nodes_.row(k) << sc * st * std::cos(ph), sc * st * std::sin(ph),
            sc * std::cos(th), std::cos(ch);
        nodes_.row(antipode_[k]) = -nodes_.row(k);
        weights_[k] = wc * wt * dp;
        weights_[antipode_[k]] = weights_[k];
      }
    }
  }
  dims_ = {nc, nt, np};
}

Eigen::Index SphereGrid::neighbor(int axis, Eigen::Index node, int offset) const {
  if (n_ == 2) {
    const int np = dims_[1];
    int i = static_cast<int>(node / np), j = static_cast<int>(node % np);
    if (axis == 0) {
      int ii = i + offset;
      if (ii < 0) {
        ii = -1 - ii;
        j = (j + np / 2) % np;
      } else if (ii >= dims_[0]) {
        ii = 2 * dims_[0] - 1 - ii;
        j = (j + np / 2) % np;
      }
      i = ii;
    } else {
      j = ((j + offset) % np + np) % np;
    }
    return static_cast<Eigen::Index>(i) * np + j;
  }
  const int nt = dims_[1], np = dims_[2];
  int l = static_cast<int>(node % np);
  int j = static_cast<int>((node / np) % nt);
  int i = static_cast<int>(node / (static_cast<Eigen::Index>(nt) * np));
  if (axis == 0) {
    int ii = i + offset;
    if (ii < 0 || ii >= dims_[0]) {
      ii = (ii < 0) ? -1 - ii : 2 * dims_[0] - 1 - ii;
      j = nt - 1 - j;
      l = (l + np / 2) % np;
    }
    i = ii;
  } else if (axis == 1) {
    int jj = j + offset;
    if (jj < 0 || jj >= nt) {
      jj = (jj < 0) ? -1 - jj : 2 * nt - 1 - jj;
      l = (l + np / 2) % np;
    }
    j = jj;
  } else {
    l = ((l + offset) % np + np) % np;
  }
  return (static_cast<Eigen::Index>(i) * nt + j) * np + l;
}

void SphereGrid::build_ops() {
  const Eigen::Index N = node_count();
  const int naxes = n_;
  // 4th-order centered stencils on the 5-point window
  const double c1[5] = {1.0 / 12, -8.0 / 12, 0.0, 8.0 / 12, -1.0 / 12};
  const double c2[5] = {-1.0 / 12, 16.0 / 12, -30.0 / 12, 16.0 / 12, -1.0 / 12};

  d1_.assign(naxes, SpMat(N, N));
  d2_.assign(naxes, SpMat(N, N));
  for (int ax = 0; ax < naxes; ++ax) {
    const double h =
        (n_ == 2) ? ((ax == 0) ? M_PI / dims_[0] : 2.0 * M_PI / dims_[1])
                  : ((ax == 2) ? 2.0 * M_PI / dims_[2] : M_PI / dims_[ax]);
    std::vector<Eigen::Triplet<double>> t1, t2;
    t1.reserve(5 * N);
    t2.reserve(5 * N);
    for (Eigen::Index k = 0; k < N; ++k)
      for (int s = -2; s <= 2; ++s) {
        const Eigen::Index m = neighbor(ax, k, s);
        if (c1[s + 2] != 0.0) t1.emplace_back(k, m, c1[s + 2] / h);
        t2.emplace_back(k, m, c2[s + 2] / (h * h));
      }
    d1_[ax].setFromTriplets(t1.begin(), t1.end());
    d2_[ax].setFromTriplets(t2.begin(), t2.end());
  }

  // Mixed chart derivatives: apply the lower axis first. The pole
  // continuation rules are exact for scalars and for derivatives along the
  // axes that the rule does not reflect, which this ordering respects.
  auto mixed = [this](int a, int b) { return SpMat(d1_[b] * d1_[a]); };

  const int npack = n_ * (n_ + 1) / 2;
  hess_ops_.assign(npack, SpMat());
  grad_ops_.assign(naxes, SpMat());
  auto pk = [this](int a, int b) { return TensorField::pack_index(n_, a, b); };

  if (n_ == 2) {
    Eigen::VectorXd st(N), ct(N);
    for (Eigen::Index k = 0; k < N; ++k) {
      st[k] = std::sin(angles_(k, 0));
      ct[k] = std::cos(angles_(k, 0));
    }
    const Eigen::VectorXd inv_st = st.cwiseInverse();
    const Eigen::VectorXd cot = ct.cwiseQuotient(st);

    grad_ops_[0] = d1_[0];
    grad_ops_[1] = inv_st.asDiagonal() * d1_[1];

    hess_ops_[pk(0, 0)] = d2_[0];
    hess_ops_[pk(0, 1)] =
        inv_st.asDiagonal() * SpMat(mixed(0, 1) - SpMat(cot.asDiagonal() * d1_[1]));
    hess_ops_[pk(1, 1)] =
        SpMat(inv_st.cwiseProduct(inv_st).asDiagonal() * d2_[1]) +
        SpMat(cot.asDiagonal() * d1_[0]);
  } else {
    Eigen::VectorXd sc(N), cc(N), st(N), ct(N);
    for (Eigen::Index k = 0; k < N; ++k) {
      sc[k] = std::sin(angles_(k, 0));
      cc[k] = std::cos(angles_(k, 0));
      st[k] = std::sin(angles_(k, 1));
      ct[k] = std::cos(angles_(k, 1));
    }
    const Eigen::VectorXd inv_sc = sc.cwiseInverse();
    const Eigen::VectorXd inv_st = st.cwiseInverse();
    const Eigen::VectorXd cotc = cc.cwiseQuotient(sc);
    const Eigen::VectorXd cott = ct.cwiseQuotient(st);
    const Eigen::VectorXd inv_sc2 = inv_sc.cwiseProduct(inv_sc);
    const Eigen::VectorXd inv_scst = inv_sc.cwiseProduct(inv_st);

    grad_ops_[0] = d1_[0];
    grad_ops_[1] = inv_sc.asDiagonal() * d1_[1];
    grad_ops_[2] = inv_scst.asDiagonal() * d1_[2];

    hess_ops_[pk(0, 0)] = d2_[0];
    hess_ops_[pk(0, 1)] =
        inv_sc.asDiagonal() * SpMat(mixed(0, 1) - SpMat(cotc.asDiagonal() * d1_[1]));
    hess_ops_[pk(0, 2)] =
        inv_scst.asDiagonal() * SpMat(mixed(0, 2) - SpMat(cotc.asDiagonal() * d1_[2]));
    hess_ops_[pk(1, 1)] =
        inv_sc2.asDiagonal() *
        SpMat(d2_[1] + SpMat(sc.cwiseProduct(cc).asDiagonal() * d1_[0]));
    hess_ops_[pk(1, 2)] =
        inv_sc2.cwiseProduct(inv_st).asDiagonal() *
        SpMat(mixed(1, 2) - SpMat(cott.asDiagonal() * d1_[2]));
    hess_ops_[pk(2, 2)] =
        inv_sc2.cwiseProduct(inv_st).cwiseProduct(inv_st).asDiagonal() *
        SpMat(d2_[2] +
              SpMat(sc.cwiseProduct(cc).cwiseProduct(st).cwiseProduct(st).asDiagonal() *
                    d1_[0]) +
              SpMat(st.cwiseProduct(ct).asDiagonal() * d1_[1]));
  }
  lap_op_ = hess_ops_[pk(0, 0)];
  for (int a = 1; a < n_; ++a) lap_op_ += hess_ops_[pk(a, a)];
  for (auto& m : d1_) m.makeCompressed();
  for (auto& m : d2_) m.makeCompressed();
  for (auto& m : grad_ops_) m.makeCompressed();
  for (auto& m : hess_ops_) m.makeCompressed();
  lap_op_.makeCompressed();
}

ScalarField SphereGrid::make_field(double value) const {
  return ScalarField{this, Eigen::VectorXd::Constant(node_count(), value)};
}

void SphereGrid::require_same_grid(const ScalarField& f, const char* who) const {
  if (f.grid != this || f.v.size() != node_count())
    throw std::invalid_argument(std::string(who) + ": field/grid mismatch");
}

VectorField SphereGrid::gradient(const ScalarField& f) const {
  require_same_grid(f, "gradient");
  VectorField g{this, Eigen::MatrixXd(node_count(), n_)};
  for (int a = 0; a < n_; ++a) g.comps.col(a) = grad_ops_[a] * f.v;
  return g;
}

TensorField SphereGrid::hessian(const ScalarField& f) const {
  require_same_grid(f, "hessian");
  TensorField H{this, n_, Eigen::MatrixXd(node_count(), n_ * (n_ + 1) / 2)};
  for (int a = 0; a < n_; ++a)
    for (int b = a; b < n_; ++b) {
      const int p = TensorField::pack_index(n_, a, b);
      H.comps.col(p) = hess_ops_[p] * f.v;
    }
  return H;
}

ScalarField SphereGrid::laplacian(const ScalarField& f) const {
  require_same_grid(f, "laplacian");
  const TensorField H = hessian(f);
  ScalarField out{this, Eigen::VectorXd::Zero(node_count())};
  for (int a = 0; a < n_; ++a)
    out.v += H.comps.col(TensorField::pack_index(n_, a, a));
  return out;
}

ScalarField SphereGrid::project_even(const ScalarField& f) const {
  require_same_grid(f, "project_even");
  ScalarField out{this, Eigen::VectorXd(node_count())};
  for (Eigen::Index i = 0; i < node_count(); ++i)
    out.v[i] = 0.5 * (f.v[i] + f.v[antipode_[i]]);
  return out;
}

double SphereGrid::integrate(const ScalarField& f) const {
  require_same_grid(f, "integrate");
  // Summed over antipodal pairs so integrate(f) == integrate(f o antipode)
  // holds bit-exactly.
  double acc = 0.0;
  for (Eigen::Index i : even_reps_)
    acc += weights_[i] * (f.v[i] + f.v[antipode_[i]]);
  return acc;
}

}  // namespace horocm
