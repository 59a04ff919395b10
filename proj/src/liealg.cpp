#include "prham/liealg.hpp"

#include <cmath>

namespace prham {

namespace {
constexpr int kMaxDim = 16;

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }
}  // namespace

LieAlgebra::LieAlgebra(int dim, std::vector<double> c) : dim_(dim), c_(std::move(c)) {
  if (dim <= 0 || dim > kMaxDim) throw std::invalid_argument("LieAlgebra: dim out of range");
  if (c_.size() != std::size_t(dim) * dim * dim)
    throw std::invalid_argument("LieAlgebra: structure constant array has wrong size");
}

LieAlgebra LieAlgebra::so3() {
  std::vector<double> c(27, 0.0);
  auto set = [&](int i, int j, int k, double v) { c[(std::size_t(i) * 3 + j) * 3 + k] = v; };
  // epsilon_ijk
  set(0, 1, 2, 1.0);
  set(1, 0, 2, -1.0);
  set(1, 2, 0, 1.0);
  set(2, 1, 0, -1.0);
  set(2, 0, 1, 1.0);
  set(0, 2, 1, -1.0);
  return LieAlgebra(3, std::move(c));
}

LieAlgebra LieAlgebra::abelian(int dim) {
  return LieAlgebra(dim, std::vector<double>(std::size_t(dim) * dim * dim, 0.0));
}

Eigen::MatrixXd LieAlgebra::ad(int i) const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim_, dim_);
  for (int a = 0; a < dim_; ++a)
    for (int k = 0; k < dim_; ++k) m(k, a) = c(i, a, k);
  return m;
}

Eigen::VectorXd LieAlgebra::bracket(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
  if (x.size() != dim_ || y.size() != dim_)
    throw std::invalid_argument("LieAlgebra::bracket: dimension mismatch");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(dim_);
  for (int i = 0; i < dim_; ++i) {
    if (x[i] == 0.0) continue;
    for (int j = 0; j < dim_; ++j) {
      if (y[j] == 0.0) continue;
      for (int k = 0; k < dim_; ++k) out[k] += c(i, j, k) * x[i] * y[j];
    }
  }
  return out;
}

double LieAlgebra::jacobi_defect() const {
  double worst = 0.0;
  Eigen::VectorXd ei = Eigen::VectorXd::Zero(dim_), ej = ei, ek = ei;
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j)
      for (int k = 0; k < dim_; ++k) {
        ei.setZero();
        ej.setZero();
        ek.setZero();
        ei[i] = ej[j] = ek[k] = 1.0;
        Eigen::VectorXd s = bracket(bracket(ei, ej), ek) + bracket(bracket(ej, ek), ei) +
                            bracket(bracket(ek, ei), ej);
        worst = std::max(worst, s.cwiseAbs().maxCoeff());
      }
  return worst;
}

double LieAlgebra::antisymmetry_defect() const {
  double worst = 0.0;
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j)
      for (int k = 0; k < dim_; ++k) worst = std::max(worst, std::abs(c(i, j, k) + c(j, i, k)));
  return worst;
}

KillingData casimir_data(const LieAlgebra& a) {
  const int n = a.dim();
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) s += a.c(i, k, l) * a.c(j, l, k);
      b(i, j) = s;
    }
  KillingData kd;
  kd.killing = b;
  kd.det = b.determinant();
  kd.semisimple = std::abs(kd.det) > 1e-9 * n;
  if (!kd.semisimple) throw NotSemisimpleError("casimir_data: Killing form is singular, not semisimple");
  kd.dual_basis = b.inverse();
  return kd;
}

LieBialgebra::LieBialgebra(LieAlgebra base, std::vector<double> dd)
    : base_(std::move(base)), d_(std::move(dd)) {
  const int n = base_.dim();
  if (d_.size() != std::size_t(n) * n * n)
    throw std::invalid_argument("LieBialgebra: cobracket array has wrong size");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (std::abs(d(i, j, k) + d(i, k, j)) > 1e-14)
          throw std::invalid_argument("LieBialgebra: cobracket not antisymmetric in (j,k)");
}

LieBialgebra LieBialgebra::trivial(LieAlgebra base) {
  const int n = base.dim();
  return LieBialgebra(std::move(base), std::vector<double>(std::size_t(n) * n * n, 0.0));
}

LieBialgebra LieBialgebra::coboundary(LieAlgebra base, const Eigen::MatrixXd& r) {
  const int n = base.dim();
  if (r.rows() != n || r.cols() != n || max_abs(r + r.transpose()) > 1e-14)
    throw std::invalid_argument("LieBialgebra::coboundary: r must be an antisymmetric dim x dim matrix");
  std::vector<double> d(std::size_t(n) * n * n, 0.0);
  for (int i = 0; i < n; ++i) {
    Eigen::MatrixXd m = base.ad(i);
    Eigen::MatrixXd w = m * r + r * m.transpose();
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) d[(std::size_t(i) * n + j) * n + k] = w(j, k);
  }
  return LieBialgebra(std::move(base), std::move(d));
}

bool LieBialgebra::trivial_cobracket() const {
  for (double v : d_)
    if (v != 0.0) return false;
  return true;
}

Eigen::MatrixXd LieBialgebra::cobracket(const Eigen::VectorXd& x) const {
  const int n = dim();
  if (x.size() != n) throw std::invalid_argument("LieBialgebra::cobracket: dimension mismatch");
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    if (x[i] == 0.0) continue;
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) w(j, k) += x[i] * d(i, j, k);
  }
  return w;
}

double LieBialgebra::cocycle_defect() const {
  const int n = dim();
  std::vector<Eigen::MatrixXd> ads(n);
  std::vector<Eigen::MatrixXd> deltas(n);
  for (int i = 0; i < n; ++i) {
    ads[i] = base_.ad(i);
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e[i] = 1.0;
    deltas[i] = cobracket(e);
  }
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Eigen::MatrixXd lhs = Eigen::MatrixXd::Zero(n, n);
      for (int k = 0; k < n; ++k) lhs += base_.c(i, j, k) * deltas[k];
      Eigen::MatrixXd adi = ads[i] * deltas[j] + deltas[j] * ads[i].transpose();
      Eigen::MatrixXd adj = ads[j] * deltas[i] + deltas[i] * ads[j].transpose();
      worst = std::max(worst, max_abs(lhs - adi + adj));
    }
  return worst;
}

LieAlgebra LieBialgebra::dual_bracket() const {
  const int n = dim();
  std::vector<double> cs(std::size_t(n) * n * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) cs[(std::size_t(i) * n + j) * n + k] = d(k, i, j);
  return LieAlgebra(n, std::move(cs));
}

}  // namespace prham
