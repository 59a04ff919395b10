#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

namespace prham {

class NotSemisimpleError : public std::runtime_error {
public:
  explicit NotSemisimpleError(const std::string& what) : std::runtime_error(what) {}
};

/// Finite-dimensional real Lie algebra given by dense structure constants
/// c[i][j][k] with [e_i, e_j] = sum_k c_ijk e_k.  Desk scale only (dim <= 16).
class LieAlgebra {
public:
  LieAlgebra(int dim, std::vector<double> c);

  static LieAlgebra so3();
  static LieAlgebra abelian(int dim);

  int dim() const { return dim_; }
  double c(int i, int j, int k) const { return c_[(std::size_t(i) * dim_ + j) * dim_ + k]; }

  /// ad-matrix of e_i: column a holds [e_i, e_a].
  Eigen::MatrixXd ad(int i) const;

  Eigen::VectorXd bracket(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;

  /// Max-norm of the worst cyclic Jacobi sum over basis triples.
  double jacobi_defect() const;

  /// Max-norm antisymmetry violation of the structure constants.
  double antisymmetry_defect() const;

  const std::vector<double>& constants() const { return c_; }

private:
  int dim_;
  std::vector<double> c_;
};

/// Killing form data: B_ij = sum_{k,l} c_ikl c_jlk, the B-dual basis and a
/// deterministic semisimplicity gate on |det B|.
struct KillingData {
  Eigen::MatrixXd killing;
  Eigen::MatrixXd dual_basis;  // column a holds the coordinates of e^a
  double det;
  bool semisimple;
};

/// Computes Killing data; throws NotSemisimpleError when |det B| <= 1e-9 * dim.
KillingData casimir_data(const LieAlgebra& a);

/// Lie algebra with a cobracket delta: g -> Lambda^2 g, stored as d[i][j][k]
/// (antisymmetric in j,k) with delta(e_i) = sum_{j<k} d_ijk e_j ^ e_k.
class LieBialgebra {
public:
  LieBialgebra(LieAlgebra base, std::vector<double> d);

  /// Trivial cobracket (delta = 0).
  static LieBialgebra trivial(LieAlgebra base);
  /// Coboundary cobracket delta(X) = ad_X(r) for r in Lambda^2 g given as an
  /// antisymmetric matrix.
  static LieBialgebra coboundary(LieAlgebra base, const Eigen::MatrixXd& r);

  const LieAlgebra& base() const { return base_; }
  int dim() const { return base_.dim(); }
  double d(int i, int j, int k) const { return d_[(std::size_t(i) * dim() + j) * dim() + k]; }
  bool trivial_cobracket() const;

  /// delta(x) for a coefficient vector x, as an antisymmetric matrix.
  Eigen::MatrixXd cobracket(const Eigen::VectorXd& x) const;

  /// Max-norm defect of the 1-cocycle condition
  ///   delta([e_i,e_j]) - ad_i.delta(e_j) + ad_j.delta(e_i) = 0.
  double cocycle_defect() const;

  /// Algebra on g* with structure constants (c*)^ij_k = d[k][i][j].
  LieAlgebra dual_bracket() const;

  const std::vector<double>& cobracket_constants() const { return d_; }

private:
  LieAlgebra base_;
  std::vector<double> d_;
};

}  // namespace prham
