#pragma once

#include <random>

#include "prham/backend.hpp"

namespace prham {

/// Truncated scalar field; packed real coefficients at the backend truncation.
class ScalarField {
public:
  ScalarField(BackendPtr b, Eigen::VectorXd coeffs);
  static ScalarField zero(BackendPtr b);
  static ScalarField constant(BackendPtr b, double value);

  const BackendPtr& backend() const { return b_; }
  const Eigen::VectorXd& coeffs() const { return c_; }
  Eigen::VectorXd& coeffs() { return c_; }
  double mean() const { return c_[0]; }

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(double s);
  friend ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
  friend ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
  friend ScalarField operator*(double s, ScalarField a) { return a *= s; }

private:
  BackendPtr b_;
  Eigen::VectorXd c_;
};

/// Truncated 1-form.  Torus: components (f, g) of f d.theta1 + g d.theta2.
/// Sphere: mean-free Hodge scalars (F, G) of dF + *dG.
class OneForm {
public:
  OneForm(BackendPtr b, Eigen::VectorXd coeffs);
  static OneForm zero(BackendPtr b);

  const BackendPtr& backend() const { return b_; }
  const Eigen::VectorXd& coeffs() const { return c_; }
  Eigen::VectorXd& coeffs() { return c_; }

  OneForm& operator+=(const OneForm& o);
  OneForm& operator-=(const OneForm& o);
  OneForm& operator*=(double s);
  friend OneForm operator+(OneForm a, const OneForm& b) { return a += b; }
  friend OneForm operator-(OneForm a, const OneForm& b) { return a -= b; }
  friend OneForm operator*(double s, OneForm a) { return a *= s; }

private:
  BackendPtr b_;
  Eigen::VectorXd c_;
};

/// Truncated 2-form stored as a scalar density against the reference 2-form.
class TwoForm {
public:
  TwoForm(BackendPtr b, Eigen::VectorXd density_coeffs);
  static TwoForm zero(BackendPtr b);

  const BackendPtr& backend() const { return b_; }
  ScalarField density() const { return ScalarField(b_, c_); }
  const Eigen::VectorXd& coeffs() const { return c_; }

  TwoForm& operator-=(const TwoForm& o);
  TwoForm& operator+=(const TwoForm& o);
  TwoForm& operator*=(double s);
  friend TwoForm operator+(TwoForm a, const TwoForm& b) { return a += b; }
  friend TwoForm operator-(TwoForm a, const TwoForm& b) { return a -= b; }
  friend TwoForm operator*(double s, TwoForm a) { return a *= s; }

private:
  BackendPtr b_;
  Eigen::VectorXd c_;
};

/// Tangent vector field sampled on the quadrature grid (orthonormal frame
/// components).  Sphere fields are tangent by construction.
class VectorField {
public:
  VectorField(BackendPtr b, Grid2 frame_values);
  static VectorField zero(BackendPtr b);

  const BackendPtr& backend() const { return b_; }
  const Grid2& values() const { return v_; }
  Grid2& values() { return v_; }

  /// Cartesian R^3 components at the grid nodes (sphere only).
  Eigen::MatrixXd cartesian_values() const;

  VectorField& operator-=(const VectorField& o);
  VectorField& operator+=(const VectorField& o);
  friend VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
  friend VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }

private:
  BackendPtr b_;
  Grid2 v_;
};

// exterior calculus
OneForm d(const ScalarField& f);
TwoForm d(const OneForm& w);
TwoForm wedge11(const OneForm& a, const OneForm& b);
ScalarField contract(const VectorField& x, const OneForm& w);
OneForm contract(const VectorField& x, const TwoForm& w);
OneForm lie_derivative(const VectorField& x, const OneForm& w);

// pointwise products (dealiased, re-truncated)
ScalarField pointwise(const ScalarField& a, const ScalarField& b);
OneForm pointwise(const ScalarField& a, const OneForm& w);

// H^k spectral norms, sqrt(sum (1+lambda)^k |c|^2)
double sobolev_norm(const ScalarField& f, int k);
double sobolev_norm(const OneForm& w, int k);
double sobolev_norm(const TwoForm& w, int k);

// hard spectral cutoff: zero all modes with degree > t
ScalarField smooth(const ScalarField& f, double t);
OneForm smooth(const OneForm& w, double t);

// grid-quadrature L2 norm of a vector field
double l2_norm(const VectorField& x);

VectorField vf_bracket(const VectorField& x, const VectorField& y);

// seeded band-limited random fields (coefficients uniform in [-1,1] up to
// max_degree, zero beyond)
ScalarField random_scalar(BackendPtr b, double max_degree, std::mt19937_64& rng);
OneForm random_oneform(BackendPtr b, double max_degree, std::mt19937_64& rng);

}  // namespace prham
