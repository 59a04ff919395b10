#pragma once

#include "prham/fields.hpp"

namespace prham {

class FlowDivergenceError : public std::runtime_error {
public:
  explicit FlowDivergenceError(const std::string& what) : std::runtime_error(what) {}
};

/// Poisson bivector pi = p * reference bivector (d1 ^ d2 on the torus, the
/// inverse round area form on the sphere), with the anchor convention
/// pi#(w) = pi(w, .).  In frame components: pi#(w) = (-p w2, p w1).
class PoissonStructure {
public:
  PoissonStructure(BackendPtr b, ScalarField density);
  static PoissonStructure symplectic(BackendPtr b);

  const BackendPtr& backend() const { return b_; }
  const ScalarField& density() const { return p_; }
  /// density values on the quadrature grid (cached)
  const Eigen::VectorXd& density_values() const { return pvals_; }

private:
  BackendPtr b_;
  ScalarField p_;
  Eigen::VectorXd pvals_;
};

VectorField anchor(const PoissonStructure& pi, const OneForm& w);
ScalarField poisson_bracket(const PoissonStructure& pi, const ScalarField& f,
                            const ScalarField& g);

/// Koszul bracket [a,b]_pi = L_{pi#a} b - L_{pi#b} a - d(pi(a,b)), evaluated
/// with extended-truncation intermediates and re-truncated once at the end.
OneForm koszul_bracket(const PoissonStructure& pi, const OneForm& a, const OneForm& b);

/// Reusable evaluator of b -> [a, b]_pi with the a-side data precomputed.
/// apply_ext works on extended packed forms without the final projection.
class KoszulOp {
public:
  KoszulOp(const PoissonStructure& pi, const OneForm& a);
  Eigen::VectorXd apply_ext(const Eigen::VectorXd& bM) const;
  OneForm apply(const OneForm& b) const;
  const BackendPtr& backend() const { return b_; }

private:
  BackendPtr b_;
  Eigen::VectorXd pvals_;
  Eigen::VectorXd aM_;
  Grid2 va_, xa_;
  Eigen::VectorXd dens_da_;
};

/// Dense matrix of b -> [a, b]_pi on packed truncated form coefficients.
Eigen::MatrixXd koszul_matrix(const PoissonStructure& pi, const OneForm& a);

/// Fiberwise-linear cotangent flow: dense matrix of b0 -> b(t) where
/// db/dt = [a, b]_pi, integrated by fixed-step RK4 in coefficient space.
struct FlowOperator {
  BackendPtr backend;
  double time = 0.0;
  int steps = 0;
  Eigen::MatrixXd matrix;

  OneForm apply(const OneForm& b) const {
    return OneForm(backend, matrix * b.coeffs());
  }
};

OneForm flow_oneform(const PoissonStructure& pi, const OneForm& a, const OneForm& b0, double t,
                     int steps);
FlowOperator flow_operator(const PoissonStructure& pi, const OneForm& a, double t, int steps);

/// Matrix of `steps` fixed-step RK4 steps for dy/dt = a y (one-step degree-4
/// polynomial raised to the step count by binary powering).
Eigen::MatrixXd rk4_exponential(const Eigen::MatrixXd& a, double t, int steps);

/// Leibniz extension of [a, .]_pi to 2-forms; in dimension two it reduces to
/// L_{pi#a} w + 2 p dens(da) w with dens the density of the exterior
/// derivative of the generator.
TwoForm koszul_bracket2(const PoissonStructure& pi, const OneForm& a, const TwoForm& w);
TwoForm flow_twoform(const PoissonStructure& pi, const OneForm& a, const TwoForm& w0, double t,
                     int steps);

/// RK4 local-error estimate for the flow generated by a: distance in H^1
/// between a probe advanced with `steps` and with `2*steps` substeps.
double flow_tolerance_estimate(const PoissonStructure& pi, const OneForm& a, double t, int steps,
                               const OneForm& probe);

}  // namespace prham
