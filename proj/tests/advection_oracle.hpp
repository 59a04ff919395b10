#pragma once

#include <random>

#include "prham/poisson.hpp"

namespace prham::testing {

/// Independent cross-check for the closed-generator cotangent flow on the
/// torus: db/dt = [dK, b] transports b along pi#(dK), so b(1) is the
/// pullback of b(0) by the time-1 particle map.  Advects sample points with
/// their tangent maps and compares pointwise against the spectral flow.
inline double advection_disagreement(const BackendPtr& b, const PoissonStructure& pi,
                                     const ScalarField& k, const OneForm& beta0,
                                     const OneForm& beta1, int npoints, std::uint64_t seed) {
  auto e1 = VectorField::zero(b), e2 = VectorField::zero(b);
  e1.values().col(0).setOnes();
  e2.values().col(1).setOnes();
  auto dk = d(k);
  auto k1 = contract(e1, dk);
  auto k2 = contract(e2, dk);
  const Eigen::VectorXd k1e = b->extend_scalar(k1.coeffs());
  const Eigen::VectorXd k2e = b->extend_scalar(k2.coeffs());
  const Eigen::VectorXd dk1e = b->extend_form(d(k1).coeffs());
  const Eigen::VectorXd dk2e = b->extend_form(d(k2).coeffs());
  const Eigen::VectorXd b0e = b->extend_form(beta0.coeffs());
  const Eigen::VectorXd b1e = b->extend_form(beta1.coeffs());

  auto vel = [&](const Eigen::Vector2d& y) -> Eigen::Vector2d {
    return {-b->eval_scalar(k2e, y[0], y[1]), b->eval_scalar(k1e, y[0], y[1])};
  };
  auto dvel = [&](const Eigen::Vector2d& y) -> Eigen::Matrix2d {
    const Eigen::Vector2d g1 = b->eval_form(dk1e, y[0], y[1]);
    const Eigen::Vector2d g2 = b->eval_form(dk2e, y[0], y[1]);
    Eigen::Matrix2d m;
    m << -g2[0], -g2[1], g1[0], g1[1];
    return m;
  };

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 6.283185307179586);
  double worst = 0.0;
  for (int rep = 0; rep < npoints; ++rep) {
    Eigen::Vector2d y(u01(rng), u01(rng));
    const Eigen::Vector2d z0 = y;
    Eigen::Matrix2d jac = Eigen::Matrix2d::Identity();
    const int steps = 128;
    const double h = 1.0 / steps;
    for (int s = 0; s < steps; ++s) {
      const Eigen::Vector2d k1v = vel(y);
      const Eigen::Matrix2d k1j = dvel(y) * jac;
      const Eigen::Vector2d k2v = vel(y + 0.5 * h * k1v);
      const Eigen::Matrix2d k2j = dvel(y + 0.5 * h * k1v) * (jac + 0.5 * h * k1j);
      const Eigen::Vector2d k3v = vel(y + 0.5 * h * k2v);
      const Eigen::Matrix2d k3j = dvel(y + 0.5 * h * k2v) * (jac + 0.5 * h * k2j);
      const Eigen::Vector2d k4v = vel(y + h * k3v);
      const Eigen::Matrix2d k4j = dvel(y + h * k3v) * (jac + h * k3j);
      y += (h / 6.0) * (k1v + 2 * k2v + 2 * k3v + k4v);
      jac += (h / 6.0) * (k1j + 2 * k2j + 2 * k3j + k4j);
    }
    const Eigen::Vector2d pulled = jac.transpose() * b->eval_form(b0e, y[0], y[1]);
    const Eigen::Vector2d got = b->eval_form(b1e, z0[0], z0[1]);
    worst = std::max(worst, (pulled - got).cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace prham::testing
