#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "prham/poisson.hpp"

using namespace prham;
using namespace prham::testing;

namespace {
BackendPtr torus8() {
  static BackendPtr b = Backend::torus(8);
  return b;
}
BackendPtr sphere8() {
  static BackendPtr b = Backend::sphere(8);
  return b;
}
auto zero2 = [](double, double) { return 0.0; };
auto one2 = [](double, double) { return 1.0; };
}  // namespace

TEST_CASE("torus anchor of the symplectic structure") {
  auto b = torus8();
  auto pi = PoissonStructure::symplectic(b);
  auto dth1 = form_from_components(b, one2, zero2);
  auto dth2 = form_from_components(b, zero2, one2);

  auto x1 = anchor(pi, dth1);  // expect d2
  CHECK(l2_norm(x1 - vector_from_functions(b, zero2, one2)) < 1e-13);
  auto x2 = anchor(pi, dth2);  // expect -d1
  CHECK(l2_norm(x2 - vector_from_functions(b, [](double, double) { return -1.0; }, zero2)) <
        1e-13);
  CHECK(l2_norm(anchor(pi, OneForm::zero(b))) == 0.0);
}

TEST_CASE("sphere anchor generates rotations from coordinate hamiltonians") {
  auto b = sphere8();
  auto pi = PoissonStructure::symplectic(b);
  for (int i = 0; i < 3; ++i)
    CHECK(l2_norm(anchor(pi, d(coord_field(b, i))) - rotation_field(b, i)) < 1e-11);
}

TEST_CASE("poisson bracket identities") {
  auto b = torus8();
  auto pi = PoissonStructure::symplectic(b);
  auto c1 = field_from_function(b, [](double u, double) { return std::cos(u); });
  auto c2 = field_from_function(b, [](double, double v) { return std::cos(v); });
  auto expect =
      field_from_function(b, [](double u, double v) { return std::sin(u) * std::sin(v); });
  CHECK(sobolev_norm(poisson_bracket(pi, c1, c2) - expect, 0) < 1e-13);

  std::mt19937_64 rng(3);
  auto f = random_scalar(b, 4, rng);
  CHECK(sobolev_norm(poisson_bracket(pi, f, f), 0) < 1e-13);
  CHECK(sobolev_norm(poisson_bracket(pi, f, ScalarField::constant(b, 1.0)), 0) < 1e-14);
}

TEST_CASE("sphere coordinate brackets give the so(3) table") {
  auto b = sphere8();
  auto pi = PoissonStructure::symplectic(b);
  auto x1 = coord_field(b, 0), x2 = coord_field(b, 1), x3 = coord_field(b, 2);
  CHECK(sobolev_norm(poisson_bracket(pi, x1, x2) - x3, 0) < 1e-12);
  CHECK(sobolev_norm(poisson_bracket(pi, x2, x3) - x1, 0) < 1e-12);
  CHECK(sobolev_norm(poisson_bracket(pi, x3, x1) - x2, 0) < 1e-12);
}

TEST_CASE("koszul bracket basics") {
  auto b = torus8();
  auto pi = PoissonStructure::symplectic(b);
  auto dth1 = form_from_components(b, one2, zero2);
  auto dth2 = form_from_components(b, zero2, one2);
  CHECK(sobolev_norm(koszul_bracket(pi, dth1, dth2), 0) < 1e-13);

  auto c1 = field_from_function(b, [](double u, double) { return std::cos(u); });
  auto c2 = field_from_function(b, [](double, double v) { return std::cos(v); });
  auto lhs = koszul_bracket(pi, d(c1), d(c2));
  auto rhs = d(poisson_bracket(pi, c1, c2));
  CHECK(form_distance(lhs, rhs) < 1e-12);

  std::mt19937_64 rng(5);
  auto a = random_oneform(b, 3, rng);
  CHECK(sobolev_norm(koszul_bracket(pi, a, a), 0) < 1e-12);
}

TEST_CASE("exact forms identity on both backends") {
  std::mt19937_64 rng(7);
  for (auto b : {torus8(), sphere8()}) {
    auto pi = PoissonStructure::symplectic(b);
    auto f = random_scalar(b, 2, rng);
    auto g = random_scalar(b, 2, rng);
    auto lhs = koszul_bracket(pi, d(f), d(g));
    auto rhs = d(poisson_bracket(pi, f, g));
    CHECK(form_distance(lhs, rhs) < 1e-10);
  }
}

TEST_CASE("koszul bracket equals lie transport plus tensorial part") {
  // in dimension two: [a,b] = L_{pi#a} b + p dens(da) b
  std::mt19937_64 rng(11);
  for (auto b : {torus8(), sphere8()}) {
    auto pi = PoissonStructure::symplectic(b);
    auto a = random_oneform(b, 2, rng);
    auto w = random_oneform(b, 2, rng);
    auto direct = koszul_bracket(pi, a, w);
    auto via = lie_derivative(anchor(pi, a), w) +
               pointwise(pointwise(pi.density(), d(a).density()), w);
    CHECK(form_distance(direct, via) < 1e-10);
  }
}

TEST_CASE("anchor is a bracket homomorphism") {
  std::mt19937_64 rng(13);
  for (auto b : {torus8(), sphere8()}) {
    auto pi = PoissonStructure::symplectic(b);
    auto a = random_oneform(b, 2, rng);
    auto c = random_oneform(b, 2, rng);
    auto lhs = anchor(pi, koszul_bracket(pi, a, c));
    auto rhs = vf_bracket(anchor(pi, a), anchor(pi, c));
    const double bound =
        1e-8 * (1.0 + sobolev_norm(a, 3)) * (1.0 + sobolev_norm(c, 3));
    CHECK(l2_norm(lhs - rhs) <= bound);
  }
}

TEST_CASE("koszul jacobi cyclic sum") {
  std::mt19937_64 rng(17);
  for (auto b : {torus8(), sphere8()}) {
    auto pi = PoissonStructure::symplectic(b);
    auto a = random_oneform(b, 1, rng);
    auto c = random_oneform(b, 1, rng);
    auto e = random_oneform(b, 1, rng);
    auto cyc = koszul_bracket(pi, a, koszul_bracket(pi, c, e)) +
               koszul_bracket(pi, c, koszul_bracket(pi, e, a)) +
               koszul_bracket(pi, e, koszul_bracket(pi, a, c));
    CHECK(sobolev_norm(cyc, 0) < 1e-7);
  }
}

TEST_CASE("flow basics: fixed points, t=0, matrix consistency") {
  auto b = torus8();
  auto pi = PoissonStructure::symplectic(b);
  std::mt19937_64 rng(19);
  auto a = random_oneform(b, 2, rng);
  a *= 0.05 / sobolev_norm(a, 1);

  CHECK(form_distance(flow_oneform(pi, a, a, 1.0, 32), a) < 1e-9);  // [a,a]=0
  std::mt19937_64 rng2(23);
  auto w = random_oneform(b, 3, rng2);
  auto op0 = flow_operator(pi, a, 0.0, 1);
  CHECK((op0.matrix - Eigen::MatrixXd::Identity(b->form_dim(), b->form_dim()))
            .cwiseAbs()
            .maxCoeff() == 0.0);

  auto op = flow_operator(pi, a, 1.0, 32);
  CHECK(form_distance(op.apply(w), flow_oneform(pi, a, w, 1.0, 32)) < 1e-10);
}

TEST_CASE("flow group law and inverse") {
  auto b = sphere8();
  auto pi = PoissonStructure::symplectic(b);
  std::mt19937_64 rng(29);
  auto a = random_oneform(b, 2, rng);
  a *= 0.05 / sobolev_norm(a, 1);
  auto f1 = flow_operator(pi, a, 0.25, 16);
  auto f2 = flow_operator(pi, a, 0.5, 32);
  auto f3 = flow_operator(pi, a, 0.75, 48);
  CHECK((f1.matrix * f2.matrix - f3.matrix).cwiseAbs().maxCoeff() < 1e-9);

  auto fwd = flow_operator(pi, a, 1.0, 64);
  auto bwd = flow_operator(pi, a, -1.0, 64);
  CHECK((fwd.matrix * bwd.matrix -
         Eigen::MatrixXd::Identity(b->form_dim(), b->form_dim()))
            .cwiseAbs()
            .maxCoeff() < 1e-6);
}

TEST_CASE("flow preserves wedge through the degree-two extension") {
  std::mt19937_64 rng(31);
  for (auto b : {torus8(), sphere8()}) {
    auto pi = PoissonStructure::symplectic(b);
    auto a = random_oneform(b, 2, rng);  // generally non-closed generator
    a *= 0.02 / sobolev_norm(a, 1);
    auto w1 = random_oneform(b, 1, rng);
    auto w2 = random_oneform(b, 1, rng);
    auto op = flow_operator(pi, a, 1.0, 64);
    auto lhs = flow_twoform(pi, a, wedge11(w1, w2), 1.0, 64);
    auto rhs = wedge11(op.apply(w1), op.apply(w2));
    CHECK(sobolev_norm(lhs - rhs, 0) < 1e-6);
  }
}

TEST_CASE("flow is a koszul morphism") {
  std::mt19937_64 rng(37);
  for (auto b : {torus8(), sphere8()}) {
    auto pi = PoissonStructure::symplectic(b);
    auto a = random_oneform(b, 2, rng);
    a *= 0.02 / sobolev_norm(a, 1);
    auto w1 = random_oneform(b, 1, rng);
    auto w2 = random_oneform(b, 1, rng);
    auto op = flow_operator(pi, a, 1.0, 64);
    auto lhs = op.apply(koszul_bracket(pi, w1, w2));
    auto rhs = koszul_bracket(pi, op.apply(w1), op.apply(w2));
    CHECK(form_distance(lhs, rhs) < 1e-6);
  }
}

TEST_CASE("closed-generator flow matches particle advection") {
  // db/dt = [dK, b] = L_X b with X = pi#(dK); the flow is the pullback by
  // the time-t map of X.  Oracle: advect points forward, pull back with the
  // transported jacobian.
  auto b = Backend::torus(8);
  auto pi = PoissonStructure::symplectic(b);
  std::mt19937_64 rng(41);
  auto k = random_scalar(b, 2, rng);
  auto dk = d(k);
  dk *= 0.03 / sobolev_norm(dk, 1);
  k *= 0.03 / sobolev_norm(d(k), 1);
  std::mt19937_64 rng2(43);
  auto beta0 = random_oneform(b, 2, rng2);
  auto beta1 = flow_oneform(pi, dk, beta0, 1.0, 64);

  // spectral data for pointwise evaluation
  auto e1 = vector_from_functions(b, one2, zero2);
  auto e2 = vector_from_functions(b, zero2, one2);
  auto k1 = contract(e1, dk);  // dK/du
  auto k2 = contract(e2, dk);  // dK/dv
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

  std::uniform_real_distribution<double> u01(0.0, 6.28);
  double worst = 0.0;
  for (int rep = 0; rep < 12; ++rep) {
    Eigen::Vector2d y(u01(rng), u01(rng));
    const Eigen::Vector2d z0 = y;
    Eigen::Matrix2d jac = Eigen::Matrix2d::Identity();
    const int steps = 128;
    const double h = 1.0 / steps;
    for (int s = 0; s < steps; ++s) {
      // rk4 for the trajectory and its tangent map together
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
  CHECK(worst < 1e-6);
}

TEST_CASE("d-commutation defect is small for closed generators") {
  auto b = sphere8();
  auto pi = PoissonStructure::symplectic(b);
  std::mt19937_64 rng(47);
  auto k = random_scalar(b, 2, rng);
  k *= 0.05 / sobolev_norm(d(k), 1);
  auto w = random_oneform(b, 3, rng);
  auto op = flow_operator(pi, d(k), 1.0, 64);
  auto lhs = d(op.apply(w));
  auto rhs = flow_twoform(pi, d(k), d(w), 1.0, 64);
  CHECK(sobolev_norm(lhs - rhs, 0) < 1e-7);
}

TEST_CASE("flow divergence raises") {
  auto b = Backend::torus(4);
  auto pi = PoissonStructure::symplectic(b);
  std::mt19937_64 rng(53);
  auto a = random_oneform(b, 4, rng);
  a *= 1e12;  // stiff generator, rk4 blows up
  auto w = random_oneform(b, 2, rng);
  CHECK_THROWS_AS(flow_oneform(pi, a, w, 1.0, 16), FlowDivergenceError);
}
