#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "prham/scenario.hpp"

using namespace prham;
using namespace prham::testing;

TEST_CASE("sphere so(3) scenario satisfies the momentum axioms") {
  auto sc = sphere_so3_scenario(8);
  CHECK(generation_defect(sc.pi, sc.map, sc.targets) < 1e-10);
  CHECK(hom_defect(sc.pi, sc.map) < 1e-8);
  CHECK(chain_defect(sc.map) == 0.0);  // exact forms, trivial cobracket
  CHECK(equivariance_defect(sc.pi, sc.scalar_map) < 1e-12);
}

TEST_CASE("equivariance defect removes additive constants") {
  auto sc = sphere_so3_scenario(6);
  auto shifted = sc.scalar_map;
  for (auto& h : shifted.hamiltonians) h += ScalarField::constant(sc.backend, 0.3);
  CHECK(equivariance_defect(sc.pi, shifted) < 1e-12);
}

TEST_CASE("torus abelian scenario: closed non-exact momentum form") {
  auto sc = torus_abelian_scenario(8);
  CHECK(generation_defect(sc.pi, sc.map, sc.targets) < 1e-13);
  CHECK(hom_defect(sc.pi, sc.map) == 0.0);  // single generator, nothing to check
  CHECK(chain_defect(sc.map) == 0.0);       // d of a harmonic form vanishes
}

TEST_CASE("zero hamiltonians give zero forms") {
  auto sc = sphere_so3_scenario(6);
  std::vector<ScalarField> zs(3, ScalarField::zero(sc.backend));
  auto m = from_hamiltonians(sc.pi, ScalarMomentumMap(LieAlgebra::so3(), zs));
  for (const auto& f : m.forms) CHECK(sobolev_norm(f, 0) == 0.0);
}

TEST_CASE("hom defect grows linearly under a closed perturbation of one form") {
  auto sc = sphere_so3_scenario(8);
  std::mt19937_64 rng(3);
  auto k = random_scalar(sc.backend, 2, rng);
  k *= 1.0 / sobolev_norm(d(k), 0);
  const double base = hom_defect(sc.pi, sc.map);
  for (double eps : {1e-3, 1e-2}) {
    auto tweaked = sc.map;
    tweaked.forms[2] += eps * d(k);
    const double defect = hom_defect(sc.pi, tweaked);
    CHECK(defect > 0.1 * eps);
    CHECK(defect < 10.0 * eps + base);
  }
}

TEST_CASE("synthetic cobracket chain term matches a hand-expanded oracle") {
  // delta(e1) = e2 ^ e3 on so(3), theta-independent test forms
  std::vector<double> dd(27, 0.0);
  dd[(0 * 3 + 1) * 3 + 2] = 1.0;
  dd[(0 * 3 + 2) * 3 + 1] = -1.0;
  LieBialgebra alg(LieAlgebra::so3(), dd);

  auto b = Backend::torus(8);
  std::mt19937_64 rng(5);
  std::vector<OneForm> forms;
  for (int i = 0; i < 3; ++i) forms.push_back(random_oneform(b, 2, rng));
  MomentumMap1 m(alg, forms);

  const double got = chain_defect(m);
  const double expect0 = sobolev_norm(d(forms[0]) - wedge11(forms[1], forms[2]), 0);
  const double expect1 = sobolev_norm(d(forms[1]), 0);
  const double expect2 = sobolev_norm(d(forms[2]), 0);
  CHECK(got == doctest::Approx(std::max({expect0, expect1, expect2})).epsilon(1e-12));
}

TEST_CASE("perturb with eps = 0 is the identity") {
  auto sc = sphere_so3_scenario(6);
  auto k = perturbation_generator(sc.backend, 9);
  auto same = perturb(sc.pi, sc.map, k, 0.0);
  for (int i = 0; i < 3; ++i)
    CHECK((same.forms[i].coeffs() - sc.map.forms[i].coeffs()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("perturb preserves the momentum axioms and is order eps") {
  auto sc = sphere_so3_scenario(8);
  auto k = perturbation_generator(sc.backend, 9);
  const double eps = 1e-2;
  auto tilde = perturb(sc.pi, sc.map, k, eps);

  CHECK(hom_defect(sc.pi, tilde) < 1e-7);
  CHECK(chain_defect(tilde) < 1e-9);

  double dist = 0.0;
  for (int i = 0; i < 3; ++i)
    dist = std::max(dist, sobolev_norm(tilde.forms[i] - sc.map.forms[i], 1));
  CHECK(dist > 1e-4 * eps);
  CHECK(dist < 10.0 * eps);
}

TEST_CASE("perturb with eps then -eps returns the original map") {
  auto sc = sphere_so3_scenario(8);
  auto k = perturbation_generator(sc.backend, 11);
  auto there = perturb(sc.pi, sc.map, k, 1e-2);
  auto back = perturb(sc.pi, there, k, -1e-2);
  for (int i = 0; i < 3; ++i)
    CHECK(sobolev_norm(back.forms[i] - sc.map.forms[i], 1) < 1e-9);
}

TEST_CASE("hom defect is stable under simultaneous closed conjugation") {
  auto sc = sphere_so3_scenario(8);
  auto k = perturbation_generator(sc.backend, 13);
  const double before = hom_defect(sc.pi, sc.map);
  auto conj = perturb(sc.pi, sc.map, k, 5e-3);
  const double after = hom_defect(sc.pi, conj);
  CHECK(std::abs(after - before) < 1e-8);
}

TEST_CASE("scalar perturbation is consistent with the 1-form flow") {
  auto sc = sphere_so3_scenario(8);
  auto k = perturbation_generator(sc.backend, 7);
  auto tilde_forms = perturb(sc.pi, sc.map, k, 1e-2);
  auto tilde_scalars = perturb_scalar(sc.pi, sc.scalar_map, k, 1e-2);
  for (int i = 0; i < 3; ++i)
    CHECK(sobolev_norm(d(tilde_scalars.hamiltonians[i]) - tilde_forms.forms[i], 0) < 1e-9);
}

TEST_CASE("momentum argument errors") {
  auto sc = sphere_so3_scenario(6);
  CHECK_THROWS_AS(generation_defect(sc.pi, sc.map, {}), std::invalid_argument);
  CHECK_THROWS_AS(MomentumMap1(sc.map.algebra, {sc.map.forms[0]}), std::invalid_argument);
}
