#include <random>

#include "doctest.h"
#include "prham/liealg.hpp"

using namespace prham;

namespace {
Eigen::VectorXd basis(int dim, int i) {
  Eigen::VectorXd e = Eigen::VectorXd::Zero(dim);
  e[i] = 1.0;
  return e;
}
}  // namespace

TEST_CASE("so3 bracket matches epsilon constants") {
  auto g = LieAlgebra::so3();
  Eigen::VectorXd z = g.bracket(basis(3, 0), basis(3, 1));
  CHECK(z.isApprox(basis(3, 2)));
  CHECK(g.bracket(basis(3, 1), basis(3, 2)).isApprox(basis(3, 0)));
  CHECK(g.bracket(basis(3, 2), basis(3, 0)).isApprox(basis(3, 1)));
}

TEST_CASE("bracket is bilinear and antisymmetric") {
  auto g = LieAlgebra::so3();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int rep = 0; rep < 20; ++rep) {
    Eigen::VectorXd x(3), y(3), z(3);
    for (int i = 0; i < 3; ++i) {
      x[i] = u(rng);
      y[i] = u(rng);
      z[i] = u(rng);
    }
    const double a = u(rng);
    CHECK((g.bracket(x, y) + g.bracket(y, x)).norm() == doctest::Approx(0.0));
    CHECK((g.bracket(x, x)).norm() == doctest::Approx(0.0));
    CHECK((g.bracket(a * x + y, z) - a * g.bracket(x, z) - g.bracket(y, z)).norm() ==
          doctest::Approx(0.0).epsilon(1e-13));
  }
}

TEST_CASE("abelian bracket vanishes") {
  auto g = LieAlgebra::abelian(4);
  Eigen::VectorXd x = Eigen::VectorXd::Random(4), y = Eigen::VectorXd::Random(4);
  CHECK(g.bracket(x, y).norm() == 0.0);
  CHECK(g.jacobi_defect() == 0.0);
}

TEST_CASE("bracket rejects dimension mismatch") {
  auto g = LieAlgebra::so3();
  CHECK_THROWS_AS(g.bracket(Eigen::VectorXd::Zero(2), Eigen::VectorXd::Zero(3)),
                  std::invalid_argument);
}

TEST_CASE("jacobi defect: exact algebras vs perturbed constants") {
  auto g = LieAlgebra::so3();
  CHECK(g.jacobi_defect() == 0.0);

  // perturbing the constants by eps*noise produces a defect of order eps
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1, 1);
  const double eps = 1e-3;
  std::vector<double> c = g.constants();
  std::vector<double> noise(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) noise[i] = u(rng);
  // keep antisymmetry c_ijk = -c_jik so only Jacobi breaks
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        const double v = noise[(std::size_t(i) * 3 + j) * 3 + k];
        c[(std::size_t(i) * 3 + j) * 3 + k] += eps * v;
        c[(std::size_t(j) * 3 + i) * 3 + k] -= eps * v;
      }
  auto gp = LieAlgebra(3, c);
  const double defect = gp.jacobi_defect();
  CHECK(defect > 1e-5);
  CHECK(defect < 1e-1);
}

TEST_CASE("killing data of so3") {
  auto g = LieAlgebra::so3();
  auto kd = casimir_data(g);
  CHECK((kd.killing + 2.0 * Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() ==
        doctest::Approx(0.0));
  // dual basis e^a = -e_a / 2
  CHECK((kd.dual_basis + 0.5 * Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() ==
        doctest::Approx(0.0));
  CHECK(kd.semisimple);
}

TEST_CASE("abelian algebra is rejected by the killing gate") {
  CHECK_THROWS_AS(casimir_data(LieAlgebra::abelian(3)), NotSemisimpleError);
}

TEST_CASE("trivial cobracket is a cocycle with abelian dual") {
  auto b = LieBialgebra::trivial(LieAlgebra::so3());
  CHECK(b.cocycle_defect() == 0.0);
  auto dual = b.dual_bracket();
  CHECK(dual.jacobi_defect() == 0.0);
  Eigen::VectorXd x = Eigen::VectorXd::Random(3), y = Eigen::VectorXd::Random(3);
  CHECK(dual.bracket(x, y).norm() == 0.0);
}

TEST_CASE("coboundary cobrackets are cocycles with Lie dual") {
  auto g = LieAlgebra::so3();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int rep = 0; rep < 5; ++rep) {
    Eigen::MatrixXd r = Eigen::MatrixXd::Zero(3, 3);
    r(0, 1) = u(rng);
    r(0, 2) = u(rng);
    r(1, 2) = u(rng);
    r -= Eigen::MatrixXd(r.transpose());
    auto b = LieBialgebra::coboundary(g, r);
    CHECK(b.cocycle_defect() < 1e-12);
    CHECK(b.dual_bracket().jacobi_defect() < 1e-12);
  }
}

TEST_CASE("non-cocycle cobracket is detected") {
  // delta(e1) = e2 ^ e3, delta(e2) = delta(e3) = 0 on so(3)
  std::vector<double> dd(27, 0.0);
  dd[(0 * 3 + 1) * 3 + 2] = 1.0;
  dd[(0 * 3 + 2) * 3 + 1] = -1.0;
  auto b = LieBialgebra(LieAlgebra::so3(), dd);
  CHECK(b.cocycle_defect() > 0.5);
}

TEST_CASE("dual bracket transpose round-trips the cobracket") {
  auto g = LieAlgebra::so3();
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(3, 3);
  r(0, 1) = 0.3;
  r(1, 0) = -0.3;
  auto b = LieBialgebra::coboundary(g, r);
  auto dual = b.dual_bracket();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) CHECK(dual.c(i, j, k) == b.d(k, i, j));
}
