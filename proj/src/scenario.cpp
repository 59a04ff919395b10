#include "prham/scenario.hpp"

#include <cmath>
#include <random>

namespace prham {

namespace {

VectorField rotation_generator(const BackendPtr& b, int i) {
  Grid2 vals(b->grid_size(), 2);
  const auto& xy = b->grid_coords();
  for (int p = 0; p < b->grid_size(); ++p) {
    const double th = xy(p, 0), ph = xy(p, 1);
    const Eigen::Vector3d x(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph),
                            std::cos(th));
    const Eigen::Vector3d eth(std::cos(th) * std::cos(ph), std::cos(th) * std::sin(ph),
                              -std::sin(th));
    const Eigen::Vector3d eph(-std::sin(ph), std::cos(ph), 0.0);
    Eigen::Vector3d e = Eigen::Vector3d::Zero();
    e[i] = 1.0;
    const Eigen::Vector3d v = x.cross(e);
    vals(p, 0) = v.dot(eth);
    vals(p, 1) = v.dot(eph);
  }
  return VectorField(b, vals);
}

}  // namespace

SphereScenario sphere_so3_scenario(int truncation, int padding) {
  auto b = Backend::sphere(truncation, padding);
  auto pi = PoissonStructure::symplectic(b);

  // x_1, x_2, x_3 are exact degree-1 coefficients: x_i = Y_{1,m}/sqrt(3)
  // with m = +1, -1, 0 in the packed order l^2 + l + m.
  const double c = 1.0 / std::sqrt(3.0);
  std::vector<ScalarField> hams;
  for (int m : {1, -1, 0}) {
    auto h = ScalarField::zero(b);
    h.coeffs()[2 + m] = c;
    hams.push_back(std::move(h));
  }
  ScalarMomentumMap scalar_map(LieAlgebra::so3(), std::move(hams));
  MomentumMap1 map = from_hamiltonians(pi, scalar_map);

  std::vector<VectorField> targets;
  for (int i = 0; i < 3; ++i) targets.push_back(rotation_generator(b, i));

  return SphereScenario{b, std::move(pi), std::move(scalar_map), std::move(map),
                        std::move(targets)};
}

TorusScenario torus_abelian_scenario(int truncation, int padding) {
  auto b = Backend::torus(truncation, padding);
  auto pi = PoissonStructure::symplectic(b);

  // d.theta_1 lives in the first harmonic slot of the form packing
  auto w = OneForm::zero(b);
  w.coeffs()[b->form_dim() - 2] = 1.0;
  MomentumMap1 map(LieBialgebra::trivial(LieAlgebra::abelian(1)), {w});

  Grid2 vals = Grid2::Zero(b->grid_size(), 2);
  vals.col(1).setOnes();  // the rotation field in theta_2
  std::vector<VectorField> targets;
  targets.emplace_back(b, std::move(vals));

  return TorusScenario{b, std::move(pi), std::move(map), std::move(targets)};
}

ScalarField perturbation_generator(const BackendPtr& b, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(b->scalar_dim());
  const auto& deg = b->scalar_degree();
  for (Eigen::Index i = 0; i < c.size(); ++i)
    if (deg[i] >= 1.0 && deg[i] <= 3.0) c[i] = u(rng);
  ScalarField k(b, std::move(c));
  const double scale = sobolev_norm(d(k), 3);
  if (scale == 0.0) throw std::invalid_argument("perturbation_generator: degenerate seed");
  return (1.0 / scale) * k;
}

}  // namespace prham
