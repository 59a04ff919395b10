#pragma once

#include <cstdint>

#include "prham/momentum.hpp"

namespace prham {

/// so(3) acting on the round sphere by rotations: H_i = x_i, pi scaled so
/// that pi#(d x_i) is the rotation generator x cross e_i, which makes
/// {x_i, x_j} = eps_ijk x_k with the canonical structure constants.
struct SphereScenario {
  BackendPtr backend;
  PoissonStructure pi;
  ScalarMomentumMap scalar_map;
  MomentumMap1 map;
  std::vector<VectorField> targets;
};

SphereScenario sphere_so3_scenario(int truncation, int padding = 2);

/// Abelian R acting on the symplectic torus by theta_2-rotations; the
/// momentum 1-form d.theta_1 is closed but not exact.
struct TorusScenario {
  BackendPtr backend;
  PoissonStructure pi;
  MomentumMap1 map;
  std::vector<VectorField> targets;
};

TorusScenario torus_abelian_scenario(int truncation, int padding = 2);

/// Seeded random combination of harmonics of degree 1..3 with
/// || d K ||_{H^3} = 1; drives the ground-truth perturbations.
ScalarField perturbation_generator(const BackendPtr& b, std::uint64_t seed);

}  // namespace prham
