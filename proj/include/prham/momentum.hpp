#pragma once

#include <optional>
#include <vector>

#include "prham/liealg.hpp"
#include "prham/poisson.hpp"

namespace prham {

/// Infinitesimal momentum map: one 1-form per Lie algebra basis element.
struct MomentumMap1 {
  MomentumMap1(LieBialgebra algebra, std::vector<OneForm> forms);

  LieBialgebra algebra;
  std::vector<OneForm> forms;

  int dim() const { return algebra.dim(); }
  const BackendPtr& backend() const { return forms.front().backend(); }
  /// alpha_X for a coefficient vector X
  OneForm at(const Eigen::VectorXd& x) const;
};

/// Classical-mode data: one scalar Hamiltonian per basis element.
struct ScalarMomentumMap {
  ScalarMomentumMap(LieAlgebra algebra, std::vector<ScalarField> hamiltonians);

  LieAlgebra algebra;
  std::vector<ScalarField> hamiltonians;

  int dim() const { return algebra.dim(); }
  const BackendPtr& backend() const { return hamiltonians.front().backend(); }
};

/// forms[i] = d H_i
MomentumMap1 from_hamiltonians(const PoissonStructure& pi, const ScalarMomentumMap& s);
MomentumMap1 from_hamiltonians(const PoissonStructure& pi, const ScalarMomentumMap& s,
                               const LieBialgebra& algebra);

/// max_i || pi#(forms[i]) - targets[i] ||_{L2}
double generation_defect(const PoissonStructure& pi, const MomentumMap1& m,
                         const std::vector<VectorField>& targets);

/// max_{i<j} || [forms_i, forms_j]_pi - sum_k c_ij^k forms_k ||_{H0}
double hom_defect(const PoissonStructure& pi, const MomentumMap1& m);

/// max_i || d forms_i - sum_{j<k} d_ijk forms_j ^ forms_k ||_{H0}
double chain_defect(const MomentumMap1& m);

/// { H_i, H_j } = sum_k c_ij^k H_k + const; reports the defect with the
/// constant removed, i.e. the mean-free residual norm.
double equivariance_defect(const PoissonStructure& pi, const ScalarMomentumMap& s);

/// Conjugates every form by the time-1 Poisson flow of d(eps K).  The
/// generator is exact, so the flow is the pullback by a genuine Poisson
/// diffeomorphism and the output is again a momentum map.  The conjugating
/// operator is returned through `conjugator` when requested.
MomentumMap1 perturb(const PoissonStructure& pi, const MomentumMap1& m, const ScalarField& k,
                     double eps, int steps = 64, FlowOperator* conjugator = nullptr);

/// Scalar-mode analogue: pulls every Hamiltonian back by the same flow
/// (time-1 Hamiltonian flow of eps K acting on functions).
ScalarMomentumMap perturb_scalar(const PoissonStructure& pi, const ScalarMomentumMap& s,
                                 const ScalarField& k, double eps, int steps = 64);

/// Dense matrix of f -> {S, f} on truncated scalar coefficients.
Eigen::MatrixXd hamiltonian_matrix(const PoissonStructure& pi, const ScalarField& s);

/// Dense matrix of the time-t scalar flow exp(t {S, .}) (same RK4 stepping
/// as the 1-form flow operators).
Eigen::MatrixXd scalar_flow_matrix(const PoissonStructure& pi, const ScalarField& s, double t,
                                   int steps);

}  // namespace prham
