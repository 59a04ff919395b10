#pragma once

#include <array>
#include <cstdint>

#include "prham/momentum.hpp"

namespace prham {

class ConditioningError : public std::runtime_error {
public:
  ConditioningError(const std::string& what, double smallest_sv)
      : std::runtime_error(what), smallest_sv(smallest_sv) {}
  double smallest_sv;
};

/// 1-cochain gamma(e_i) and 2-cochain gamma(e_i ^ e_j) (pairs i<j in
/// lexicographic order), as tuples of 1-forms.
using Cochain1 = std::vector<OneForm>;
using Cochain2 = std::vector<OneForm>;
using Cochain3 = std::vector<OneForm>;

struct ComplexOptions {
  double svd_cutoff = 1e-10;  // relative to the largest singular value
  bool assemble_d2 = true;
};

/// Cochain complex C^q(g, V) of the representation rho_X = [alpha_X, .]_pi
/// on truncated 1-forms (or rho_X = {H_X, .} on scalars in classical mode),
/// with assembled differentials and Moore-Penrose homotopies.  The model
/// momentum map is frozen at construction.
class ComplexContext {
public:
  ComplexContext(const PoissonStructure& pi, const MomentumMap1& model,
                 ComplexOptions opts = {});
  ComplexContext(const PoissonStructure& pi, const ScalarMomentumMap& model,
                 ComplexOptions opts = {});

  bool scalar_mode() const { return scalar_mode_; }
  int n() const { return n_; }
  int pairs() const { return n_ * (n_ - 1) / 2; }
  int triples() const { return n_ * (n_ - 1) * (n_ - 2) / 6; }
  int module_dim() const { return d_; }
  const BackendPtr& backend() const { return backend_; }
  const LieAlgebra& algebra() const { return algebra_; }

  int pair_index(int i, int j) const;  // i < j

  const std::vector<Eigen::MatrixXd>& rho_matrices() const { return rho_; }
  const Eigen::MatrixXd& d0_matrix() const { return d0_; }
  const Eigen::MatrixXd& d1_matrix() const { return d1_; }
  const Eigen::MatrixXd& d2_matrix() const { return d2_; }
  const Eigen::MatrixXd& h0_matrix() const { return h0_; }
  const Eigen::MatrixXd& h1_matrix() const { return h1_; }

  Eigen::VectorXd d0_apply(const Eigen::VectorXd& v) const { return d0_ * v; }
  Eigen::VectorXd d1_apply(const Eigen::VectorXd& v) const { return d1_ * v; }
  Eigen::VectorXd d2_apply(const Eigen::VectorXd& v) const { return d2_ * v; }
  Eigen::VectorXd h0_apply(const Eigen::VectorXd& v) const { return h0_ * v; }
  Eigen::VectorXd h1_apply(const Eigen::VectorXd& v) const { return h1_ * v; }

  /// || d0 h0 g + h1 d1 g - g || / || g || in packed euclidean norm
  double homotopy_residual(const Eigen::VectorXd& gamma) const;

  /// max over cochain component blocks of the module H^k norm
  double cochain_norm(const Eigen::VectorXd& v, int k) const;

  // relative residuals of the complex identities, recorded at assembly
  double d1d0_residual() const { return d1d0_residual_; }
  double d2d1_residual() const { return d2d1_residual_; }
  double h0_smallest_sv() const { return h0_sv_; }
  double h1_smallest_sv() const { return h1_sv_; }

  // packing helpers (1-form mode)
  Eigen::VectorXd pack(const std::vector<OneForm>& c) const;
  std::vector<OneForm> unpack(const Eigen::VectorXd& v, int blocks) const;

private:
  void assemble(const std::vector<Eigen::MatrixXd>& rho, const LieAlgebra& algebra,
                const ComplexOptions& opts);

  BackendPtr backend_;
  LieAlgebra algebra_;
  bool scalar_mode_ = false;
  int n_ = 0, d_ = 0;
  Eigen::VectorXd lambda_;  // module mode eigenvalues for norms
  std::vector<Eigen::MatrixXd> rho_;
  Eigen::MatrixXd d0_, d1_, d2_, h0_, h1_;
  double d1d0_residual_ = 0.0, d2d1_residual_ = 0.0;
  double h0_sv_ = 0.0, h1_sv_ = 0.0;
};

// operation surface in 1-form mode
OneForm rho(const ComplexContext& ctx, const Eigen::VectorXd& x, const OneForm& beta);
Cochain1 d0(const ComplexContext& ctx, const OneForm& beta);
Cochain2 d1(const ComplexContext& ctx, const Cochain1& gamma);
Cochain3 d2(const ComplexContext& ctx, const Cochain2& c);
OneForm h0(const ComplexContext& ctx, const Cochain1& gamma);
Cochain1 h1(const ComplexContext& ctx, const Cochain2& c);

/// Whitehead-style homotopy through the Casimir element, cross-checked
/// against the pseudo-inverse homotopy.  Requires a semisimple algebra.
struct CasimirReport {
  double identity_defect_noninv = 0.0;   // homotopy identity off invariant cochains
  double invariant_cocycle_sv = 0.0;     // smallest ||d1 v|| over unit invariant cochains
  double agreement_with_pinv = 0.0;      // vs pinv homotopy on exact 1-cochains
  int invariant_dim_c0 = 0;
  int invariant_dim_c1 = 0;
};

CasimirReport casimir_homotopy_check(const ComplexContext& ctx, std::uint64_t seed,
                                     int samples = 50);

/// Measured operator constants C_k with ||h0 g||_{H^k} <= C_k ||g||_{H^{k+s}},
/// estimated by power iteration for k = 0..3 and s = 0..3; fitted_s minimizes
/// the spread max_k C_k / min_k C_k.
struct HomotopyNormReport {
  std::array<std::array<double, 4>, 4> constants{};  // [s][k]
  int fitted_s = 0;
};

HomotopyNormReport homotopy_norm_diagnostic(const ComplexContext& ctx, std::uint64_t seed);

}  // namespace prham
