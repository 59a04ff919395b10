#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>

#include "prham/ce_complex.hpp"

namespace prham {

enum class RunStatus { Converged, Stalled, Diverged };

const char* to_string(RunStatus s);

/// Smallness/validation gate rejection, carrying the measured norms.
class GateError : public std::runtime_error {
public:
  GateError(const std::string& what, double near_norm, double far_norm)
      : std::runtime_error(what), near_norm(near_norm), far_norm(far_norm) {}
  double near_norm;
  double far_norm;
};

struct EngineConfig {
  double tol = 1e-8;               // stopping tolerance, H^1
  int max_steps = 12;
  int steps_per_unit = 64;         // RK4 substeps for time-1 flows
  bool smoothing = false;          // hard-cutoff schedule t_n = t0^{(3/2)^n}
  double smoothing_t0 = 4.0;
  std::vector<int> norm_ks = {0, 1, 2, 3};
  double validate_tol = 1e-6;      // momentum-axiom gate for both inputs
  double max_near_norm = 0.1;      // || beta_0 ||_{H^2} gate
  double max_far_norm = 1.0;       // || beta_0 ||_{H^3} gate
  double diverge_factor = 100.0;
  std::uint64_t seed = 0;          // probes for the final diagnostics
  bool freeze_at_reference = true; // complex anchored at the reference map
                                   // (false: anchored at the moving map's start)
};

struct StepRecord {
  int n = 0;
  std::map<int, double> norms;   // H^k norms of beta_n entering the step
  double contraction_ratio = std::numeric_limits<double>::quiet_NaN();
  double homotopy_residual = 0.0;
  double flow_tolerance = 0.0;
  double d_commutation_defect = 0.0;
  double seconds = 0.0;
};

/// Accumulated fiberwise-linear conjugation on packed coefficients.
struct MorphismState {
  Eigen::MatrixXd op;
  std::vector<Eigen::VectorXd> generators;

  OneForm apply(const OneForm& w) const { return OneForm(w.backend(), op * w.coeffs()); }
};

struct IterationReport {
  std::vector<StepRecord> steps;
  RunStatus status = RunStatus::Stalled;
  std::string status_note;
  double final_residual = 0.0;         // max_i || op(ref_i) - tilde_i ||_{H^1}
  double final_morphism_defect = 0.0;  // koszul morphism defect on seeded probes
  double final_chain_defect = 0.0;     // chain axiom of the transported map
  double operator_condition = std::numeric_limits<double>::quiet_NaN();
  double contraction_slope = std::numeric_limits<double>::quiet_NaN();
  double fitted_delta = std::numeric_limits<double>::quiet_NaN();
  double quadratic_constant = std::numeric_limits<double>::quiet_NaN();
  double wall_clock_s = 0.0;
};

/// One Newton step: beta = current - target, gamma = h0(beta) (optionally
/// cut off at degree t), F = time-1 flow of gamma, current' = F current.
struct NewtonStepResult {
  MomentumMap1 next;
  StepRecord record;
};

NewtonStepResult newton_step(const PoissonStructure& pi, const ComplexContext& ctx,
                             const MomentumMap1& current, const MomentumMap1& target,
                             MorphismState& state, std::optional<double> smoothing_t,
                             const EngineConfig& cfg, int step_index = 0);

/// Abstract normal-form driver: iterates f <- Phi(H(f)) . f until the
/// deviation zeta(f) is below tolerance.
struct SciProblem {
  Eigen::VectorXd initial;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> zeta;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> solve;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&, double)> smooth_solution;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::VectorXd&, StepRecord&)>
      apply_step;
  std::function<double(const Eigen::VectorXd&, int)> norm;  // H^k norm of a deviation
  std::function<double(const Eigen::VectorXd&)> residual;   // homotopy residual of a deviation
};

struct SciResult {
  Eigen::VectorXd final_state;
  IterationReport report;
  RunStatus status = RunStatus::Stalled;
};

SciResult sci_drive(const SciProblem& p, const EngineConfig& cfg);

struct RigidityResult {
  MorphismState state;  // operator mapping the reference map onto tilde
  IterationReport report;
  RunStatus status = RunStatus::Stalled;
};

/// Conjugates `tilde` onto `reference` by the Newton iteration in the frozen
/// complex (reference-anchored by default), then reports the inverse
/// operator, which carries reference onto tilde.
RigidityResult run_rigidity(const PoissonStructure& pi, const MomentumMap1& reference,
                            const MomentumMap1& tilde, const EngineConfig& cfg);

/// Exposes the wrapped problem run_rigidity drives, so callers can reproduce
/// its iterates through sci_drive directly.
SciProblem make_rigidity_problem(const PoissonStructure& pi, const ComplexContext& ctx,
                                 const MomentumMap1& reference, const MomentumMap1& tilde,
                                 const EngineConfig& cfg,
                                 std::shared_ptr<MorphismState> tracker);

struct ClassicalResult {
  Eigen::MatrixXd op;  // scalar-coefficient operator mapping reference onto tilde
  std::vector<Eigen::VectorXd> generators;
  IterationReport report;
  RunStatus status = RunStatus::Stalled;
};

/// Classical-mode run on the scalar complex with Hamiltonian-flow steps.
ClassicalResult run_classical(const PoissonStructure& pi, const ScalarMomentumMap& reference,
                              const ScalarMomentumMap& tilde, const EngineConfig& cfg);

struct QuadraticDefectReport {
  std::map<int, double> d_beta_norms;   // || d1 beta ||_{H^k}
  std::map<int, double> beta_sq_norms;  // || beta ||^2_{H^{k+1}}
  std::map<int, double> ratios;         // c_k
};

QuadraticDefectReport estimate_quadratic_defect(const PoissonStructure& pi,
                                                const ComplexContext& ctx, const MomentumMap1& a,
                                                const MomentumMap1& b,
                                                const std::vector<int>& ks);

}  // namespace prham
