#include "prham/engine.hpp"

#include <chrono>
#include <cmath>

#include <Eigen/LU>
#include <Eigen/SVD>

namespace prham {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Eigen::VectorXd cutoff_form(const Backend& b, const Eigen::VectorXd& v, double t) {
  const auto& deg = b.form_degree();
  Eigen::VectorXd out = v;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (deg[i] > t) out[i] = 0.0;
  return out;
}

Eigen::VectorXd cutoff_scalar(const Backend& b, const Eigen::VectorXd& v, double t) {
  const auto& deg = b.scalar_degree();
  Eigen::VectorXd out = v;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (deg[i] > t) out[i] = 0.0;
  return out;
}

/// Applies the time-1 flow of the solved generator to every component of the
/// packed state and composes the tracked operator.  Shared by the public
/// newton_step and the wrapped driver problem, so both run the same path.
Eigen::VectorXd apply_form_generator(const PoissonStructure& pi, const ComplexContext& ctx,
                                     const Eigen::VectorXd& state, const Eigen::VectorXd& gen,
                                     const EngineConfig& cfg, MorphismState* tracker,
                                     StepRecord& rec) {
  const auto& b = ctx.backend();
  const OneForm gamma(b, gen);
  const Eigen::MatrixXd a = koszul_matrix(pi, gamma);
  const Eigen::MatrixXd flow = rk4_exponential(a, 1.0, cfg.steps_per_unit);

  {  // local RK4 error proxy: coarse vs fine stepping on the first component
    const Eigen::MatrixXd fine = rk4_exponential(a, 1.0, 2 * cfg.steps_per_unit);
    const Eigen::VectorXd probe = state.head(ctx.module_dim());
    rec.flow_tolerance = sobolev_norm(OneForm(b, (flow - fine) * probe), 1);
  }

  {  // chain-map (d-commutation) diagnostic of the step operator
    std::mt19937_64 rng(cfg.seed + 211 * (rec.n + 1));
    OneForm w = random_oneform(b, 3, rng);
    const double nw = sobolev_norm(w, 1);
    if (nw > 0) w *= 1.0 / nw;
    const int dsteps = std::max(8, cfg.steps_per_unit / 8);
    const TwoForm lhs = d(OneForm(b, flow * w.coeffs()));
    const TwoForm rhs = flow_twoform(pi, gamma, d(w), 1.0, dsteps);
    rec.d_commutation_defect = sobolev_norm(lhs - rhs, 0);
  }

  Eigen::VectorXd next(state.size());
  const int dim = ctx.module_dim();
  for (int i = 0; i < ctx.n(); ++i)
    next.segment(std::size_t(i) * dim, dim) = flow * state.segment(std::size_t(i) * dim, dim);

  if (tracker) {
    if (tracker->op.size() == 0) tracker->op = Eigen::MatrixXd::Identity(dim, dim);
    tracker->op = flow * tracker->op;
    tracker->generators.push_back(gen);
  }
  return next;
}

Eigen::VectorXd apply_scalar_generator(const PoissonStructure& pi, const ComplexContext& ctx,
                                       const Eigen::VectorXd& state, const Eigen::VectorXd& gen,
                                       const EngineConfig& cfg, MorphismState* tracker,
                                       StepRecord& rec) {
  const auto& b = ctx.backend();
  const Eigen::MatrixXd a = hamiltonian_matrix(pi, ScalarField(b, gen));
  const Eigen::MatrixXd flow = rk4_exponential(a, 1.0, cfg.steps_per_unit);
  {
    const Eigen::MatrixXd fine = rk4_exponential(a, 1.0, 2 * cfg.steps_per_unit);
    const Eigen::VectorXd probe = state.head(ctx.module_dim());
    rec.flow_tolerance = sobolev_norm(ScalarField(b, (flow - fine) * probe), 1);
  }
  rec.d_commutation_defect = 0.0;  // scalar flows act on functions directly

  Eigen::VectorXd next(state.size());
  const int dim = ctx.module_dim();
  for (int i = 0; i < ctx.n(); ++i)
    next.segment(std::size_t(i) * dim, dim) = flow * state.segment(std::size_t(i) * dim, dim);
  if (tracker) {
    if (tracker->op.size() == 0) tracker->op = Eigen::MatrixXd::Identity(dim, dim);
    tracker->op = flow * tracker->op;
    tracker->generators.push_back(gen);
  }
  return next;
}

void fit_trajectory_diagnostics(IterationReport& rep) {
  std::vector<double> h1, h3;
  for (const auto& s : rep.steps) {
    auto it1 = s.norms.find(1);
    if (it1 == s.norms.end()) return;
    h1.push_back(it1->second);
    auto it3 = s.norms.find(3);
    h3.push_back(it3 == s.norms.end() ? std::numeric_limits<double>::quiet_NaN() : it3->second);
  }
  // least-squares slope of log ||beta_{n+1}|| against log ||beta_n|| over the
  // first three steps, keeping pairs above the discretization floor
  const double floor_cut = std::max(1e-14, 1e-11 * h1.front());
  std::vector<std::pair<double, double>> pts;
  for (std::size_t n = 0; n + 1 < h1.size() && n < 3; ++n)
    if (h1[n] > floor_cut && h1[n + 1] > floor_cut)
      pts.emplace_back(std::log(h1[n]), std::log(h1[n + 1]));
  if (pts.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [x, y] : pts) {
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double m = pts.size();
    const double denom = m * sxx - sx * sx;
    if (denom != 0.0) {
      rep.contraction_slope = (m * sxy - sx * sy) / denom;
      rep.fitted_delta = rep.contraction_slope - 1.0;
    }
  }
  double cmax = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t n = 0; n + 1 < h1.size(); ++n) {
    if (!(h1[n + 1] > 1e-11) || !std::isfinite(h3[n]) || h3[n] == 0.0) continue;
    const double c = h1[n + 1] / (h3[n] * h3[n]);
    if (!std::isfinite(cmax) || c > cmax) cmax = c;
  }
  rep.quadratic_constant = cmax;
}

}  // namespace

const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Converged: return "Converged";
    case RunStatus::Stalled: return "Stalled";
    default: return "Diverged";
  }
}

NewtonStepResult newton_step(const PoissonStructure& pi, const ComplexContext& ctx,
                             const MomentumMap1& current, const MomentumMap1& target,
                             MorphismState& state, std::optional<double> smoothing_t,
                             const EngineConfig& cfg, int step_index) {
  const auto t0 = Clock::now();
  const Eigen::VectorXd f = ctx.pack(current.forms);
  const Eigen::VectorXd beta = f - ctx.pack(target.forms);

  NewtonStepResult out{current, {}};
  StepRecord& rec = out.record;
  rec.n = step_index;
  for (int k : cfg.norm_ks) rec.norms[k] = ctx.cochain_norm(beta, k);
  rec.homotopy_residual = ctx.homotopy_residual(beta);

  Eigen::VectorXd gen = ctx.h0_apply(beta);
  if (smoothing_t) gen = cutoff_form(*ctx.backend(), gen, *smoothing_t);

  const Eigen::VectorXd next = apply_form_generator(pi, ctx, f, gen, cfg, &state, rec);
  out.next = MomentumMap1(current.algebra, ctx.unpack(next, ctx.n()));
  rec.seconds = seconds_since(t0);
  return out;
}

SciResult sci_drive(const SciProblem& p, const EngineConfig& cfg) {
  const auto t0 = Clock::now();
  SciResult res;
  Eigen::VectorXd f = p.initial;
  IterationReport& rep = res.report;

  double beta0_h1 = std::numeric_limits<double>::quiet_NaN();
  double prev_h1 = std::numeric_limits<double>::quiet_NaN();
  res.status = RunStatus::Stalled;
  rep.status_note = "step budget exhausted";

  for (int n = 0; n <= cfg.max_steps; ++n) {
    const auto ts = Clock::now();
    const Eigen::VectorXd beta = p.zeta(f);

    StepRecord rec;
    rec.n = n;
    if (!beta.allFinite()) {
      res.status = RunStatus::Diverged;
      rep.status_note = "non-finite deviation";
      rep.steps.push_back(rec);
      break;
    }
    for (int k : cfg.norm_ks) rec.norms[k] = p.norm(beta, k);
    const double h1 = p.norm(beta, 1);
    if (n == 0) beta0_h1 = h1;
    if (std::isfinite(prev_h1) && prev_h1 > 0.0) rec.contraction_ratio = h1 / (prev_h1 * prev_h1);
    rec.homotopy_residual = p.residual(beta);

    if (h1 <= cfg.tol) {
      res.status = RunStatus::Converged;
      rep.status_note = "deviation below tolerance";
      rec.seconds = seconds_since(ts);
      rep.steps.push_back(rec);
      break;
    }
    if (h1 > cfg.diverge_factor * std::max(beta0_h1, cfg.tol)) {
      res.status = RunStatus::Diverged;
      rep.status_note = "deviation grew past the divergence factor";
      rep.steps.push_back(rec);
      break;
    }
    if (n == cfg.max_steps) {
      rep.steps.push_back(rec);
      break;  // Stalled
    }

    Eigen::VectorXd gen = p.solve(f);
    if (cfg.smoothing && p.smooth_solution) {
      const double t_n = std::pow(cfg.smoothing_t0, std::pow(1.5, double(n)));
      gen = p.smooth_solution(gen, t_n);
    }
    f = p.apply_step(f, gen, rec);
    prev_h1 = h1;
    rec.seconds = seconds_since(ts);
    rep.steps.push_back(rec);
  }

  res.final_state = f;
  rep.status = res.status;
  fit_trajectory_diagnostics(rep);
  rep.wall_clock_s = seconds_since(t0);
  return res;
}

SciProblem make_rigidity_problem(const PoissonStructure& pi, const ComplexContext& ctx,
                                 const MomentumMap1& reference, const MomentumMap1& tilde,
                                 const EngineConfig& cfg,
                                 std::shared_ptr<MorphismState> tracker) {
  SciProblem p;
  const Eigen::VectorXd target = ctx.pack(reference.forms);
  p.initial = ctx.pack(tilde.forms);
  p.zeta = [target](const Eigen::VectorXd& f) -> Eigen::VectorXd { return f - target; };
  p.solve = [target, &ctx](const Eigen::VectorXd& f) -> Eigen::VectorXd {
    return ctx.h0_apply(f - target);
  };
  p.smooth_solution = [&ctx](const Eigen::VectorXd& g, double t) -> Eigen::VectorXd {
    return cutoff_form(*ctx.backend(), g, t);
  };
  p.apply_step = [&pi, &ctx, cfg, tracker](const Eigen::VectorXd& f, const Eigen::VectorXd& g,
                                           StepRecord& rec) -> Eigen::VectorXd {
    return apply_form_generator(pi, ctx, f, g, cfg, tracker.get(), rec);
  };
  p.norm = [&ctx](const Eigen::VectorXd& v, int k) { return ctx.cochain_norm(v, k); };
  p.residual = [&ctx](const Eigen::VectorXd& v) { return ctx.homotopy_residual(v); };
  return p;
}

namespace {

void check_gates(const char* what, double near_norm, double far_norm, const EngineConfig& cfg) {
  if (near_norm > cfg.max_near_norm || far_norm > cfg.max_far_norm)
    throw GateError(std::string(what) + ": smallness gate violated (near " +
                        std::to_string(near_norm) + " vs " + std::to_string(cfg.max_near_norm) +
                        ", far " + std::to_string(far_norm) + " vs " +
                        std::to_string(cfg.max_far_norm) + ")",
                    near_norm, far_norm);
}

}  // namespace

RigidityResult run_rigidity(const PoissonStructure& pi, const MomentumMap1& reference,
                            const MomentumMap1& tilde, const EngineConfig& cfg) {
  const auto t0 = Clock::now();
  if (reference.dim() != tilde.dim())
    throw std::invalid_argument("run_rigidity: algebra dimension mismatch");
  require_compatible(*reference.backend(), *tilde.backend(), "run_rigidity");
  require_compatible(*pi.backend(), *reference.backend(), "run_rigidity");

  for (const auto* m : {&reference, &tilde}) {
    const double hd = hom_defect(pi, *m);
    const double cd = m->algebra.trivial_cobracket() ? chain_defect(*m) : chain_defect(*m);
    if (hd > cfg.validate_tol || cd > cfg.validate_tol)
      throw GateError("run_rigidity: momentum-map validation failed (hom " + std::to_string(hd) +
                          ", chain " + std::to_string(cd) + " vs tol " +
                          std::to_string(cfg.validate_tol) + ")",
                      hd, cd);
  }

  ComplexContext ctx(pi, cfg.freeze_at_reference ? reference : tilde);
  {
    const Eigen::VectorXd beta0 = ctx.pack(tilde.forms) - ctx.pack(reference.forms);
    check_gates("run_rigidity", ctx.cochain_norm(beta0, 2), ctx.cochain_norm(beta0, 3), cfg);
  }

  auto tracker = std::make_shared<MorphismState>();
  tracker->op = Eigen::MatrixXd::Identity(ctx.module_dim(), ctx.module_dim());
  const SciProblem problem = make_rigidity_problem(pi, ctx, reference, tilde, cfg, tracker);
  SciResult sci = sci_drive(problem, cfg);

  RigidityResult out;
  out.status = sci.status;
  out.report = std::move(sci.report);
  out.state.generators = tracker->generators;

  // the driver conjugates tilde onto the reference; the reported morphism
  // carries the reference map onto tilde
  Eigen::BDCSVD<Eigen::MatrixXd> svd(tracker->op);
  const auto& sv = svd.singularValues();
  out.report.operator_condition = sv.size() ? sv[0] / sv[sv.size() - 1] : 1.0;
  out.state.op = tracker->op.partialPivLu().inverse();

  if (out.status == RunStatus::Converged) {
    const auto& b = ctx.backend();
    double res = 0.0;
    std::vector<OneForm> transported;
    for (int i = 0; i < reference.dim(); ++i) {
      OneForm img(b, out.state.op * reference.forms[i].coeffs());
      res = std::max(res, sobolev_norm(img - tilde.forms[i], 1));
      transported.push_back(std::move(img));
    }
    out.report.final_residual = res;

    std::mt19937_64 rng(cfg.seed + 777);
    double md = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
      OneForm w1 = random_oneform(b, b->truncation() / 2, rng);
      OneForm w2 = random_oneform(b, b->truncation() / 2, rng);
      const double n1 = sobolev_norm(w1, 1), n2 = sobolev_norm(w2, 1);
      if (n1 == 0.0 || n2 == 0.0) continue;
      w1 *= 1.0 / n1;
      w2 *= 1.0 / n2;
      const OneForm lhs(b, out.state.op * koszul_bracket(pi, w1, w2).coeffs());
      const OneForm rhs = koszul_bracket(pi, OneForm(b, out.state.op * w1.coeffs()),
                                         OneForm(b, out.state.op * w2.coeffs()));
      md = std::max(md, sobolev_norm(lhs - rhs, 0));
    }
    out.report.final_morphism_defect = md;
    out.report.final_chain_defect =
        chain_defect(MomentumMap1(tilde.algebra, std::move(transported)));
  } else {
    out.report.final_residual = std::numeric_limits<double>::quiet_NaN();
    out.report.final_morphism_defect = std::numeric_limits<double>::quiet_NaN();
    out.report.final_chain_defect = std::numeric_limits<double>::quiet_NaN();
  }
  out.report.wall_clock_s = seconds_since(t0);
  return out;
}

ClassicalResult run_classical(const PoissonStructure& pi, const ScalarMomentumMap& reference,
                              const ScalarMomentumMap& tilde, const EngineConfig& cfg) {
  const auto t0 = Clock::now();
  if (reference.dim() != tilde.dim())
    throw std::invalid_argument("run_classical: algebra dimension mismatch");
  require_compatible(*reference.backend(), *tilde.backend(), "run_classical");

  for (const auto* m : {&reference, &tilde}) {
    const double ed = equivariance_defect(pi, *m);
    if (ed > cfg.validate_tol)
      throw GateError("run_classical: equivariance validation failed (defect " +
                          std::to_string(ed) + " vs tol " + std::to_string(cfg.validate_tol) + ")",
                      ed, ed);
  }

  ComplexContext ctx(pi, cfg.freeze_at_reference ? reference : tilde);
  const int n = ctx.n(), dim = ctx.module_dim();
  auto pack = [&](const ScalarMomentumMap& m) {
    Eigen::VectorXd v(std::size_t(n) * dim);
    for (int i = 0; i < n; ++i) v.segment(std::size_t(i) * dim, dim) = m.hamiltonians[i].coeffs();
    return v;
  };
  const Eigen::VectorXd target = pack(reference);
  {
    const Eigen::VectorXd beta0 = pack(tilde) - target;
    check_gates("run_classical", ctx.cochain_norm(beta0, 2), ctx.cochain_norm(beta0, 3), cfg);
  }

  auto tracker = std::make_shared<MorphismState>();
  tracker->op = Eigen::MatrixXd::Identity(dim, dim);

  SciProblem p;
  p.initial = pack(tilde);
  p.zeta = [target](const Eigen::VectorXd& f) -> Eigen::VectorXd { return f - target; };
  p.solve = [target, &ctx](const Eigen::VectorXd& f) -> Eigen::VectorXd {
    return ctx.h0_apply(f - target);
  };
  p.smooth_solution = [&ctx](const Eigen::VectorXd& g, double t) -> Eigen::VectorXd {
    return cutoff_scalar(*ctx.backend(), g, t);
  };
  p.apply_step = [&pi, &ctx, cfg, tracker](const Eigen::VectorXd& f, const Eigen::VectorXd& g,
                                           StepRecord& rec) -> Eigen::VectorXd {
    return apply_scalar_generator(pi, ctx, f, g, cfg, tracker.get(), rec);
  };
  p.norm = [&ctx](const Eigen::VectorXd& v, int k) { return ctx.cochain_norm(v, k); };
  p.residual = [&ctx](const Eigen::VectorXd& v) { return ctx.homotopy_residual(v); };

  SciResult sci = sci_drive(p, cfg);

  ClassicalResult out;
  out.status = sci.status;
  out.report = std::move(sci.report);
  out.generators = tracker->generators;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(tracker->op);
  const auto& sv = svd.singularValues();
  out.report.operator_condition = sv.size() ? sv[0] / sv[sv.size() - 1] : 1.0;
  out.op = tracker->op.partialPivLu().inverse();

  if (out.status == RunStatus::Converged) {
    const auto& b = ctx.backend();
    double res = 0.0;
    std::vector<ScalarField> transported;
    for (int i = 0; i < n; ++i) {
      ScalarField img(b, Eigen::VectorXd(out.op * reference.hamiltonians[i].coeffs()));
      res = std::max(res, sobolev_norm(img - tilde.hamiltonians[i], 1));
      transported.push_back(std::move(img));
    }
    out.report.final_residual = res;

    std::mt19937_64 rng(cfg.seed + 777);
    double md = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
      ScalarField f1 = random_scalar(b, b->truncation() / 2, rng);
      ScalarField f2 = random_scalar(b, b->truncation() / 2, rng);
      const double n1 = sobolev_norm(f1, 1), n2 = sobolev_norm(f2, 1);
      if (n1 == 0.0 || n2 == 0.0) continue;
      f1 *= 1.0 / n1;
      f2 *= 1.0 / n2;
      const ScalarField lhs(b, Eigen::VectorXd(out.op * poisson_bracket(pi, f1, f2).coeffs()));
      const ScalarField rhs =
          poisson_bracket(pi, ScalarField(b, Eigen::VectorXd(out.op * f1.coeffs())),
                          ScalarField(b, Eigen::VectorXd(out.op * f2.coeffs())));
      md = std::max(md, sobolev_norm(lhs - rhs, 0));
    }
    out.report.final_morphism_defect = md;
    out.report.final_chain_defect =
        equivariance_defect(pi, ScalarMomentumMap(reference.algebra, std::move(transported)));
  } else {
    out.report.final_residual = std::numeric_limits<double>::quiet_NaN();
    out.report.final_morphism_defect = std::numeric_limits<double>::quiet_NaN();
    out.report.final_chain_defect = std::numeric_limits<double>::quiet_NaN();
  }
  out.report.wall_clock_s = seconds_since(t0);
  return out;
}

QuadraticDefectReport estimate_quadratic_defect(const PoissonStructure& pi,
                                                const ComplexContext& ctx, const MomentumMap1& a,
                                                const MomentumMap1& b,
                                                const std::vector<int>& ks) {
  (void)pi;
  if (a.dim() != b.dim())
    throw std::invalid_argument("estimate_quadratic_defect: dimension mismatch");
  Eigen::VectorXd beta = ctx.pack(a.forms) - ctx.pack(b.forms);
  const Eigen::VectorXd dbeta = ctx.d1_apply(beta);
  QuadraticDefectReport rep;
  for (int k : ks) {
    const double num = ctx.cochain_norm(dbeta, k);
    const double den = ctx.cochain_norm(beta, k + 1);
    rep.d_beta_norms[k] = num;
    rep.beta_sq_norms[k] = den * den;
    rep.ratios[k] = den > 0.0 ? num / (den * den) : std::numeric_limits<double>::quiet_NaN();
  }
  return rep;
}

}  // namespace prham
