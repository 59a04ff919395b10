#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "prham/engine.hpp"
#include "prham/scenario.hpp"

using namespace prham;
using namespace prham::testing;

namespace {

int executed_steps(const IterationReport& rep) { return int(rep.steps.size()) - 1; }

struct EngineFixture {
  SphereScenario sc = sphere_so3_scenario(8);
  ScalarField k = perturbation_generator(sc.backend, 7);
  MomentumMap1 tilde = perturb(sc.pi, sc.map, k, 1e-2);
  EngineConfig cfg;
};

EngineFixture& fixture() {
  static EngineFixture f = [] {
    EngineFixture e;
    e.cfg.seed = 7;
    return e;
  }();
  return f;
}

}  // namespace

TEST_CASE("newton step at the fixed point is the identity") {
  auto& f = fixture();
  ComplexContext ctx(f.sc.pi, f.sc.map);
  MorphismState state;
  auto res = newton_step(f.sc.pi, ctx, f.sc.map, f.sc.map, state, std::nullopt, f.cfg);
  CHECK(res.record.norms.at(1) == 0.0);
  CHECK((state.op - Eigen::MatrixXd::Identity(ctx.module_dim(), ctx.module_dim()))
            .cwiseAbs()
            .maxCoeff() == 0.0);
  for (int i = 0; i < 3; ++i)
    CHECK((res.next.forms[i].coeffs() - f.sc.map.forms[i].coeffs()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("newton step contracts quadratically") {
  auto& f = fixture();
  ComplexContext ctx(f.sc.pi, f.sc.map);
  MorphismState state;
  auto res = newton_step(f.sc.pi, ctx, f.sc.map, f.tilde, state, std::nullopt, f.cfg);

  const Eigen::VectorXd beta0 = ctx.pack(f.sc.map.forms) - ctx.pack(f.tilde.forms);
  const Eigen::VectorXd beta1 = ctx.pack(res.next.forms) - ctx.pack(f.tilde.forms);
  const double b0_h3 = ctx.cochain_norm(beta0, 3);
  const double b1_h1 = ctx.cochain_norm(beta1, 1);
  const double c = b1_h1 / (b0_h3 * b0_h3);
  CHECK(b1_h1 < 0.05 * ctx.cochain_norm(beta0, 1));
  CHECK(c < 100.0);  // the reported quadratic constant stays moderate
}

TEST_CASE("smoothing at the truncation cutoff reproduces the step bitwise") {
  auto& f = fixture();
  ComplexContext ctx(f.sc.pi, f.sc.map);
  MorphismState s1, s2;
  auto plain = newton_step(f.sc.pi, ctx, f.sc.map, f.tilde, s1, std::nullopt, f.cfg);
  auto cut = newton_step(f.sc.pi, ctx, f.sc.map, f.tilde, s2,
                         double(f.sc.backend->truncation()), f.cfg);
  for (int i = 0; i < 3; ++i)
    CHECK((plain.next.forms[i].coeffs() - cut.next.forms[i].coeffs()).cwiseAbs().maxCoeff() ==
          0.0);
}

TEST_CASE("rigidity run with identical maps converges in zero steps") {
  auto& f = fixture();
  auto res = run_rigidity(f.sc.pi, f.sc.map, f.sc.map, f.cfg);
  CHECK(res.status == RunStatus::Converged);
  CHECK(executed_steps(res.report) == 0);
  CHECK((res.state.op -
         Eigen::MatrixXd::Identity(res.state.op.rows(), res.state.op.cols()))
            .cwiseAbs()
            .maxCoeff() == 0.0);
  CHECK(res.report.final_residual == 0.0);
}

TEST_CASE("rigidity run conjugates a ground-truth perturbation") {
  auto& f = fixture();
  auto res = run_rigidity(f.sc.pi, f.sc.map, f.tilde, f.cfg);
  REQUIRE(res.status == RunStatus::Converged);
  CHECK(executed_steps(res.report) <= 6);
  CHECK(res.report.final_residual <= 1e-8);
  CHECK(res.report.contraction_slope >= 1.8);
  CHECK(res.report.final_morphism_defect <= 1e-5);
  CHECK(res.report.final_chain_defect <= 1e-7);
  CHECK(std::isfinite(res.report.operator_condition));
  for (const auto& s : res.report.steps) {
    CHECK(std::isfinite(s.norms.at(1)));
    CHECK(s.homotopy_residual < 1e-5);
  }
}

TEST_CASE("rigidity rejects far-apart maps through the smallness gate") {
  auto& f = fixture();
  auto far = perturb(f.sc.pi, f.sc.map, f.k, 0.5);
  CHECK_THROWS_AS(run_rigidity(f.sc.pi, f.sc.map, far, f.cfg), GateError);
}

TEST_CASE("rigidity stalls when the step budget is too small") {
  auto& f = fixture();
  EngineConfig cfg = f.cfg;
  cfg.max_steps = 1;
  auto res = run_rigidity(f.sc.pi, f.sc.map, f.tilde, cfg);
  CHECK(res.status == RunStatus::Stalled);
}

TEST_CASE("sci driver solves the translation toy problem in one step") {
  SciProblem p;
  p.initial = Eigen::Vector3d(1.0, -2.0, 0.5);
  p.zeta = [](const Eigen::VectorXd& f) { return f; };
  p.solve = [](const Eigen::VectorXd& f) { return f; };
  p.smooth_solution = [](const Eigen::VectorXd& g, double) { return g; };
  p.apply_step = [](const Eigen::VectorXd& f, const Eigen::VectorXd& g,
                    StepRecord&) -> Eigen::VectorXd { return f - g; };
  p.norm = [](const Eigen::VectorXd& v, int) { return v.norm(); };
  p.residual = [](const Eigen::VectorXd&) { return 0.0; };
  EngineConfig cfg;
  auto res = sci_drive(p, cfg);
  CHECK(res.status == RunStatus::Converged);
  CHECK(executed_steps(res.report) == 1);
  CHECK(res.final_state.norm() == 0.0);
}

TEST_CASE("wrapped sci problem reproduces the rigidity iterates bitwise") {
  auto& f = fixture();
  auto direct = run_rigidity(f.sc.pi, f.sc.map, f.tilde, f.cfg);

  ComplexContext ctx(f.sc.pi, f.sc.map);
  auto tracker = std::make_shared<MorphismState>();
  tracker->op = Eigen::MatrixXd::Identity(ctx.module_dim(), ctx.module_dim());
  auto problem = make_rigidity_problem(f.sc.pi, ctx, f.sc.map, f.tilde, f.cfg, tracker);
  auto wrapped = sci_drive(problem, f.cfg);

  REQUIRE(direct.report.steps.size() == wrapped.report.steps.size());
  for (std::size_t i = 0; i < wrapped.report.steps.size(); ++i)
    for (int k : f.cfg.norm_ks)
      CHECK(direct.report.steps[i].norms.at(k) == wrapped.report.steps[i].norms.at(k));
}

TEST_CASE("quadratic defect scales like epsilon squared") {
  auto& f = fixture();
  ComplexContext ctx(f.sc.pi, f.sc.map);
  auto t1 = perturb(f.sc.pi, f.sc.map, f.k, 1e-2);
  auto t2 = perturb(f.sc.pi, f.sc.map, f.k, 5e-3);
  auto r1 = estimate_quadratic_defect(f.sc.pi, ctx, f.sc.map, t1, {0, 1, 2});
  auto r2 = estimate_quadratic_defect(f.sc.pi, ctx, f.sc.map, t2, {0, 1, 2});
  for (int k : {0, 1, 2}) {
    const double ratio = r1.d_beta_norms.at(k) / r2.d_beta_norms.at(k);
    CHECK(ratio >= 3.5);
    CHECK(ratio <= 4.5);
    // the ratio of ratios c_k(eps) / c_k(eps/2) is near one
    CHECK(r1.ratios.at(k) / r2.ratios.at(k) == doctest::Approx(1.0).epsilon(0.2));
  }

  auto same = estimate_quadratic_defect(f.sc.pi, ctx, f.sc.map, f.sc.map, {1});
  CHECK(same.d_beta_norms.at(1) == 0.0);
  CHECK(same.beta_sq_norms.at(1) == 0.0);
}

TEST_CASE("classical run matches the 1-form run through the exterior derivative") {
  auto& f = fixture();
  auto tilde_scalar = perturb_scalar(f.sc.pi, f.sc.scalar_map, f.k, 1e-2);
  auto classical = run_classical(f.sc.pi, f.sc.scalar_map, tilde_scalar, f.cfg);
  REQUIRE(classical.status == RunStatus::Converged);
  CHECK(executed_steps(classical.report) <= 6);
  CHECK(classical.report.final_residual <= 1e-8);
  CHECK(classical.report.contraction_slope >= 1.8);

  auto forms = run_rigidity(f.sc.pi, f.sc.map, f.tilde, f.cfg);
  REQUIRE(forms.status == RunStatus::Converged);
  double dist = 0.0;
  for (int i = 0; i < 3; ++i) {
    ScalarField h(f.sc.backend,
                  Eigen::VectorXd(classical.op * f.sc.scalar_map.hamiltonians[i].coeffs()));
    OneForm w(f.sc.backend, forms.state.op * f.sc.map.forms[i].coeffs());
    dist = std::max(dist, sobolev_norm(d(h) - w, 0));
  }
  CHECK(dist <= 1e-6);
}

TEST_CASE("identical config and seed give identical reports") {
  auto& f = fixture();
  auto r1 = run_rigidity(f.sc.pi, f.sc.map, f.tilde, f.cfg);
  auto r2 = run_rigidity(f.sc.pi, f.sc.map, f.tilde, f.cfg);
  REQUIRE(r1.report.steps.size() == r2.report.steps.size());
  for (std::size_t i = 0; i < r1.report.steps.size(); ++i) {
    for (int k : f.cfg.norm_ks)
      CHECK(r1.report.steps[i].norms.at(k) == r2.report.steps[i].norms.at(k));
    CHECK(r1.report.steps[i].flow_tolerance == r2.report.steps[i].flow_tolerance);
  }
  CHECK(r1.report.final_residual == r2.report.final_residual);
  CHECK(r1.report.final_morphism_defect == r2.report.final_morphism_defect);
}
