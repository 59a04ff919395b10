#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "prham/commands.hpp"
#include "prham/engine.hpp"
#include "prham/scenario.hpp"

namespace py = pybind11;
using namespace prham;

namespace {

py::dict step_dict(const StepRecord& s) {
  py::dict d;
  d["n"] = s.n;
  py::dict norms;
  for (const auto& [k, v] : s.norms) norms[py::int_(k)] = v;
  d["norms"] = norms;
  d["contraction_ratio"] = s.contraction_ratio;
  d["homotopy_residual"] = s.homotopy_residual;
  d["flow_tolerance"] = s.flow_tolerance;
  d["d_commutation_defect"] = s.d_commutation_defect;
  return d;
}

py::dict report_dict(const IterationReport& rep) {
  py::dict d;
  d["status"] = std::string(to_string(rep.status));
  d["status_note"] = rep.status_note;
  py::list steps;
  for (const auto& s : rep.steps) steps.append(step_dict(s));
  d["steps"] = steps;
  d["final_residual"] = rep.final_residual;
  d["final_morphism_defect"] = rep.final_morphism_defect;
  d["final_chain_defect"] = rep.final_chain_defect;
  d["contraction_slope"] = rep.contraction_slope;
  d["fitted_delta"] = rep.fitted_delta;
  d["quadratic_constant"] = rep.quadratic_constant;
  d["operator_condition"] = rep.operator_condition;
  d["wall_clock_s"] = rep.wall_clock_s;
  return d;
}

ScalarField make_scalar(BackendPtr b, const Eigen::VectorXd& coeffs) {
  return ScalarField(std::move(b), coeffs);
}

OneForm make_oneform(BackendPtr b, const Eigen::VectorXd& coeffs) {
  return OneForm(std::move(b), coeffs);
}

}  // namespace

PYBIND11_MODULE(prham, m) {
  m.doc() = "pseudospectral rigidity toolkit for infinitesimal momentum maps on T^2 and S^2";

  py::register_exception<GateError>(m, "GateError");
  py::register_exception<FlowDivergenceError>(m, "FlowDivergenceError");
  py::register_exception<NotSemisimpleError>(m, "NotSemisimpleError");
  py::register_exception<ConditioningError>(m, "ConditioningError");

  py::class_<Backend, std::shared_ptr<Backend>>(m, "Backend")
      .def_property_readonly("kind",
                             [](const Backend& b) {
                               return b.kind() == BackendKind::Torus2 ? "torus2" : "sphere2";
                             })
      .def_property_readonly("truncation", &Backend::truncation)
      .def_property_readonly("padding", &Backend::padding)
      .def_property_readonly("scalar_dim", [](const Backend& b) { return b.scalar_dim(); })
      .def_property_readonly("form_dim", [](const Backend& b) { return b.form_dim(); })
      .def_property_readonly("grid_size", &Backend::grid_size)
      .def_property_readonly("grid_coords", [](const Backend& b) { return b.grid_coords(); })
      .def("__repr__", [](const Backend& b) {
        return std::string("<backend ") +
               (b.kind() == BackendKind::Torus2 ? "torus2" : "sphere2") + " N=" +
               std::to_string(b.truncation()) + ">";
      });

  m.def("torus", &Backend::torus, py::arg("truncation"), py::arg("padding") = 2);
  m.def("sphere", &Backend::sphere, py::arg("truncation"), py::arg("padding") = 2);

  py::class_<ScalarField>(m, "ScalarField")
      .def(py::init(&make_scalar), py::arg("backend"), py::arg("coeffs"))
      .def_property_readonly("backend", &ScalarField::backend)
      .def_property_readonly("coeffs",
                             [](const ScalarField& f) -> Eigen::VectorXd { return f.coeffs(); })
      .def_property_readonly("mean", &ScalarField::mean)
      .def("__add__", [](const ScalarField& a, const ScalarField& b) { return a + b; })
      .def("__sub__", [](const ScalarField& a, const ScalarField& b) { return a - b; })
      .def("__rmul__", [](const ScalarField& a, double s) { return s * a; });

  py::class_<OneForm>(m, "OneForm")
      .def(py::init(&make_oneform), py::arg("backend"), py::arg("coeffs"))
      .def_property_readonly("backend", &OneForm::backend)
      .def_property_readonly("coeffs",
                             [](const OneForm& f) -> Eigen::VectorXd { return f.coeffs(); })
      .def("__add__", [](const OneForm& a, const OneForm& b) { return a + b; })
      .def("__sub__", [](const OneForm& a, const OneForm& b) { return a - b; })
      .def("__rmul__", [](const OneForm& a, double s) { return s * a; });

  py::class_<TwoForm>(m, "TwoForm")
      .def_property_readonly("backend", &TwoForm::backend)
      .def_property_readonly("density", &TwoForm::density)
      .def_property_readonly("coeffs",
                             [](const TwoForm& f) -> Eigen::VectorXd { return f.coeffs(); })
      .def("__sub__", [](const TwoForm& a, const TwoForm& b) { return a - b; });

  py::class_<VectorField>(m, "VectorField")
      .def_property_readonly("backend", &VectorField::backend)
      .def_property_readonly("values",
                             [](const VectorField& v) -> Grid2 { return v.values(); })
      .def("cartesian_values", &VectorField::cartesian_values)
      .def("__sub__", [](const VectorField& a, const VectorField& b) { return a - b; });

  m.def("zero_scalar", &ScalarField::zero);
  m.def("constant", &ScalarField::constant);
  m.def("zero_oneform", &OneForm::zero);
  m.def("d_scalar", [](const ScalarField& f) { return d(f); });
  m.def("d_oneform", [](const OneForm& w) { return d(w); });
  m.def("wedge11", &wedge11);
  m.def("contract", py::overload_cast<const VectorField&, const OneForm&>(&contract));
  m.def("contract", py::overload_cast<const VectorField&, const TwoForm&>(&contract));
  m.def("lie_derivative", &lie_derivative);
  m.def("sobolev_norm", py::overload_cast<const ScalarField&, int>(&sobolev_norm));
  m.def("sobolev_norm", py::overload_cast<const OneForm&, int>(&sobolev_norm));
  m.def("sobolev_norm", py::overload_cast<const TwoForm&, int>(&sobolev_norm));
  m.def("smooth", py::overload_cast<const ScalarField&, double>(&smooth));
  m.def("smooth", py::overload_cast<const OneForm&, double>(&smooth));
  m.def("l2_norm", &l2_norm);
  m.def("vf_bracket", &vf_bracket);
  m.def(
      "random_scalar",
      [](BackendPtr b, double max_degree, std::uint64_t seed) {
        std::mt19937_64 rng(seed);
        return random_scalar(std::move(b), max_degree, rng);
      },
      py::arg("backend"), py::arg("max_degree"), py::arg("seed"));
  m.def(
      "random_oneform",
      [](BackendPtr b, double max_degree, std::uint64_t seed) {
        std::mt19937_64 rng(seed);
        return random_oneform(std::move(b), max_degree, rng);
      },
      py::arg("backend"), py::arg("max_degree"), py::arg("seed"));

  py::class_<LieAlgebra>(m, "LieAlgebra")
      .def(py::init<int, std::vector<double>>(), py::arg("dim"), py::arg("structure_constants"))
      .def_static("so3", &LieAlgebra::so3)
      .def_static("abelian", &LieAlgebra::abelian)
      .def_property_readonly("dim", &LieAlgebra::dim)
      .def("c", &LieAlgebra::c)
      .def("bracket", &LieAlgebra::bracket)
      .def("jacobi_defect", &LieAlgebra::jacobi_defect);

  py::class_<LieBialgebra>(m, "LieBialgebra")
      .def(py::init<LieAlgebra, std::vector<double>>(), py::arg("base"), py::arg("cobracket"))
      .def_static("trivial", &LieBialgebra::trivial)
      .def_static("coboundary", &LieBialgebra::coboundary)
      .def_property_readonly("dim", &LieBialgebra::dim)
      .def("cocycle_defect", &LieBialgebra::cocycle_defect)
      .def("dual_bracket", &LieBialgebra::dual_bracket);

  py::class_<KillingData>(m, "KillingData")
      .def_readonly("killing", &KillingData::killing)
      .def_readonly("dual_basis", &KillingData::dual_basis)
      .def_readonly("semisimple", &KillingData::semisimple);
  m.def("casimir_data", &casimir_data);

  py::class_<PoissonStructure>(m, "PoissonStructure")
      .def(py::init<BackendPtr, ScalarField>(), py::arg("backend"), py::arg("density"))
      .def_static("symplectic", &PoissonStructure::symplectic)
      .def_property_readonly("backend", &PoissonStructure::backend)
      .def_property_readonly("density", &PoissonStructure::density);

  m.def("anchor", &anchor);
  m.def("poisson_bracket", &poisson_bracket);
  m.def("koszul_bracket", &koszul_bracket);
  m.def("koszul_matrix", &koszul_matrix);
  m.def("flow_oneform", &flow_oneform, py::arg("pi"), py::arg("generator"), py::arg("beta0"),
        py::arg("t"), py::arg("steps") = 64);
  m.def(
      "flow_operator",
      [](const PoissonStructure& pi, const OneForm& a, double t, int steps) {
        return flow_operator(pi, a, t, steps).matrix;
      },
      py::arg("pi"), py::arg("generator"), py::arg("t"), py::arg("steps") = 64);
  m.def("flow_twoform", &flow_twoform, py::arg("pi"), py::arg("generator"), py::arg("w0"),
        py::arg("t"), py::arg("steps") = 64);

  py::class_<MomentumMap1>(m, "MomentumMap1")
      .def(py::init<LieBialgebra, std::vector<OneForm>>(), py::arg("algebra"), py::arg("forms"))
      .def_property_readonly("dim", &MomentumMap1::dim)
      .def_readonly("forms", &MomentumMap1::forms)
      .def_readonly("algebra", &MomentumMap1::algebra);

  py::class_<ScalarMomentumMap>(m, "ScalarMomentumMap")
      .def(py::init<LieAlgebra, std::vector<ScalarField>>(), py::arg("algebra"),
           py::arg("hamiltonians"))
      .def_property_readonly("dim", &ScalarMomentumMap::dim)
      .def_readonly("hamiltonians", &ScalarMomentumMap::hamiltonians);

  m.def("from_hamiltonians",
        py::overload_cast<const PoissonStructure&, const ScalarMomentumMap&>(&from_hamiltonians));
  m.def("generation_defect", &generation_defect);
  m.def("hom_defect", &hom_defect);
  m.def("chain_defect", &chain_defect);
  m.def("equivariance_defect", &equivariance_defect);
  m.def(
      "perturb",
      [](const PoissonStructure& pi, const MomentumMap1& mm, const ScalarField& k, double eps,
         int steps) { return perturb(pi, mm, k, eps, steps); },
      py::arg("pi"), py::arg("map"), py::arg("k"), py::arg("eps"), py::arg("steps") = 64);
  m.def("perturb_scalar", &perturb_scalar, py::arg("pi"), py::arg("map"), py::arg("k"),
        py::arg("eps"), py::arg("steps") = 64);

  py::class_<SphereScenario>(m, "SphereScenario")
      .def_readonly("backend", &SphereScenario::backend)
      .def_readonly("pi", &SphereScenario::pi)
      .def_readonly("scalar_map", &SphereScenario::scalar_map)
      .def_readonly("map", &SphereScenario::map)
      .def_readonly("targets", &SphereScenario::targets);
  m.def("sphere_so3_scenario", &sphere_so3_scenario, py::arg("truncation"),
        py::arg("padding") = 2);

  py::class_<TorusScenario>(m, "TorusScenario")
      .def_readonly("backend", &TorusScenario::backend)
      .def_readonly("pi", &TorusScenario::pi)
      .def_readonly("map", &TorusScenario::map)
      .def_readonly("targets", &TorusScenario::targets);
  m.def("torus_abelian_scenario", &torus_abelian_scenario, py::arg("truncation"),
        py::arg("padding") = 2);
  m.def("perturbation_generator", &perturbation_generator, py::arg("backend"), py::arg("seed"));

  py::class_<ComplexContext>(m, "ComplexContext")
      .def(py::init([](const PoissonStructure& pi, const MomentumMap1& model) {
             return ComplexContext(pi, model);
           }),
           py::arg("pi"), py::arg("model"))
      .def(py::init([](const PoissonStructure& pi, const ScalarMomentumMap& model) {
             return ComplexContext(pi, model);
           }),
           py::arg("pi"), py::arg("model"))
      .def_property_readonly("module_dim", &ComplexContext::module_dim)
      .def_property_readonly("d0", &ComplexContext::d0_matrix)
      .def_property_readonly("d1", &ComplexContext::d1_matrix)
      .def_property_readonly("d2", &ComplexContext::d2_matrix)
      .def_property_readonly("h0", &ComplexContext::h0_matrix)
      .def_property_readonly("h1", &ComplexContext::h1_matrix)
      .def_property_readonly("d1d0_residual", &ComplexContext::d1d0_residual)
      .def_property_readonly("d2d1_residual", &ComplexContext::d2d1_residual)
      .def("homotopy_residual", &ComplexContext::homotopy_residual)
      .def("cochain_norm", &ComplexContext::cochain_norm);

  py::class_<EngineConfig>(m, "EngineConfig")
      .def(py::init<>())
      .def_readwrite("tol", &EngineConfig::tol)
      .def_readwrite("max_steps", &EngineConfig::max_steps)
      .def_readwrite("steps_per_unit", &EngineConfig::steps_per_unit)
      .def_readwrite("smoothing", &EngineConfig::smoothing)
      .def_readwrite("smoothing_t0", &EngineConfig::smoothing_t0)
      .def_readwrite("validate_tol", &EngineConfig::validate_tol)
      .def_readwrite("max_near_norm", &EngineConfig::max_near_norm)
      .def_readwrite("max_far_norm", &EngineConfig::max_far_norm)
      .def_readwrite("seed", &EngineConfig::seed)
      .def_readwrite("freeze_at_reference", &EngineConfig::freeze_at_reference);

  m.def(
      "run_rigidity",
      [](const PoissonStructure& pi, const MomentumMap1& reference, const MomentumMap1& tilde,
         const EngineConfig& cfg) {
        auto res = run_rigidity(pi, reference, tilde, cfg);
        py::dict out = report_dict(res.report);
        out["operator"] = res.state.op;
        return out;
      },
      py::arg("pi"), py::arg("reference"), py::arg("tilde"),
      py::arg("config") = EngineConfig());
  m.def(
      "run_classical",
      [](const PoissonStructure& pi, const ScalarMomentumMap& reference,
         const ScalarMomentumMap& tilde, const EngineConfig& cfg) {
        auto res = run_classical(pi, reference, tilde, cfg);
        py::dict out = report_dict(res.report);
        out["operator"] = res.op;
        return out;
      },
      py::arg("pi"), py::arg("reference"), py::arg("tilde"),
      py::arg("config") = EngineConfig());
  m.def(
      "estimate_quadratic_defect",
      [](const PoissonStructure& pi, const ComplexContext& ctx, const MomentumMap1& a,
         const MomentumMap1& b, const std::vector<int>& ks) {
        auto rep = estimate_quadratic_defect(pi, ctx, a, b, ks);
        py::dict out;
        out["d_beta_norms"] = rep.d_beta_norms;
        out["beta_sq_norms"] = rep.beta_sq_norms;
        out["ratios"] = rep.ratios;
        return out;
      },
      py::arg("pi"), py::arg("ctx"), py::arg("a"), py::arg("b"),
      py::arg("ks") = std::vector<int>{0, 1, 2});
}
