#include "prham/momentum.hpp"

namespace prham {

MomentumMap1::MomentumMap1(LieBialgebra alg, std::vector<OneForm> fs)
    : algebra(std::move(alg)), forms(std::move(fs)) {
  if (int(forms.size()) != algebra.dim())
    throw std::invalid_argument("MomentumMap1: one form per basis element required");
  for (const auto& f : forms) require_compatible(*forms.front().backend(), *f.backend(), "MomentumMap1");
}

OneForm MomentumMap1::at(const Eigen::VectorXd& x) const {
  if (x.size() != dim()) throw std::invalid_argument("MomentumMap1::at: dimension mismatch");
  OneForm out = OneForm::zero(backend());
  for (int i = 0; i < dim(); ++i) out += x[i] * forms[i];
  return out;
}

ScalarMomentumMap::ScalarMomentumMap(LieAlgebra alg, std::vector<ScalarField> hs)
    : algebra(std::move(alg)), hamiltonians(std::move(hs)) {
  if (int(hamiltonians.size()) != algebra.dim())
    throw std::invalid_argument("ScalarMomentumMap: one hamiltonian per basis element required");
}

MomentumMap1 from_hamiltonians(const PoissonStructure& pi, const ScalarMomentumMap& s) {
  return from_hamiltonians(pi, s, LieBialgebra::trivial(s.algebra));
}

MomentumMap1 from_hamiltonians(const PoissonStructure& pi, const ScalarMomentumMap& s,
                               const LieBialgebra& algebra) {
  if (algebra.dim() != s.dim())
    throw std::invalid_argument("from_hamiltonians: algebra dimension mismatch");
  std::vector<OneForm> forms;
  forms.reserve(s.dim());
  for (const auto& h : s.hamiltonians) {
    require_compatible(*pi.backend(), *h.backend(), "from_hamiltonians");
    forms.push_back(d(h));
  }
  return MomentumMap1(algebra, std::move(forms));
}

double generation_defect(const PoissonStructure& pi, const MomentumMap1& m,
                         const std::vector<VectorField>& targets) {
  if (targets.size() != m.forms.size())
    throw std::invalid_argument("generation_defect: target count mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < targets.size(); ++i)
    worst = std::max(worst, l2_norm(anchor(pi, m.forms[i]) - targets[i]));
  return worst;
}

double hom_defect(const PoissonStructure& pi, const MomentumMap1& m) {
  const int n = m.dim();
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      OneForm lhs = koszul_bracket(pi, m.forms[i], m.forms[j]);
      for (int k = 0; k < n; ++k) {
        const double c = m.algebra.base().c(i, j, k);
        if (c != 0.0) lhs -= c * m.forms[k];
      }
      worst = std::max(worst, sobolev_norm(lhs, 0));
    }
  return worst;
}

double chain_defect(const MomentumMap1& m) {
  const int n = m.dim();
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    TwoForm lhs = d(m.forms[i]);
    for (int j = 0; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        const double c = m.algebra.d(i, j, k);
        if (c != 0.0) lhs -= c * wedge11(m.forms[j], m.forms[k]);
      }
    worst = std::max(worst, sobolev_norm(lhs, 0));
  }
  return worst;
}

double equivariance_defect(const PoissonStructure& pi, const ScalarMomentumMap& s) {
  const int n = s.dim();
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      ScalarField res = poisson_bracket(pi, s.hamiltonians[i], s.hamiltonians[j]);
      for (int k = 0; k < n; ++k) {
        const double c = s.algebra.c(i, j, k);
        if (c != 0.0) res -= c * s.hamiltonians[k];
      }
      res.coeffs()[0] = 0.0;  // the constant is removable
      worst = std::max(worst, sobolev_norm(res, 0));
    }
  return worst;
}

MomentumMap1 perturb(const PoissonStructure& pi, const MomentumMap1& m, const ScalarField& k,
                     double eps, int steps, FlowOperator* conjugator) {
  require_compatible(*pi.backend(), *m.backend(), "perturb");
  require_compatible(*pi.backend(), *k.backend(), "perturb");
  const FlowOperator op = flow_operator(pi, d(eps * k), 1.0, steps);
  std::vector<OneForm> forms;
  forms.reserve(m.forms.size());
  for (const auto& f : m.forms) forms.push_back(op.apply(f));
  if (conjugator) *conjugator = op;
  return MomentumMap1(m.algebra, std::move(forms));
}

Eigen::MatrixXd hamiltonian_matrix(const PoissonStructure& pi, const ScalarField& s) {
  // {S, f} = p (S_1 f_2 - S_2 f_1) evaluated on the grid; assembled column
  // by column on unit coefficient vectors
  const auto& b = pi.backend();
  const Grid2 ds = b->synth_form(b->d_scalar_ext(b->extend_scalar(s.coeffs())));
  const Eigen::VectorXd xs1 = pi.density_values().cwiseProduct(ds.col(0));
  const Eigen::VectorXd xs2 = pi.density_values().cwiseProduct(ds.col(1));
  const int dim = b->scalar_dim();
  Eigen::MatrixXd m(dim, dim);
  Eigen::VectorXd unit = Eigen::VectorXd::Zero(dim);
  for (int j = 0; j < dim; ++j) {
    unit[j] = 1.0;
    const Grid2 df = b->synth_form(b->d_scalar_ext(b->extend_scalar(unit)));
    m.col(j) = b->project_scalar(
        b->analyze_scalar(xs1.cwiseProduct(df.col(1)) - xs2.cwiseProduct(df.col(0))));
    unit[j] = 0.0;
  }
  return m;
}

Eigen::MatrixXd scalar_flow_matrix(const PoissonStructure& pi, const ScalarField& s, double t,
                                   int steps) {
  return rk4_exponential(hamiltonian_matrix(pi, s), t, steps);
}

ScalarMomentumMap perturb_scalar(const PoissonStructure& pi, const ScalarMomentumMap& s,
                                 const ScalarField& k, double eps, int steps) {
  const Eigen::MatrixXd flow = scalar_flow_matrix(pi, eps * k, 1.0, steps);
  std::vector<ScalarField> hs;
  hs.reserve(s.hamiltonians.size());
  for (const auto& h : s.hamiltonians)
    hs.emplace_back(pi.backend(), Eigen::VectorXd(flow * h.coeffs()));
  return ScalarMomentumMap(s.algebra, std::move(hs));
}

}  // namespace prham
