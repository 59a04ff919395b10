#include "prham/poisson.hpp"

#include <cmath>

namespace prham {

namespace {

Grid2 anchor_grid(const Eigen::VectorXd& pvals, const Grid2& w) {
  Grid2 x(w.rows(), 2);
  x.col(0) = -pvals.cwiseProduct(w.col(1));
  x.col(1) = pvals.cwiseProduct(w.col(0));
  return x;
}

void check_finite(const Eigen::VectorXd& v, const char* what) {
  if (!v.allFinite()) throw FlowDivergenceError(std::string(what) + ": non-finite values");
}

template <typename ApplyFn, typename State>
State rk4(const ApplyFn& f, State y, double t, int steps, const char* what) {
  if (steps < 1) throw std::invalid_argument("rk4: steps must be positive");
  const double h = t / steps;
  for (int s = 0; s < steps; ++s) {
    State k1 = f(y);
    State k2 = f(y + (h / 2) * k1);
    State k3 = f(y + (h / 2) * k2);
    State k4 = f(y + h * k3);
    y += (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  if (!y.allFinite()) throw FlowDivergenceError(std::string(what) + ": integration diverged");
  return y;
}

}  // namespace

PoissonStructure::PoissonStructure(BackendPtr b, ScalarField density)
    : b_(std::move(b)), p_(std::move(density)) {
  require_compatible(*b_, *p_.backend(), "PoissonStructure");
  pvals_ = b_->synth_scalar(b_->extend_scalar(p_.coeffs()));
}

PoissonStructure PoissonStructure::symplectic(BackendPtr b) {
  auto one = ScalarField::constant(b, 1.0);
  return PoissonStructure(std::move(b), std::move(one));
}

VectorField anchor(const PoissonStructure& pi, const OneForm& w) {
  require_compatible(*pi.backend(), *w.backend(), "anchor");
  const auto& b = pi.backend();
  const Grid2 vw = b->synth_form(b->extend_form(w.coeffs()));
  return VectorField(b, anchor_grid(pi.density_values(), vw));
}

ScalarField poisson_bracket(const PoissonStructure& pi, const ScalarField& f,
                            const ScalarField& g) {
  require_compatible(*pi.backend(), *f.backend(), "poisson_bracket");
  require_compatible(*pi.backend(), *g.backend(), "poisson_bracket");
  const auto& b = pi.backend();
  const Grid2 df = b->synth_form(b->d_scalar_ext(b->extend_scalar(f.coeffs())));
  const Grid2 dg = b->synth_form(b->d_scalar_ext(b->extend_scalar(g.coeffs())));
  const Eigen::VectorXd vals = pi.density_values().cwiseProduct(
      df.col(0).cwiseProduct(dg.col(1)) - df.col(1).cwiseProduct(dg.col(0)));
  return ScalarField(b, b->project_scalar(b->analyze_scalar(vals)));
}

KoszulOp::KoszulOp(const PoissonStructure& pi, const OneForm& a)
    : b_(pi.backend()), pvals_(pi.density_values()) {
  require_compatible(*b_, *a.backend(), "koszul_bracket");
  aM_ = b_->extend_form(a.coeffs());
  va_ = b_->synth_form(aM_);
  xa_ = anchor_grid(pvals_, va_);
  dens_da_ = b_->synth_scalar(b_->curl_density_ext(aM_));
}

Eigen::VectorXd KoszulOp::apply_ext(const Eigen::VectorXd& bM) const {
  const Grid2 vb = b_->synth_form(bM);
  const Grid2 xb = anchor_grid(pvals_, vb);
  const Eigen::VectorXd dens_db = b_->synth_scalar(b_->curl_density_ext(bM));

  // L_{Xa} b = iota_Xa db + d(iota_Xa b)
  Grid2 iota(vb.rows(), 2);
  iota.col(0) = -dens_db.cwiseProduct(xa_.col(1));
  iota.col(1) = dens_db.cwiseProduct(xa_.col(0));
  Eigen::VectorXd term = b_->analyze_form(iota);
  term += b_->d_scalar_ext(b_->analyze_scalar(
      xa_.col(0).cwiseProduct(vb.col(0)) + xa_.col(1).cwiseProduct(vb.col(1))));

  // - L_{Xb} a
  iota.col(0) = -dens_da_.cwiseProduct(xb.col(1));
  iota.col(1) = dens_da_.cwiseProduct(xb.col(0));
  term -= b_->analyze_form(iota);
  term -= b_->d_scalar_ext(b_->analyze_scalar(
      xb.col(0).cwiseProduct(va_.col(0)) + xb.col(1).cwiseProduct(va_.col(1))));

  // - d(pi(a,b))
  const Eigen::VectorXd pab = pvals_.cwiseProduct(
      va_.col(0).cwiseProduct(vb.col(1)) - va_.col(1).cwiseProduct(vb.col(0)));
  term -= b_->d_scalar_ext(b_->analyze_scalar(pab));
  return term;
}

OneForm KoszulOp::apply(const OneForm& b) const {
  require_compatible(*b_, *b.backend(), "koszul_bracket");
  return OneForm(b_, b_->project_form(apply_ext(b_->extend_form(b.coeffs()))));
}

OneForm koszul_bracket(const PoissonStructure& pi, const OneForm& a, const OneForm& b) {
  return KoszulOp(pi, a).apply(b);
}

Eigen::MatrixXd koszul_matrix(const PoissonStructure& pi, const OneForm& a) {
  const auto& b = pi.backend();
  const KoszulOp op(pi, a);
  const int dim = b->form_dim();
  Eigen::MatrixXd m(dim, dim);
  Eigen::VectorXd unit = Eigen::VectorXd::Zero(dim);
  for (int j = 0; j < dim; ++j) {
    unit[j] = 1.0;
    m.col(j) = b->project_form(op.apply_ext(b->extend_form(unit)));
    unit[j] = 0.0;
  }
  return m;
}

OneForm flow_oneform(const PoissonStructure& pi, const OneForm& a, const OneForm& b0, double t,
                     int steps) {
  require_compatible(*pi.backend(), *b0.backend(), "flow_oneform");
  const Eigen::MatrixXd m = koszul_matrix(pi, a);
  check_finite(m.reshaped(), "flow_oneform");
  auto f = [&](const Eigen::VectorXd& y) -> Eigen::VectorXd { return m * y; };
  return OneForm(pi.backend(), rk4(f, Eigen::VectorXd(b0.coeffs()), t, steps, "flow_oneform"));
}

Eigen::MatrixXd rk4_exponential(const Eigen::MatrixXd& a, double t, int steps) {
  if (steps < 1) throw std::invalid_argument("rk4_exponential: steps must be positive");
  const int dim = int(a.rows());
  const double h = t / steps;
  // one RK4 step is the degree-4 polynomial I + hA + .. + (hA)^4/24; the
  // full operator is its `steps`-th power (binary powering)
  const Eigen::MatrixXd a1 = h * a;
  const Eigen::MatrixXd a2 = a1 * a1;
  Eigen::MatrixXd stepm = Eigen::MatrixXd::Identity(dim, dim) + a1 + a2 / 2.0 + (a2 * a1) / 6.0 +
                          (a2 * a2) / 24.0;
  Eigen::MatrixXd acc = Eigen::MatrixXd::Identity(dim, dim);
  for (int e = steps; e > 0; e >>= 1) {
    if (e & 1) acc = acc * stepm;
    if (e > 1) stepm = stepm * stepm;
  }
  if (!acc.allFinite()) throw FlowDivergenceError("rk4_exponential: integration diverged");
  return acc;
}

FlowOperator flow_operator(const PoissonStructure& pi, const OneForm& a, double t, int steps) {
  const Eigen::MatrixXd m = koszul_matrix(pi, a);
  check_finite(m.reshaped(), "flow_operator");
  FlowOperator out;
  out.backend = pi.backend();
  out.time = t;
  out.steps = steps;
  out.matrix = rk4_exponential(m, t, steps);
  return out;
}

TwoForm koszul_bracket2(const PoissonStructure& pi, const OneForm& a, const TwoForm& w) {
  require_compatible(*pi.backend(), *a.backend(), "koszul_bracket2");
  require_compatible(*pi.backend(), *w.backend(), "koszul_bracket2");
  const auto& b = pi.backend();
  const Eigen::VectorXd aM = b->extend_form(a.coeffs());
  const Grid2 va = b->synth_form(aM);
  const Grid2 xa = anchor_grid(pi.density_values(), va);
  const Eigen::VectorXd dens_w = b->synth_scalar(b->extend_scalar(w.coeffs()));

  // L_X w = d(iota_X w) in top degree
  Grid2 iota(va.rows(), 2);
  iota.col(0) = -dens_w.cwiseProduct(xa.col(1));
  iota.col(1) = dens_w.cwiseProduct(xa.col(0));
  Eigen::VectorXd out = b->curl_density_ext(b->analyze_form(iota));

  // + 2 p dens(da) w  (trace of the tensorial part acting on Lambda^2)
  const Eigen::VectorXd dens_da = b->synth_scalar(b->curl_density_ext(aM));
  out += b->analyze_scalar(
      2.0 * pi.density_values().cwiseProduct(dens_da).cwiseProduct(dens_w));
  return TwoForm(b, b->project_scalar(out));
}

TwoForm flow_twoform(const PoissonStructure& pi, const OneForm& a, const TwoForm& w0, double t,
                     int steps) {
  require_compatible(*pi.backend(), *w0.backend(), "flow_twoform");
  auto f = [&](const Eigen::VectorXd& y) -> Eigen::VectorXd {
    return koszul_bracket2(pi, a, TwoForm(pi.backend(), y)).coeffs();
  };
  return TwoForm(pi.backend(), rk4(f, Eigen::VectorXd(w0.coeffs()), t, steps, "flow_twoform"));
}

double flow_tolerance_estimate(const PoissonStructure& pi, const OneForm& a, double t, int steps,
                               const OneForm& probe) {
  const Eigen::MatrixXd m = koszul_matrix(pi, a);
  auto f = [&](const Eigen::VectorXd& y) -> Eigen::VectorXd { return m * y; };
  const Eigen::VectorXd coarse = rk4(f, Eigen::VectorXd(probe.coeffs()), t, steps, "flow");
  const Eigen::VectorXd fine = rk4(f, Eigen::VectorXd(probe.coeffs()), t, 2 * steps, "flow");
  return sobolev_norm(OneForm(pi.backend(), coarse - fine), 1);
}

}  // namespace prham
