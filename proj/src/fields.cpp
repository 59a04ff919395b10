#include "prham/fields.hpp"

#include <cmath>

namespace prham {

namespace {
void check_size(const Eigen::VectorXd& c, int want, const char* what) {
  if (c.size() != want) throw std::invalid_argument(std::string(what) + ": bad coefficient size");
}

double weighted_norm(const Eigen::VectorXd& c, const Eigen::VectorXd& lam, int k) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < c.size(); ++i) s += std::pow(1.0 + lam[i], k) * c[i] * c[i];
  return std::sqrt(s);
}

Eigen::VectorXd cutoff(const Eigen::VectorXd& c, const Eigen::VectorXd& deg, double t) {
  Eigen::VectorXd out = c;
  for (Eigen::Index i = 0; i < c.size(); ++i)
    if (deg[i] > t) out[i] = 0.0;
  return out;
}
}  // namespace

ScalarField::ScalarField(BackendPtr b, Eigen::VectorXd coeffs) : b_(std::move(b)), c_(std::move(coeffs)) {
  check_size(c_, b_->scalar_dim(), "ScalarField");
}
ScalarField ScalarField::zero(BackendPtr b) {
  auto dim = b->scalar_dim();
  return ScalarField(std::move(b), Eigen::VectorXd::Zero(dim));
}
ScalarField ScalarField::constant(BackendPtr b, double value) {
  auto f = zero(std::move(b));
  f.coeffs()[0] = value;
  return f;
}
ScalarField& ScalarField::operator+=(const ScalarField& o) {
  require_compatible(*b_, *o.b_, "scalar +");
  c_ += o.c_;
  return *this;
}
ScalarField& ScalarField::operator-=(const ScalarField& o) {
  require_compatible(*b_, *o.b_, "scalar -");
  c_ -= o.c_;
  return *this;
}
ScalarField& ScalarField::operator*=(double s) {
  c_ *= s;
  return *this;
}

OneForm::OneForm(BackendPtr b, Eigen::VectorXd coeffs) : b_(std::move(b)), c_(std::move(coeffs)) {
  check_size(c_, b_->form_dim(), "OneForm");
}
OneForm OneForm::zero(BackendPtr b) {
  auto dim = b->form_dim();
  return OneForm(std::move(b), Eigen::VectorXd::Zero(dim));
}
OneForm& OneForm::operator+=(const OneForm& o) {
  require_compatible(*b_, *o.b_, "oneform +");
  c_ += o.c_;
  return *this;
}
OneForm& OneForm::operator-=(const OneForm& o) {
  require_compatible(*b_, *o.b_, "oneform -");
  c_ -= o.c_;
  return *this;
}
OneForm& OneForm::operator*=(double s) {
  c_ *= s;
  return *this;
}

TwoForm::TwoForm(BackendPtr b, Eigen::VectorXd coeffs) : b_(std::move(b)), c_(std::move(coeffs)) {
  check_size(c_, b_->scalar_dim(), "TwoForm");
}
TwoForm TwoForm::zero(BackendPtr b) {
  auto dim = b->scalar_dim();
  return TwoForm(std::move(b), Eigen::VectorXd::Zero(dim));
}
TwoForm& TwoForm::operator+=(const TwoForm& o) {
  require_compatible(*b_, *o.b_, "twoform +");
  c_ += o.c_;
  return *this;
}
TwoForm& TwoForm::operator-=(const TwoForm& o) {
  require_compatible(*b_, *o.b_, "twoform -");
  c_ -= o.c_;
  return *this;
}
TwoForm& TwoForm::operator*=(double s) {
  c_ *= s;
  return *this;
}

VectorField::VectorField(BackendPtr b, Grid2 frame_values)
    : b_(std::move(b)), v_(std::move(frame_values)) {
  if (v_.rows() != b_->grid_size()) throw std::invalid_argument("VectorField: bad grid size");
}
VectorField VectorField::zero(BackendPtr b) {
  auto n = b->grid_size();
  return VectorField(std::move(b), Grid2::Zero(n, 2));
}
VectorField& VectorField::operator+=(const VectorField& o) {
  require_compatible(*b_, *o.b_, "vector +");
  v_ += o.v_;
  return *this;
}
VectorField& VectorField::operator-=(const VectorField& o) {
  require_compatible(*b_, *o.b_, "vector -");
  v_ -= o.v_;
  return *this;
}

Eigen::MatrixXd VectorField::cartesian_values() const {
  if (b_->kind() != BackendKind::Sphere2)
    throw std::invalid_argument("cartesian_values: sphere backend only");
  const auto& coords = b_->grid_coords();
  const auto th = coords.col(0).array(), ph = coords.col(1).array();
  Eigen::MatrixXd out(v_.rows(), 3);
  out.col(0) = v_.col(0).array() * th.cos() * ph.cos() - v_.col(1).array() * ph.sin();
  out.col(1) = v_.col(0).array() * th.cos() * ph.sin() + v_.col(1).array() * ph.cos();
  out.col(2) = -v_.col(0).array() * th.sin();
  return out;
}

OneForm d(const ScalarField& f) {
  const auto& b = f.backend();
  return OneForm(b, b->project_form(b->d_scalar_ext(b->extend_scalar(f.coeffs()))));
}

TwoForm d(const OneForm& w) {
  const auto& b = w.backend();
  return TwoForm(b, b->project_scalar(b->curl_density_ext(b->extend_form(w.coeffs()))));
}

TwoForm wedge11(const OneForm& a, const OneForm& b) {
  require_compatible(*a.backend(), *b.backend(), "wedge11");
  const auto& bk = a.backend();
  const Grid2 va = bk->synth_form(bk->extend_form(a.coeffs()));
  const Grid2 vb = bk->synth_form(bk->extend_form(b.coeffs()));
  const Eigen::VectorXd dens =
      va.col(0).cwiseProduct(vb.col(1)) - va.col(1).cwiseProduct(vb.col(0));
  return TwoForm(bk, bk->project_scalar(bk->analyze_scalar(dens)));
}

ScalarField contract(const VectorField& x, const OneForm& w) {
  require_compatible(*x.backend(), *w.backend(), "contract");
  const auto& bk = w.backend();
  const Grid2 vw = bk->synth_form(bk->extend_form(w.coeffs()));
  const Eigen::VectorXd vals =
      x.values().col(0).cwiseProduct(vw.col(0)) + x.values().col(1).cwiseProduct(vw.col(1));
  return ScalarField(bk, bk->project_scalar(bk->analyze_scalar(vals)));
}

OneForm contract(const VectorField& x, const TwoForm& w) {
  require_compatible(*x.backend(), *w.backend(), "contract");
  const auto& bk = w.backend();
  const Eigen::VectorXd dens = bk->synth_scalar(bk->extend_scalar(w.coeffs()));
  Grid2 vals(dens.size(), 2);
  vals.col(0) = -dens.cwiseProduct(x.values().col(1));
  vals.col(1) = dens.cwiseProduct(x.values().col(0));
  return OneForm(bk, bk->project_form(bk->analyze_form(vals)));
}

OneForm lie_derivative(const VectorField& x, const OneForm& w) {
  require_compatible(*x.backend(), *w.backend(), "lie_derivative");
  return contract(x, d(w)) + d(contract(x, w));
}

ScalarField pointwise(const ScalarField& a, const ScalarField& b) {
  require_compatible(*a.backend(), *b.backend(), "pointwise");
  const auto& bk = a.backend();
  const Eigen::VectorXd va = bk->synth_scalar(bk->extend_scalar(a.coeffs()));
  const Eigen::VectorXd vb = bk->synth_scalar(bk->extend_scalar(b.coeffs()));
  return ScalarField(bk, bk->project_scalar(bk->analyze_scalar(va.cwiseProduct(vb))));
}

OneForm pointwise(const ScalarField& a, const OneForm& w) {
  require_compatible(*a.backend(), *w.backend(), "pointwise");
  const auto& bk = a.backend();
  const Eigen::VectorXd va = bk->synth_scalar(bk->extend_scalar(a.coeffs()));
  Grid2 vw = bk->synth_form(bk->extend_form(w.coeffs()));
  vw.col(0) = vw.col(0).cwiseProduct(va);
  vw.col(1) = vw.col(1).cwiseProduct(va);
  return OneForm(bk, bk->project_form(bk->analyze_form(vw)));
}

double sobolev_norm(const ScalarField& f, int k) {
  return weighted_norm(f.coeffs(), f.backend()->scalar_lambda(), k);
}
double sobolev_norm(const OneForm& w, int k) {
  return weighted_norm(w.coeffs(), w.backend()->form_lambda(), k);
}
double sobolev_norm(const TwoForm& w, int k) {
  return weighted_norm(w.coeffs(), w.backend()->scalar_lambda(), k);
}

ScalarField smooth(const ScalarField& f, double t) {
  return ScalarField(f.backend(), cutoff(f.coeffs(), f.backend()->scalar_degree(), t));
}
OneForm smooth(const OneForm& w, double t) {
  return OneForm(w.backend(), cutoff(w.coeffs(), w.backend()->form_degree(), t));
}

double l2_norm(const VectorField& x) {
  const auto& w = x.backend()->quad_weights();
  const double s = (x.values().col(0).cwiseAbs2() + x.values().col(1).cwiseAbs2()).dot(w);
  return std::sqrt(s);
}

VectorField vf_bracket(const VectorField& x, const VectorField& y) {
  require_compatible(*x.backend(), *y.backend(), "vf_bracket");
  return VectorField(x.backend(), x.backend()->vf_bracket(x.values(), y.values()));
}

ScalarField random_scalar(BackendPtr b, double max_degree, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXd c(b->scalar_dim());
  const auto& deg = b->scalar_degree();
  for (Eigen::Index i = 0; i < c.size(); ++i) c[i] = deg[i] <= max_degree ? u(rng) : 0.0;
  return ScalarField(std::move(b), std::move(c));
}

OneForm random_oneform(BackendPtr b, double max_degree, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXd c(b->form_dim());
  const auto& deg = b->form_degree();
  for (Eigen::Index i = 0; i < c.size(); ++i) c[i] = deg[i] <= max_degree ? u(rng) : 0.0;
  return OneForm(std::move(b), std::move(c));
}

}  // namespace prham
