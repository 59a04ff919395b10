#include "prham/ce_complex.hpp"

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace prham {

namespace {

Eigen::MatrixXd pinv_with_cutoff(const Eigen::MatrixXd& m, double rel_cutoff, double* smallest,
                                 const char* what) {
  if (m.size() == 0) {
    if (smallest) *smallest = 0.0;
    return Eigen::MatrixXd::Zero(m.cols(), m.rows());
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double cut = rel_cutoff * sv[0];
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
  int rank = 0;
  double small = 0.0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > cut) {
      inv[i] = 1.0 / sv[i];
      small = sv[i];
      ++rank;
    }
  if (rank == 0) throw ConditioningError(std::string(what) + ": rank collapsed to zero", sv[0]);
  if (smallest) *smallest = small;
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

double relative_product_residual(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.size() == 0 || b.size() == 0) return 0.0;
  const double na = a.norm(), nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return (a * b).norm() / (na * nb);
}

/// symmetric PSD pseudo-inverse + kernel basis via eigendecomposition
struct PsdPinv {
  Eigen::MatrixXd pinv;
  Eigen::MatrixXd kernel;  // orthonormal kernel columns
};

PsdPinv psd_pinv(const Eigen::MatrixXd& m, double rel_cutoff) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()));
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double cut = rel_cutoff * std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(ev.size());
  std::vector<int> kernel_cols;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (std::abs(ev[i]) > cut)
      inv[i] = 1.0 / ev[i];
    else
      kernel_cols.push_back(int(i));
  }
  PsdPinv out;
  out.pinv = es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
  out.kernel.resize(m.rows(), kernel_cols.size());
  for (std::size_t c = 0; c < kernel_cols.size(); ++c)
    out.kernel.col(c) = es.eigenvectors().col(kernel_cols[c]);
  return out;
}

}  // namespace

ComplexContext::ComplexContext(const PoissonStructure& pi, const MomentumMap1& model,
                               ComplexOptions opts)
    : backend_(pi.backend()), algebra_(model.algebra.base()) {
  require_compatible(*backend_, *model.backend(), "ComplexContext");
  scalar_mode_ = false;
  n_ = model.dim();
  d_ = backend_->form_dim();
  lambda_ = backend_->form_lambda();

  rho_.reserve(n_);
  for (int i = 0; i < n_; ++i) rho_.push_back(koszul_matrix(pi, model.forms[i]));
  assemble(rho_, algebra_, opts);
}

ComplexContext::ComplexContext(const PoissonStructure& pi, const ScalarMomentumMap& model,
                               ComplexOptions opts)
    : backend_(pi.backend()), algebra_(model.algebra) {
  require_compatible(*backend_, *model.backend(), "ComplexContext");
  scalar_mode_ = true;
  n_ = model.dim();
  d_ = backend_->scalar_dim();
  lambda_ = backend_->scalar_lambda();

  rho_.reserve(n_);
  for (int i = 0; i < n_; ++i) rho_.push_back(hamiltonian_matrix(pi, model.hamiltonians[i]));
  assemble(rho_, algebra_, opts);
}

int ComplexContext::pair_index(int i, int j) const {
  if (!(0 <= i && i < j && j < n_)) throw std::invalid_argument("pair_index: need 0 <= i < j < n");
  // pairs in lexicographic order
  return i * n_ - i * (i + 1) / 2 + (j - i - 1);
}

void ComplexContext::assemble(const std::vector<Eigen::MatrixXd>& rho, const LieAlgebra& g,
                              const ComplexOptions& opts) {
  const int np = pairs(), nt = triples();
  const auto id = Eigen::MatrixXd::Identity(d_, d_);

  d0_.resize(std::size_t(n_) * d_, d_);
  for (int i = 0; i < n_; ++i) d0_.middleRows(std::size_t(i) * d_, d_) = rho[i];

  d1_ = Eigen::MatrixXd::Zero(std::size_t(np) * d_, std::size_t(n_) * d_);
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j) {
      const int p = pair_index(i, j);
      d1_.block(std::size_t(p) * d_, std::size_t(j) * d_, d_, d_) += rho[i];
      d1_.block(std::size_t(p) * d_, std::size_t(i) * d_, d_, d_) -= rho[j];
      for (int k = 0; k < n_; ++k) {
        const double c = g.c(i, j, k);
        if (c != 0.0) d1_.block(std::size_t(p) * d_, std::size_t(k) * d_, d_, d_) -= c * id;
      }
    }

  if (opts.assemble_d2 && nt > 0) {
    d2_ = Eigen::MatrixXd::Zero(std::size_t(nt) * d_, std::size_t(np) * d_);
    auto pair_term = [&](int t, int a, int b, double w) {
      if (a == b) return;
      const int p = a < b ? pair_index(a, b) : pair_index(b, a);
      const double sign = a < b ? 1.0 : -1.0;
      d2_.block(std::size_t(t) * d_, std::size_t(p) * d_, d_, d_) +=
          (w * sign) * id;
    };
    int t = 0;
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j)
        for (int k = j + 1; k < n_; ++k, ++t) {
          d2_.block(std::size_t(t) * d_, std::size_t(pair_index(j, k)) * d_, d_, d_) += rho[i];
          d2_.block(std::size_t(t) * d_, std::size_t(pair_index(i, k)) * d_, d_, d_) -= rho[j];
          d2_.block(std::size_t(t) * d_, std::size_t(pair_index(i, j)) * d_, d_, d_) += rho[k];
          for (int l = 0; l < n_; ++l) {
            // -c([ij],k) + c([ik],j) - c([jk],i)
            pair_term(t, l, k, -g.c(i, j, l));
            pair_term(t, l, j, g.c(i, k, l));
            pair_term(t, l, i, -g.c(j, k, l));
          }
        }
  } else {
    d2_.resize(0, std::size_t(np) * d_);
  }

  h0_ = pinv_with_cutoff(d0_, opts.svd_cutoff, &h0_sv_, "h0");
  h1_ = np > 0 ? pinv_with_cutoff(d1_, opts.svd_cutoff, &h1_sv_, "h1")
               : Eigen::MatrixXd::Zero(std::size_t(n_) * d_, 0);

  d1d0_residual_ = relative_product_residual(d1_, d0_);
  d2d1_residual_ = relative_product_residual(d2_, d1_);
}

double ComplexContext::homotopy_residual(const Eigen::VectorXd& gamma) const {
  const double ng = gamma.norm();
  if (ng == 0.0) return 0.0;
  Eigen::VectorXd r = d0_ * (h0_ * gamma) - gamma;
  if (pairs() > 0) r += h1_ * (d1_ * gamma);
  return r.norm() / ng;
}

double ComplexContext::cochain_norm(const Eigen::VectorXd& v, int k) const {
  if (v.size() % d_ != 0) throw std::invalid_argument("cochain_norm: bad packed size");
  const int blocks = int(v.size() / d_);
  double worst = 0.0;
  for (int b = 0; b < blocks; ++b) {
    double s = 0.0;
    for (int i = 0; i < d_; ++i)
      s += std::pow(1.0 + lambda_[i], k) * v[std::size_t(b) * d_ + i] * v[std::size_t(b) * d_ + i];
    worst = std::max(worst, std::sqrt(s));
  }
  return worst;
}

Eigen::VectorXd ComplexContext::pack(const std::vector<OneForm>& c) const {
  if (scalar_mode_) throw std::logic_error("pack: scalar-mode context");
  Eigen::VectorXd v(std::size_t(c.size()) * d_);
  for (std::size_t b = 0; b < c.size(); ++b) {
    require_compatible(*backend_, *c[b].backend(), "pack");
    v.segment(b * d_, d_) = c[b].coeffs();
  }
  return v;
}

std::vector<OneForm> ComplexContext::unpack(const Eigen::VectorXd& v, int blocks) const {
  if (scalar_mode_) throw std::logic_error("unpack: scalar-mode context");
  if (v.size() != std::size_t(blocks) * d_) throw std::invalid_argument("unpack: bad packed size");
  std::vector<OneForm> out;
  out.reserve(blocks);
  for (int b = 0; b < blocks; ++b)
    out.emplace_back(backend_, Eigen::VectorXd(v.segment(std::size_t(b) * d_, d_)));
  return out;
}

OneForm rho(const ComplexContext& ctx, const Eigen::VectorXd& x, const OneForm& beta) {
  if (x.size() != ctx.n()) throw std::invalid_argument("rho: coefficient size mismatch");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(ctx.module_dim());
  for (int i = 0; i < ctx.n(); ++i)
    if (x[i] != 0.0) out += x[i] * (ctx.rho_matrices()[i] * beta.coeffs());
  return OneForm(ctx.backend(), out);
}

Cochain1 d0(const ComplexContext& ctx, const OneForm& beta) {
  return ctx.unpack(ctx.d0_apply(beta.coeffs()), ctx.n());
}

Cochain2 d1(const ComplexContext& ctx, const Cochain1& gamma) {
  return ctx.unpack(ctx.d1_apply(ctx.pack(gamma)), ctx.pairs());
}

Cochain3 d2(const ComplexContext& ctx, const Cochain2& c) {
  if (ctx.triples() == 0) return {};
  return ctx.unpack(ctx.d2_apply(ctx.pack(c)), ctx.triples());
}

OneForm h0(const ComplexContext& ctx, const Cochain1& gamma) {
  return OneForm(ctx.backend(), ctx.h0_apply(ctx.pack(gamma)));
}

Cochain1 h1(const ComplexContext& ctx, const Cochain2& c) {
  return ctx.unpack(ctx.h1_apply(ctx.pack(c)), ctx.n());
}

CasimirReport casimir_homotopy_check(const ComplexContext& ctx, std::uint64_t seed,
                                     int samples) {
  const auto& g = ctx.algebra();
  const KillingData kd = casimir_data(g);  // throws NotSemisimpleError
  const int n = ctx.n(), d = ctx.module_dim(), np = ctx.pairs();
  const auto& rho = ctx.rho_matrices();
  const auto id = Eigen::MatrixXd::Identity(d, d);

  // Casimir on the module
  Eigen::MatrixXd omega0 = Eigen::MatrixXd::Zero(d, d);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (kd.dual_basis(b, a) != 0.0) omega0 += kd.dual_basis(b, a) * (rho[a] * rho[b]);

  // rho-hat on C^1 and its Casimir
  auto rhohat1 = [&](int a) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(std::size_t(n) * d, std::size_t(n) * d);
    for (int i = 0; i < n; ++i) {
      m.block(std::size_t(i) * d, std::size_t(i) * d, d, d) += rho[a];
      for (int j = 0; j < n; ++j) {
        const double c = g.c(a, i, j);
        if (c != 0.0) m.block(std::size_t(i) * d, std::size_t(j) * d, d, d) -= c * id;
      }
    }
    return m;
  };
  std::vector<Eigen::MatrixXd> rh1;
  for (int a = 0; a < n; ++a) rh1.push_back(rhohat1(a));
  Eigen::MatrixXd omega1 =
      Eigen::MatrixXd::Zero(std::size_t(n) * d, std::size_t(n) * d);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (kd.dual_basis(b, a) != 0.0) omega1 += kd.dual_basis(b, a) * (rh1[a] * rh1[b]);

  // contraction homotopies h(c)(...) = sum_a rho(e_a) c(e^a, ...)
  Eigen::MatrixXd hw1 = Eigen::MatrixXd::Zero(d, std::size_t(n) * d);
  for (int b = 0; b < n; ++b) {
    Eigen::MatrixXd blk = Eigen::MatrixXd::Zero(d, d);
    for (int a = 0; a < n; ++a)
      if (kd.dual_basis(b, a) != 0.0) blk += kd.dual_basis(b, a) * rho[a];
    hw1.middleCols(std::size_t(b) * d, d) = blk;
  }
  Eigen::MatrixXd hw2 = Eigen::MatrixXd::Zero(std::size_t(n) * d, std::size_t(np) * d);
  for (int i = 0; i < n; ++i)
    for (int b = 0; b < n; ++b) {
      if (b == i) continue;
      const int p = b < i ? ctx.pair_index(b, i) : ctx.pair_index(i, b);
      const double sign = b < i ? 1.0 : -1.0;
      for (int a = 0; a < n; ++a) {
        const double w = kd.dual_basis(b, a) * sign;
        if (w != 0.0)
          hw2.block(std::size_t(i) * d, std::size_t(p) * d, d, d) += w * rho[a];
      }
    }

  const PsdPinv p0 = psd_pinv(omega0, 1e-8);
  const PsdPinv p1 = psd_pinv(omega1, 1e-8);
  const Eigen::MatrixXd h0t = p0.pinv * hw1;
  // the contraction homotopy inverts the module Casimir valuewise: it is
  // central, so it commutes with the differentials slot by slot
  Eigen::MatrixXd h1t(std::size_t(n) * d, std::size_t(np) * d);
  for (int i = 0; i < n; ++i)
    h1t.middleRows(std::size_t(i) * d, d) = p0.pinv * hw2.middleRows(std::size_t(i) * d, d);

  CasimirReport rep;
  rep.invariant_dim_c0 = int(p0.kernel.cols());
  rep.invariant_dim_c1 = int(p1.kernel.cols());

  // homotopy identity restricted to the complement of invariant cochains
  Eigen::MatrixXd identity1 = ctx.d0_matrix() * h0t + h1t * ctx.d1_matrix();
  Eigen::MatrixXd defect = identity1 - Eigen::MatrixXd::Identity(identity1.rows(), identity1.cols());
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double worst = 0.0, agree = 0.0;
  for (int s = 0; s < samples; ++s) {
    Eigen::VectorXd v(std::size_t(n) * d);
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = gauss(rng);
    if (p1.kernel.cols() > 0) v -= p1.kernel * (p1.kernel.transpose() * v);
    const double nv = v.norm();
    if (nv > 0.0) worst = std::max(worst, (defect * v).norm() / nv);

    // agreement with the pseudo-inverse homotopy on exact 1-cochains
    Eigen::VectorXd w(d);
    for (int i = 0; i < d; ++i) w[i] = gauss(rng);
    const Eigen::VectorXd gamma = ctx.d0_matrix() * w;
    const Eigen::VectorXd a1 = h0t * gamma;
    const Eigen::VectorXd a2 = ctx.h0_matrix() * gamma;
    const double na = std::max(a1.norm(), a2.norm());
    if (na > 0.0) agree = std::max(agree, (a1 - a2).norm() / na);
  }
  rep.identity_defect_noninv = worst;
  rep.agreement_with_pinv = agree;

  // invariant 1-cocycles vanish: the differential is injective on ker Omega1
  if (p1.kernel.cols() > 0) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(ctx.d1_matrix() * p1.kernel);
    rep.invariant_cocycle_sv = svd.singularValues().minCoeff();
  }
  return rep;
}

HomotopyNormReport homotopy_norm_diagnostic(const ComplexContext& ctx, std::uint64_t seed) {
  const int n = ctx.n(), d = ctx.module_dim();
  const auto& lam = ctx.backend()->form_lambda();
  const Eigen::VectorXd lam_mod =
      ctx.scalar_mode() ? ctx.backend()->scalar_lambda() : ctx.backend()->form_lambda();

  auto weights = [&](double k) {
    Eigen::VectorXd w(d);
    for (int i = 0; i < d; ++i) w[i] = std::pow(1.0 + lam_mod[i], k / 2.0);
    return w;
  };

  HomotopyNormReport rep;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int s = 0; s <= 3; ++s) {
    for (int k = 0; k <= 3; ++k) {
      const Eigen::VectorXd wk = weights(k);
      const Eigen::VectorXd wks_inv = weights(double(k + s)).cwiseInverse();
      // operator gamma -> W_k h0 W_{k+s}^{-1} gamma, blockwise weights on C^1
      auto apply = [&](const Eigen::VectorXd& v) {
        Eigen::VectorXd u(v.size());
        for (int b = 0; b < n; ++b)
          u.segment(std::size_t(b) * d, d) =
              v.segment(std::size_t(b) * d, d).cwiseProduct(wks_inv);
        return Eigen::VectorXd(wk.cwiseProduct(ctx.h0_matrix() * u));
      };
      auto apply_t = [&](const Eigen::VectorXd& v) {
        Eigen::VectorXd u = ctx.h0_matrix().transpose() * wk.cwiseProduct(v);
        for (int b = 0; b < n; ++b)
          u.segment(std::size_t(b) * d, d) =
              u.segment(std::size_t(b) * d, d).cwiseProduct(wks_inv);
        return u;
      };
      Eigen::VectorXd v(std::size_t(n) * d);
      for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = gauss(rng);
      v.normalize();
      double norm = 0.0;
      for (int it = 0; it < 40; ++it) {
        Eigen::VectorXd u = apply_t(apply(v));
        norm = std::sqrt(u.norm());
        if (u.norm() == 0.0) break;
        v = u / u.norm();
      }
      rep.constants[s][k] = norm;
    }
  }
  double best = std::numeric_limits<double>::infinity();
  for (int s = 0; s <= 3; ++s) {
    double lo = rep.constants[s][0], hi = rep.constants[s][0];
    for (int k = 1; k <= 3; ++k) {
      lo = std::min(lo, rep.constants[s][k]);
      hi = std::max(hi, rep.constants[s][k]);
    }
    const double spread = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
    if (spread < best) {
      best = spread;
      rep.fitted_s = s;
    }
  }
  (void)lam;
  return rep;
}

}  // namespace prham
