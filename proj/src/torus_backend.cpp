#include <cmath>
#include <complex>
#include <vector>

#include "backend_impl.hpp"

namespace prham {
namespace {

using Cplx = std::complex<double>;

constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Flat torus, truncated Fourier basis |m|,|n| <= T.  Packed real scalar
/// basis: index 0 is the constant 1; each half-lattice mode (m,n) (m>0, or
/// m=0,n>0) contributes sqrt(2)cos(m u + n v) and sqrt(2)sin(m u + n v)
/// slots.  Orthonormal for d.theta1 d.theta2 / (2 pi)^2.
///
/// 1-forms are stored through the Hodge splitting w = dF + *dG + c1 d.theta1
/// + c2 d.theta2 with mean-free potentials, packed as
///   [sqrt(lambda) F | sqrt(lambda) G | c1 c2].
/// The sqrt(lambda) weight makes the packing an isometry onto the component
/// representation, and d becomes a slot copy, so d.d = 0 holds identically
/// in coefficients.
class TorusBackend final : public Backend {
public:
  TorusBackend(int trunc, int padding) {
    kind_ = BackendKind::Torus2;
    n_ = trunc;
    m_ = 2 * trunc;
    padding_ = padding;
    if (trunc < 1) throw std::invalid_argument("torus backend: truncation must be >= 1");
    if (padding < 1) throw std::invalid_argument("torus backend: padding must be >= 1");

    p_ = 2 * (padding + 1) * trunc + 2;  // dealiasing grid, P > 3M for exact reanalysis at M

    build_modes(n_, modes_n_);
    build_modes(m_, modes_m_);
    sdim_ = 1 + 2 * int(modes_n_.size());
    sdim_ext_ = 1 + 2 * int(modes_m_.size());
    fdim_ = 2 * sdim_;
    fdim_ext_ = 2 * sdim_ext_;

    fill_spectra(modes_n_, slam_, sdeg_);
    fill_spectra(modes_m_, slam_ext_, sdeg_ext_);
    fill_form_spectra(slam_, sdeg_, flam_, fdeg_);
    fill_form_spectra(slam_ext_, sdeg_ext_, flam_ext_, fdeg_ext_);

    const int npts = p_ * p_;
    weights_ = Eigen::VectorXd::Constant(npts, 1.0 / double(npts));
    coords_.resize(npts, 2);
    for (int p = 0; p < p_; ++p)
      for (int q = 0; q < p_; ++q) {
        coords_(p * p_ + q, 0) = kTwoPi * p / p_;
        coords_(p * p_ + q, 1) = kTwoPi * q / p_;
      }

    const int w = 2 * m_ + 1;
    stage_.resize(p_, w);
    for (int p = 0; p < p_; ++p)
      for (int k = 0; k < w; ++k) {
        const double ang = kTwoPi * double(p) * double(k - m_) / p_;
        stage_(p, k) = Cplx(std::cos(ang), std::sin(ang));
      }

    build_ext_index();
  }

  Eigen::VectorXd extend_scalar(const Eigen::VectorXd& c) const override {
    check(c, sdim_, "extend_scalar");
    Eigen::VectorXd out = Eigen::VectorXd::Zero(sdim_ext_);
    out[0] = c[0];
    for (std::size_t h = 0; h < modes_n_.size(); ++h) {
      const int he = ext_index_[h];
      out[1 + 2 * he] = c[1 + 2 * h];
      out[2 + 2 * he] = c[2 + 2 * h];
    }
    return out;
  }

  Eigen::VectorXd project_scalar(const Eigen::VectorXd& c) const override {
    check(c, sdim_ext_, "project_scalar");
    Eigen::VectorXd out = Eigen::VectorXd::Zero(sdim_);
    out[0] = c[0];
    for (std::size_t h = 0; h < modes_n_.size(); ++h) {
      const int he = ext_index_[h];
      out[1 + 2 * h] = c[1 + 2 * he];
      out[2 + 2 * h] = c[2 + 2 * he];
    }
    return out;
  }

  Eigen::VectorXd extend_form(const Eigen::VectorXd& c) const override {
    check(c, fdim_, "extend_form");
    const int half = sdim_ - 1, half_ext = sdim_ext_ - 1;
    Eigen::VectorXd out = Eigen::VectorXd::Zero(fdim_ext_);
    for (std::size_t h = 0; h < modes_n_.size(); ++h) {
      const int he = ext_index_[h];
      for (int s = 0; s < 2; ++s) {
        out[2 * he + s] = c[2 * h + s];
        out[half_ext + 2 * he + s] = c[half + 2 * h + s];
      }
    }
    out[fdim_ext_ - 2] = c[fdim_ - 2];
    out[fdim_ext_ - 1] = c[fdim_ - 1];
    return out;
  }

  Eigen::VectorXd project_form(const Eigen::VectorXd& c) const override {
    check(c, fdim_ext_, "project_form");
    const int half = sdim_ - 1, half_ext = sdim_ext_ - 1;
    Eigen::VectorXd out = Eigen::VectorXd::Zero(fdim_);
    for (std::size_t h = 0; h < modes_n_.size(); ++h) {
      const int he = ext_index_[h];
      for (int s = 0; s < 2; ++s) {
        out[2 * h + s] = c[2 * he + s];
        out[half + 2 * h + s] = c[half_ext + 2 * he + s];
      }
    }
    out[fdim_ - 2] = c[fdim_ext_ - 2];
    out[fdim_ - 1] = c[fdim_ext_ - 1];
    return out;
  }

  Eigen::VectorXd synth_scalar(const Eigen::VectorXd& cM) const override {
    check(cM, sdim_ext_, "synth_scalar");
    Eigen::MatrixXcd lattice = to_lattice(cM);
    Eigen::MatrixXcd grid = stage_ * lattice * stage_.transpose();
    Eigen::VectorXd vals(p_ * p_);
    for (int p = 0; p < p_; ++p)
      for (int q = 0; q < p_; ++q) vals[p * p_ + q] = grid(p, q).real();
    return vals;
  }

  Eigen::VectorXd analyze_scalar(const Eigen::VectorXd& vals) const override {
    if (vals.size() != p_ * p_) throw std::invalid_argument("analyze_scalar: bad grid size");
    Eigen::MatrixXcd grid(p_, p_);
    for (int p = 0; p < p_; ++p)
      for (int q = 0; q < p_; ++q) grid(p, q) = vals[p * p_ + q];
    Eigen::MatrixXcd lattice =
        (stage_.adjoint() * grid * stage_.conjugate()) / (double(p_) * double(p_));
    return from_lattice(lattice);
  }

  Grid2 synth_form(const Eigen::VectorXd& cM) const override {
    check(cM, fdim_ext_, "synth_form");
    const auto [c1, c2] = component_scalars(cM);
    Grid2 out(p_ * p_, 2);
    out.col(0) = synth_scalar(c1);
    out.col(1) = synth_scalar(c2);
    return out;
  }

  Eigen::VectorXd analyze_form(const Grid2& vals) const override {
    return form_from_components(analyze_scalar(vals.col(0)), analyze_scalar(vals.col(1)));
  }

  Eigen::VectorXd d_scalar_ext(const Eigen::VectorXd& cM) const override {
    check(cM, sdim_ext_, "d_scalar_ext");
    const int half_ext = sdim_ext_ - 1;
    Eigen::VectorXd out = Eigen::VectorXd::Zero(fdim_ext_);
    for (int i = 0; i < half_ext; ++i) out[i] = rootlam_ext(i) * cM[1 + i];
    return out;
  }

  Eigen::VectorXd curl_density_ext(const Eigen::VectorXd& formM) const override {
    check(formM, fdim_ext_, "curl_density_ext");
    const int half_ext = sdim_ext_ - 1;
    Eigen::VectorXd out = Eigen::VectorXd::Zero(sdim_ext_);
    for (int i = 0; i < half_ext; ++i) out[1 + i] = -rootlam_ext(i) * formM[half_ext + i];
    return out;
  }

  double eval_scalar(const Eigen::VectorXd& cM, double u, double v) const override {
    check(cM, sdim_ext_, "eval_scalar");
    double s = cM[0];
    const double r2 = std::sqrt(2.0);
    for (std::size_t h = 0; h < modes_m_.size(); ++h) {
      const double ang = modes_m_[h].first * u + modes_m_[h].second * v;
      s += r2 * (cM[1 + 2 * h] * std::cos(ang) + cM[2 + 2 * h] * std::sin(ang));
    }
    return s;
  }

  Eigen::Vector2d eval_form(const Eigen::VectorXd& cM, double u, double v) const override {
    check(cM, fdim_ext_, "eval_form");
    const auto [c1, c2] = component_scalars(cM);
    return {eval_scalar(c1, u, v), eval_scalar(c2, u, v)};
  }

  Grid2 vf_bracket(const Grid2& x, const Grid2& y) const override {
    Grid2 out(p_ * p_, 2);
    for (int comp = 0; comp < 2; ++comp)
      out.col(comp) = directional(x, y.col(comp)) - directional(y, x.col(comp));
    return out;
  }

private:
  static void build_modes(int t, std::vector<std::pair<int, int>>& modes) {
    modes.clear();
    for (int nn = 1; nn <= t; ++nn) modes.emplace_back(0, nn);
    for (int mm = 1; mm <= t; ++mm)
      for (int nn = -t; nn <= t; ++nn) modes.emplace_back(mm, nn);
  }

  static void fill_spectra(const std::vector<std::pair<int, int>>& modes, Eigen::VectorXd& lam,
                           Eigen::VectorXd& deg) {
    const int dim = 1 + 2 * int(modes.size());
    lam.resize(dim);
    deg.resize(dim);
    lam[0] = 0.0;
    deg[0] = 0.0;
    for (std::size_t h = 0; h < modes.size(); ++h) {
      const auto [mm, nn] = modes[h];
      const double l = double(mm) * mm + double(nn) * nn;
      const double dg = std::max(std::abs(mm), std::abs(nn));
      lam[1 + 2 * h] = lam[2 + 2 * h] = l;
      deg[1 + 2 * h] = deg[2 + 2 * h] = dg;
    }
  }

  // form slots: [F modes | G modes | c1 c2]
  static void fill_form_spectra(const Eigen::VectorXd& sl, const Eigen::VectorXd& sd,
                                Eigen::VectorXd& lam, Eigen::VectorXd& deg) {
    const int half = int(sl.size()) - 1;
    lam.resize(2 * half + 2);
    deg.resize(2 * half + 2);
    lam << sl.tail(half), sl.tail(half), 0.0, 0.0;
    deg << sd.tail(half), sd.tail(half), 0.0, 0.0;
  }

  static void check(const Eigen::VectorXd& c, int want, const char* op) {
    if (c.size() != want) throw std::invalid_argument(std::string(op) + ": bad coefficient size");
  }

  double rootlam_ext(int slot) const { return std::sqrt(slam_ext_[1 + slot]); }

  /// Component scalars (w1, w2) of a packed extended form, as packed scalars.
  std::pair<Eigen::VectorXd, Eigen::VectorXd> component_scalars(const Eigen::VectorXd& cM) const {
    const int half_ext = sdim_ext_ - 1;
    Eigen::VectorXd c1 = Eigen::VectorXd::Zero(sdim_ext_), c2 = c1;
    c1[0] = cM[fdim_ext_ - 2];
    c2[0] = cM[fdim_ext_ - 1];
    for (std::size_t h = 0; h < modes_m_.size(); ++h) {
      const double mm = modes_m_[h].first, nn = modes_m_[h].second;
      const double rl = std::sqrt(slam_ext_[1 + 2 * h]);
      const double fa = cM[2 * h] / rl, fb = cM[2 * h + 1] / rl;
      const double ga = cM[half_ext + 2 * h] / rl, gb = cM[half_ext + 2 * h + 1] / rl;
      // w1 = d1(F) - d2(G) + c1, w2 = d2(F) + d1(G) + c2 in (cos, sin) slots
      c1[1 + 2 * h] = mm * fb - nn * gb;
      c1[2 + 2 * h] = -mm * fa + nn * ga;
      c2[1 + 2 * h] = nn * fb + mm * gb;
      c2[2 + 2 * h] = -nn * fa - mm * ga;
    }
    return {std::move(c1), std::move(c2)};
  }

  /// Inverse of component_scalars on packed extended scalars.
  Eigen::VectorXd form_from_components(const Eigen::VectorXd& c1,
                                       const Eigen::VectorXd& c2) const {
    const int half_ext = sdim_ext_ - 1;
    Eigen::VectorXd out = Eigen::VectorXd::Zero(fdim_ext_);
    out[fdim_ext_ - 2] = c1[0];
    out[fdim_ext_ - 1] = c2[0];
    for (std::size_t h = 0; h < modes_m_.size(); ++h) {
      const double mm = modes_m_[h].first, nn = modes_m_[h].second;
      const double lam = slam_ext_[1 + 2 * h];
      const double irl = 1.0 / std::sqrt(lam);
      const double f1a = c1[1 + 2 * h], f1b = c1[2 + 2 * h];
      const double f2a = c2[1 + 2 * h], f2b = c2[2 + 2 * h];
      out[2 * h] = -(mm * f1b + nn * f2b) * irl;        // sqrt(lam) Fa
      out[2 * h + 1] = (mm * f1a + nn * f2a) * irl;     // sqrt(lam) Fb
      out[half_ext + 2 * h] = (nn * f1b - mm * f2b) * irl;
      out[half_ext + 2 * h + 1] = (mm * f2a - nn * f1a) * irl;
    }
    return out;
  }

  Eigen::MatrixXcd to_lattice(const Eigen::VectorXd& cM) const {
    const int w = 2 * m_ + 1;
    Eigen::MatrixXcd lat = Eigen::MatrixXcd::Zero(w, w);
    lat(m_, m_) = cM[0];
    const double inv_r2 = 1.0 / std::sqrt(2.0);
    for (std::size_t h = 0; h < modes_m_.size(); ++h) {
      const auto [mm, nn] = modes_m_[h];
      const Cplx z(cM[1 + 2 * h] * inv_r2, -cM[2 + 2 * h] * inv_r2);
      lat(m_ + mm, m_ + nn) = z;
      lat(m_ - mm, m_ - nn) = std::conj(z);
    }
    return lat;
  }

  Eigen::VectorXd from_lattice(const Eigen::MatrixXcd& lat) const {
    Eigen::VectorXd c(sdim_ext_);
    c[0] = lat(m_, m_).real();
    const double r2 = std::sqrt(2.0);
    for (std::size_t h = 0; h < modes_m_.size(); ++h) {
      const auto [mm, nn] = modes_m_[h];
      const Cplx z = lat(m_ + mm, m_ + nn);
      c[1 + 2 * h] = r2 * z.real();
      c[2 + 2 * h] = -r2 * z.imag();
    }
    return c;
  }

  // directional derivative of a band-limited grid function along x
  Eigen::VectorXd directional(const Grid2& x, const Eigen::VectorXd& f) const {
    Grid2 grad = synth_form(d_scalar_ext(analyze_scalar(f)));
    return x.col(0).cwiseProduct(grad.col(0)) + x.col(1).cwiseProduct(grad.col(1));
  }

  void build_ext_index() {
    ext_index_.resize(modes_n_.size());
    const int w = 2 * m_ + 1;
    std::vector<int> where(std::size_t(w) * w, -1);
    for (std::size_t h = 0; h < modes_m_.size(); ++h)
      where[std::size_t(modes_m_[h].first + m_) * w + (modes_m_[h].second + m_)] = int(h);
    for (std::size_t h = 0; h < modes_n_.size(); ++h)
      ext_index_[h] = where[std::size_t(modes_n_[h].first + m_) * w + (modes_n_[h].second + m_)];
  }

  int p_ = 0;
  std::vector<std::pair<int, int>> modes_n_, modes_m_;
  std::vector<int> ext_index_;
  Eigen::MatrixXcd stage_;
};

}  // namespace

BackendPtr make_torus_backend(int truncation, int padding) {
  return std::make_shared<TorusBackend>(truncation, padding);
}

}  // namespace prham
