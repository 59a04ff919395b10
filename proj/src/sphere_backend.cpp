#include <cmath>
#include <vector>

#include "backend_impl.hpp"

namespace prham {
namespace {

constexpr double kPi = 3.1415926535897932384626433832795;

void gauss_legendre(int q, std::vector<double>& x, std::vector<double>& w) {
  x.resize(q);
  w.resize(q);
  for (int i = 0; i < q; ++i) {
    double xi = std::cos(kPi * (i + 0.75) / (q + 0.5));
    double p0 = 0.0, p1 = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      p0 = 1.0;
      p1 = 0.0;
      for (int l = 0; l < q; ++l) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * l + 1.0) * xi * p1 - l * p2) / (l + 1.0);
      }
      const double dp = q * (xi * p0 - p1) / (xi * xi - 1.0);
      const double dx = p0 / dp;
      xi -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    p0 = 1.0;
    p1 = 0.0;
    for (int l = 0; l < q; ++l) {
      const double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * l + 1.0) * xi * p1 - l * p2) / (l + 1.0);
    }
    const double dp = q * (xi * p0 - p1) / (xi * xi - 1.0);
    x[i] = xi;
    w[i] = 2.0 / ((1.0 - xi * xi) * dp * dp);
  }
}

/// Colatitude factors Theta_lm with int_0^pi Theta^2 sin = 1, plus their
/// theta-derivatives, filled for l <= lmax, m <= l.
struct ThetaTable {
  Eigen::MatrixXd val, dth;
};

ThetaTable theta_table(double theta, int lmax) {
  const double ct = std::cos(theta), st = std::sin(theta);
  ThetaTable t;
  t.val = Eigen::MatrixXd::Zero(lmax + 1, lmax + 1);
  t.dth = Eigen::MatrixXd::Zero(lmax + 1, lmax + 1);
  t.val(0, 0) = 1.0 / std::sqrt(2.0);
  for (int m = 1; m <= lmax; ++m)
    t.val(m, m) = std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * st * t.val(m - 1, m - 1);
  for (int m = 0; m + 1 <= lmax; ++m)
    t.val(m + 1, m) = std::sqrt(2.0 * m + 3.0) * ct * t.val(m, m);
  for (int m = 0; m <= lmax; ++m)
    for (int l = m + 2; l <= lmax; ++l) {
      const double a = std::sqrt((4.0 * l * l - 1.0) / (double(l) * l - double(m) * m));
      const double b =
          std::sqrt((double(l - 1) * (l - 1) - double(m) * m) / (4.0 * double(l - 1) * (l - 1) - 1.0));
      t.val(l, m) = a * (ct * t.val(l - 1, m) - b * t.val(l - 2, m));
    }
  for (int m = 0; m <= lmax; ++m)
    for (int l = m; l <= lmax; ++l) {
      double s = l * ct * t.val(l, m);
      if (l > m)
        s -= std::sqrt((2.0 * l + 1.0) / (2.0 * l - 1.0) * (double(l) * l - double(m) * m)) *
             t.val(l - 1, m);
      t.dth(l, m) = s / st;
    }
  return t;
}

/// Round sphere, real spherical harmonics normalized against the measure
/// dA / (4 pi), synthesized on a Gauss-Legendre x equispaced grid.  1-forms
/// are handled through their Hodge scalars (F, G) with omega = dF + *dG.
class SphereBackend final : public Backend {
public:
  SphereBackend(int trunc, int padding) {
    kind_ = BackendKind::Sphere2;
    n_ = trunc;
    m_ = 2 * trunc;
    padding_ = padding;
    if (trunc < 1) throw std::invalid_argument("sphere backend: truncation must be >= 1");
    if (padding < 1) throw std::invalid_argument("sphere backend: padding must be >= 1");

    q_ = padding * trunc + 4;
    l_ = 2 * padding * trunc + 8;

    sdim_ = (n_ + 1) * (n_ + 1);
    sdim_ext_ = (m_ + 1) * (m_ + 1);
    fdim_ = 2 * (sdim_ - 1);
    fdim_ext_ = 2 * (sdim_ext_ - 1);

    fill_spectra(n_, slam_, sdeg_);
    fill_spectra(m_, slam_ext_, sdeg_ext_);
    fill_form_spectra(n_, flam_, fdeg_);
    fill_form_spectra(m_, flam_ext_, fdeg_ext_);

    std::vector<double> gx, gw;
    gauss_legendre(q_, gx, gw);

    const int npts = q_ * l_;
    weights_.resize(npts);
    coords_.resize(npts, 2);
    for (int q = 0; q < q_; ++q) {
      const double theta = std::acos(gx[q]);
      for (int j = 0; j < l_; ++j) {
        const int p = q * l_ + j;
        coords_(p, 0) = theta;
        coords_(p, 1) = 2.0 * kPi * j / l_;
        weights_[p] = gw[q] / (2.0 * l_);
      }
    }

    yval_.resize(npts, sdim_ext_);
    ydth_.resize(npts, sdim_ext_);
    ydps_.resize(npts, sdim_ext_);
    for (int q = 0; q < q_; ++q) {
      const double theta = std::acos(gx[q]);
      const ThetaTable t = theta_table(theta, m_);
      const double inv_st = 1.0 / std::sin(theta);
      for (int j = 0; j < l_; ++j) {
        const int p = q * l_ + j;
        const double phi = coords_(p, 1);
        fill_row(t, inv_st, phi, yval_.row(p), ydth_.row(p), ydps_.row(p));
      }
    }
  }

  Eigen::VectorXd extend_scalar(const Eigen::VectorXd& c) const override {
    check(c, sdim_, "extend_scalar");
    Eigen::VectorXd out = Eigen::VectorXd::Zero(sdim_ext_);
    out.head(sdim_) = c;  // index l^2 + l + m is contiguous in l
    return out;
  }

  Eigen::VectorXd project_scalar(const Eigen::VectorXd& c) const override {
    check(c, sdim_ext_, "project_scalar");
    return c.head(sdim_);
  }

  Eigen::VectorXd extend_form(const Eigen::VectorXd& c) const override {
    check(c, fdim_, "extend_form");
    const int half = sdim_ - 1, half_ext = sdim_ext_ - 1;
    Eigen::VectorXd out = Eigen::VectorXd::Zero(fdim_ext_);
    out.segment(0, half) = c.head(half);
    out.segment(half_ext, half) = c.tail(half);
    return out;
  }

  Eigen::VectorXd project_form(const Eigen::VectorXd& c) const override {
    check(c, fdim_ext_, "project_form");
    const int half = sdim_ - 1, half_ext = sdim_ext_ - 1;
    Eigen::VectorXd out(fdim_);
    out.head(half) = c.segment(0, half);
    out.tail(half) = c.segment(half_ext, half);
    return out;
  }

  Eigen::VectorXd synth_scalar(const Eigen::VectorXd& cM) const override {
    check(cM, sdim_ext_, "synth_scalar");
    return yval_ * cM;
  }

  Eigen::VectorXd analyze_scalar(const Eigen::VectorXd& vals) const override {
    if (vals.size() != yval_.rows()) throw std::invalid_argument("analyze_scalar: bad grid size");
    return yval_.transpose() * weights_.cwiseProduct(vals);
  }

  Grid2 synth_form(const Eigen::VectorXd& cM) const override {
    check(cM, fdim_ext_, "synth_form");
    const Eigen::VectorXd f = hodge_full(cM, 0), g = hodge_full(cM, 1);
    Grid2 out(yval_.rows(), 2);
    out.col(0) = ydth_ * f - ydps_ * g;
    out.col(1) = ydps_ * f + ydth_ * g;
    return out;
  }

  Eigen::VectorXd analyze_form(const Grid2& vals) const override {
    const Eigen::VectorXd wt = weights_.cwiseProduct(vals.col(0));
    const Eigen::VectorXd wp = weights_.cwiseProduct(vals.col(1));
    const Eigen::VectorXd t1 = ydth_.transpose() * wt;
    const Eigen::VectorXd t2 = ydps_.transpose() * wt;
    const Eigen::VectorXd t3 = ydth_.transpose() * wp;
    const Eigen::VectorXd t4 = ydps_.transpose() * wp;
    const int half_ext = sdim_ext_ - 1;
    Eigen::VectorXd out(fdim_ext_);
    for (int idx = 1; idx < sdim_ext_; ++idx) {
      const double lam = slam_ext_[idx];
      out[idx - 1] = (t1[idx] + t4[idx]) / lam;
      out[half_ext + idx - 1] = (-t2[idx] + t3[idx]) / lam;
    }
    return out;
  }

  Eigen::VectorXd d_scalar_ext(const Eigen::VectorXd& cM) const override {
    check(cM, sdim_ext_, "d_scalar_ext");
    Eigen::VectorXd out = Eigen::VectorXd::Zero(fdim_ext_);
    out.head(sdim_ext_ - 1) = cM.tail(sdim_ext_ - 1);
    return out;
  }

  Eigen::VectorXd curl_density_ext(const Eigen::VectorXd& formM) const override {
    check(formM, fdim_ext_, "curl_density_ext");
    const int half_ext = sdim_ext_ - 1;
    Eigen::VectorXd out = Eigen::VectorXd::Zero(sdim_ext_);
    out.tail(half_ext) =
        -slam_ext_.tail(half_ext).cwiseProduct(formM.segment(half_ext, half_ext));
    return out;
  }

  double eval_scalar(const Eigen::VectorXd& cM, double u, double v) const override {
    check(cM, sdim_ext_, "eval_scalar");
    const ThetaTable t = theta_table(u, m_);
    Eigen::RowVectorXd row(sdim_ext_), dummy1(sdim_ext_), dummy2(sdim_ext_);
    fill_row(t, 1.0 / std::sin(u), v, row, dummy1, dummy2);
    return row * cM;
  }

  Eigen::Vector2d eval_form(const Eigen::VectorXd& cM, double u, double v) const override {
    check(cM, fdim_ext_, "eval_form");
    const ThetaTable t = theta_table(u, m_);
    Eigen::RowVectorXd val(sdim_ext_), dth(sdim_ext_), dps(sdim_ext_);
    fill_row(t, 1.0 / std::sin(u), v, val, dth, dps);
    const Eigen::VectorXd f = hodge_full(cM, 0), g = hodge_full(cM, 1);
    const double wt = dth.dot(f) - dps.dot(g);
    const double wp = dps.dot(f) + dth.dot(g);
    return {wt, wp};
  }

  Grid2 vf_bracket(const Grid2& x, const Grid2& y) const override {
    const int npts = int(yval_.rows());
    // cartesian components are honest scalars on the sphere
    Eigen::MatrixXd vx(npts, 3), vy(npts, 3), vo(npts, 3);
    for (int i = 0; i < 3; ++i) {
      vx.col(i) = x.col(0).cwiseProduct(etheta_cart(i)) + x.col(1).cwiseProduct(ephi_cart(i));
      vy.col(i) = y.col(0).cwiseProduct(etheta_cart(i)) + y.col(1).cwiseProduct(ephi_cart(i));
    }
    for (int i = 0; i < 3; ++i) vo.col(i) = directional(x, vy.col(i)) - directional(y, vx.col(i));
    Grid2 out(npts, 2);
    out.setZero();
    for (int i = 0; i < 3; ++i) {
      out.col(0) += vo.col(i).cwiseProduct(etheta_cart(i));
      out.col(1) += vo.col(i).cwiseProduct(ephi_cart(i));
    }
    return out;
  }

private:
  static void fill_spectra(int t, Eigen::VectorXd& lam, Eigen::VectorXd& deg) {
    const int dim = (t + 1) * (t + 1);
    lam.resize(dim);
    deg.resize(dim);
    for (int l = 0; l <= t; ++l)
      for (int m = -l; m <= l; ++m) {
        lam[l * l + l + m] = double(l) * (l + 1);
        deg[l * l + l + m] = l;
      }
  }

  static void fill_form_spectra(int t, Eigen::VectorXd& lam, Eigen::VectorXd& deg) {
    Eigen::VectorXd sl, sd;
    fill_spectra(t, sl, sd);
    const int half = (t + 1) * (t + 1) - 1;
    lam.resize(2 * half);
    deg.resize(2 * half);
    lam << sl.tail(half), sl.tail(half);
    deg << sd.tail(half), sd.tail(half);
  }

  static void check(const Eigen::VectorXd& c, int want, const char* op) {
    if (c.size() != want) throw std::invalid_argument(std::string(op) + ": bad coefficient size");
  }

  template <typename R1, typename R2, typename R3>
  void fill_row(const ThetaTable& t, double inv_st, double phi, R1&& val, R2&& dth,
                R3&& dps) const {
    const double r4pi = std::sqrt(4.0 * kPi);
    const double inv_rpi = 1.0 / std::sqrt(kPi);
    const double inv_r2pi = 1.0 / std::sqrt(2.0 * kPi);
    for (int l = 0; l <= m_; ++l) {
      for (int m = -l; m <= l; ++m) {
        const int idx = l * l + l + m;
        const int am = std::abs(m);
        double az, daz;  // azimuthal factor and its phi-derivative
        if (m == 0) {
          az = inv_r2pi;
          daz = 0.0;
        } else if (m > 0) {
          az = std::cos(m * phi) * inv_rpi;
          daz = -m * std::sin(m * phi) * inv_rpi;
        } else {
          az = std::sin(am * phi) * inv_rpi;
          daz = am * std::cos(am * phi) * inv_rpi;
        }
        val[idx] = r4pi * t.val(l, am) * az;
        dth[idx] = r4pi * t.dth(l, am) * az;
        dps[idx] = r4pi * t.val(l, am) * daz * inv_st;
      }
    }
  }

  // full scalar-packed vector (zero mean) from one half of a form packing
  Eigen::VectorXd hodge_full(const Eigen::VectorXd& cM, int which) const {
    const int half_ext = sdim_ext_ - 1;
    Eigen::VectorXd out = Eigen::VectorXd::Zero(sdim_ext_);
    out.tail(half_ext) = cM.segment(which * half_ext, half_ext);
    return out;
  }

  Eigen::VectorXd etheta_cart(int i) const {
    const auto th = coords_.col(0).array(), ph = coords_.col(1).array();
    switch (i) {
      case 0: return (th.cos() * ph.cos()).matrix();
      case 1: return (th.cos() * ph.sin()).matrix();
      default: return (-th.sin()).matrix();
    }
  }

  Eigen::VectorXd ephi_cart(int i) const {
    const auto ph = coords_.col(1).array();
    switch (i) {
      case 0: return (-ph.sin()).matrix();
      case 1: return ph.cos().matrix();
      default: return Eigen::VectorXd::Zero(coords_.rows());
    }
  }

  Eigen::VectorXd directional(const Grid2& x, const Eigen::VectorXd& f) const {
    const Eigen::VectorXd cf = analyze_scalar(f);
    const Eigen::VectorXd gth = ydth_ * cf;
    const Eigen::VectorXd gph = ydps_ * cf;
    return x.col(0).cwiseProduct(gth) + x.col(1).cwiseProduct(gph);
  }

  int q_ = 0, l_ = 0;
  Eigen::MatrixXd yval_, ydth_, ydps_;
};

}  // namespace

BackendPtr make_sphere_backend(int truncation, int padding) {
  return std::make_shared<SphereBackend>(truncation, padding);
}

}  // namespace prham
