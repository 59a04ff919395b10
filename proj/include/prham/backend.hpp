#pragma once

#include <Eigen/Dense>
#include <memory>
#include <stdexcept>

namespace prham {

enum class BackendKind { Torus2, Sphere2 };

class Backend;
using BackendPtr = std::shared_ptr<const Backend>;

using Grid2 = Eigen::Matrix<double, Eigen::Dynamic, 2>;

/// Pseudospectral backend on a compact model surface.  Public field
/// coefficients live at truncation N in a packed real basis that is
/// orthonormal for the normalized measure (total volume 1).  Operation
/// internals run at the extended truncation M = 2N on a dealiasing
/// quadrature grid, so single products of band-limited data are exact.
///
/// Frame conventions (shared by both backends): grid values of 1-forms and
/// vector fields are components in an orthonormal (co)frame (e^1, e^2) =
/// (d.theta1, d.theta2) on the torus and (e^theta, e^phi) on the sphere.
/// The reference 2-form is e^1 ^ e^2 (d.theta1 ^ d.theta2, resp. the round
/// area form); 2-forms are stored as scalar densities against it.
class Backend : public std::enable_shared_from_this<Backend> {
public:
  virtual ~Backend() = default;

  static BackendPtr torus(int truncation, int padding = 2);
  static BackendPtr sphere(int truncation, int padding = 2);

  BackendKind kind() const { return kind_; }
  int truncation() const { return n_; }
  int extended_truncation() const { return m_; }
  int padding() const { return padding_; }

  int scalar_dim(bool extended = false) const { return extended ? sdim_ext_ : sdim_; }
  int form_dim(bool extended = false) const { return extended ? fdim_ext_ : fdim_; }
  int grid_size() const { return int(weights_.size()); }

  bool compatible(const Backend& other) const {
    return kind_ == other.kind_ && n_ == other.n_ && padding_ == other.padding_;
  }

  /// Laplace eigenvalue and spectral degree (frequency max-norm on the torus,
  /// harmonic degree on the sphere) per packed mode.
  const Eigen::VectorXd& scalar_lambda(bool extended = false) const {
    return extended ? slam_ext_ : slam_;
  }
  const Eigen::VectorXd& scalar_degree(bool extended = false) const {
    return extended ? sdeg_ext_ : sdeg_;
  }
  const Eigen::VectorXd& form_lambda(bool extended = false) const {
    return extended ? flam_ext_ : flam_;
  }
  const Eigen::VectorXd& form_degree(bool extended = false) const {
    return extended ? fdeg_ext_ : fdeg_;
  }

  /// Quadrature weights of the normalized measure (sum to 1) and parameter
  /// coordinates of the grid nodes.
  const Eigen::VectorXd& quad_weights() const { return weights_; }
  const Grid2& grid_coords() const { return coords_; }

  // zero-pad / truncate between the N and M packings
  virtual Eigen::VectorXd extend_scalar(const Eigen::VectorXd& c) const = 0;
  virtual Eigen::VectorXd project_scalar(const Eigen::VectorXd& c) const = 0;
  virtual Eigen::VectorXd extend_form(const Eigen::VectorXd& c) const = 0;
  virtual Eigen::VectorXd project_form(const Eigen::VectorXd& c) const = 0;

  // transforms at the extended truncation
  virtual Eigen::VectorXd synth_scalar(const Eigen::VectorXd& cM) const = 0;
  virtual Eigen::VectorXd analyze_scalar(const Eigen::VectorXd& vals) const = 0;
  virtual Grid2 synth_form(const Eigen::VectorXd& cM) const = 0;
  virtual Eigen::VectorXd analyze_form(const Grid2& vals) const = 0;

  // exterior derivative at the extended truncation (exact in coefficients)
  virtual Eigen::VectorXd d_scalar_ext(const Eigen::VectorXd& cM) const = 0;
  virtual Eigen::VectorXd curl_density_ext(const Eigen::VectorXd& formM) const = 0;

  /// Pointwise evaluation at arbitrary parameters, independent of the grid
  /// transform path (oracles, particle advection).
  virtual double eval_scalar(const Eigen::VectorXd& cM, double u, double v) const = 0;
  virtual Eigen::Vector2d eval_form(const Eigen::VectorXd& cM, double u, double v) const = 0;

  /// Lie bracket of tangent vector fields given by frame components on the
  /// grid (band-limited inputs assumed).
  virtual Grid2 vf_bracket(const Grid2& x, const Grid2& y) const = 0;

protected:
  BackendKind kind_;
  int n_ = 0, m_ = 0, padding_ = 2;
  int sdim_ = 0, sdim_ext_ = 0, fdim_ = 0, fdim_ext_ = 0;
  Eigen::VectorXd slam_, slam_ext_, sdeg_, sdeg_ext_;
  Eigen::VectorXd flam_, flam_ext_, fdeg_, fdeg_ext_;
  Eigen::VectorXd weights_;
  Grid2 coords_;
};

inline void require_compatible(const Backend& a, const Backend& b, const char* op) {
  if (!a.compatible(b)) throw std::invalid_argument(std::string(op) + ": backend mismatch");
}

}  // namespace prham
