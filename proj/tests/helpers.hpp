#pragma once

#include <functional>

#include "prham/fields.hpp"

namespace prham::testing {

using Fn2 = std::function<double(double, double)>;

/// Project a band-limited closed-form function onto the backend basis by
/// grid analysis (exact for functions inside the extended truncation).
inline ScalarField field_from_function(const BackendPtr& b, const Fn2& f) {
  Eigen::VectorXd vals(b->grid_size());
  const auto& xy = b->grid_coords();
  for (int p = 0; p < b->grid_size(); ++p) vals[p] = f(xy(p, 0), xy(p, 1));
  return ScalarField(b, b->project_scalar(b->analyze_scalar(vals)));
}

/// Torus 1-form from component functions (f, g) of f du + g dv.
inline OneForm form_from_components(const BackendPtr& b, const Fn2& f, const Fn2& g) {
  Grid2 vals(b->grid_size(), 2);
  const auto& xy = b->grid_coords();
  for (int p = 0; p < b->grid_size(); ++p) {
    vals(p, 0) = f(xy(p, 0), xy(p, 1));
    vals(p, 1) = g(xy(p, 0), xy(p, 1));
  }
  return OneForm(b, b->project_form(b->analyze_form(vals)));
}

/// Sphere 1-form dF + *dG from its Hodge scalars.
inline OneForm form_from_hodge(const ScalarField& f, const ScalarField& g) {
  const auto& b = f.backend();
  const int half = b->scalar_dim() - 1;
  Eigen::VectorXd c(2 * half);
  c.head(half) = f.coeffs().tail(half);
  c.tail(half) = g.coeffs().tail(half);
  return OneForm(b, c);
}

inline VectorField vector_from_functions(const BackendPtr& b, const Fn2& c1, const Fn2& c2) {
  Grid2 vals(b->grid_size(), 2);
  const auto& xy = b->grid_coords();
  for (int p = 0; p < b->grid_size(); ++p) {
    vals(p, 0) = c1(xy(p, 0), xy(p, 1));
    vals(p, 1) = c2(xy(p, 0), xy(p, 1));
  }
  return VectorField(b, vals);
}

inline double form_distance(const OneForm& a, const OneForm& b, int k = 0) {
  return sobolev_norm(a - b, k);
}

/// cartesian coordinate function x_i as a band-limited sphere scalar
inline ScalarField coord_field(const BackendPtr& b, int i) {
  return field_from_function(b, [i](double th, double ph) {
    switch (i) {
      case 0: return std::sin(th) * std::cos(ph);
      case 1: return std::sin(th) * std::sin(ph);
      default: return std::cos(th);
    }
  });
}

/// rotation generator x cross e_i on the sphere, frame components
inline VectorField rotation_field(const BackendPtr& b, int i) {
  Grid2 vals(b->grid_size(), 2);
  const auto& xy = b->grid_coords();
  for (int p = 0; p < b->grid_size(); ++p) {
    const double th = xy(p, 0), ph = xy(p, 1);
    const Eigen::Vector3d x(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph),
                            std::cos(th));
    const Eigen::Vector3d eth(std::cos(th) * std::cos(ph), std::cos(th) * std::sin(ph),
                              -std::sin(th));
    const Eigen::Vector3d eph(-std::sin(ph), std::cos(ph), 0.0);
    Eigen::Vector3d e = Eigen::Vector3d::Zero();
    e[i] = 1.0;
    const Eigen::Vector3d v = x.cross(e);
    vals(p, 0) = v.dot(eth);
    vals(p, 1) = v.dot(eph);
  }
  return VectorField(b, vals);
}

}  // namespace prham::testing
