#pragma once

#include "malab/types.hpp"

namespace malab {

// Annulus between an inner and an outer sphere/circle. Two flavors: a
// concentric annulus in any dimension n >= 2, and a planar annulus whose two
// circles may have distinct centers (inner strictly inside outer).
class AnnularDomain {
 public:
  enum class Kind { Concentric, Skewed2D };

  static AnnularDomain concentric(int dim, double r_inner, double r_outer);
  static AnnularDomain skewed2d(const Vec& center_inner, double r_inner,
                                const Vec& center_outer, double r_outer);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  double r_inner() const { return r_inner_; }
  double r_outer() const { return r_outer_; }
  const Vec& center_inner() const { return c_in_; }
  const Vec& center_outer() const { return c_out_; }

  bool on_inner(const Vec& x, double rel_tol = 1e-12) const;
  bool on_outer(const Vec& x, double rel_tol = 1e-12) const;
  bool contains(const Vec& x, double rel_tol = 1e-12) const;

  // Unit normal on the inner boundary pointing into the annulus.
  Vec inner_normal(const Vec& x) const;

  // Normal curvature of the inner boundary in the tangent direction xi.
  double normal_curvature(const Vec& x, const Vec& xi) const;

  // Unit-speed geodesic on the inner sphere through x0 with initial
  // direction xi, evaluated at arclength s.
  Vec geodesic_on_inner(const Vec& x0, const Vec& xi, double s) const;

  // m0 = min over the inner boundary of <x, nu(x)>.
  double min_support() const;

  double diameter() const;

  // Point on the inner (resp. outer) boundary at polar angle t; 2-D only.
  Vec inner_point(double t) const;
  Vec outer_point(double t) const;

  // Distance from x to the outer boundary.
  double dist_to_outer(const Vec& x) const;

 private:
  AnnularDomain() = default;
  Kind kind_ = Kind::Concentric;
  int dim_ = 2;
  double r_inner_ = 0.0, r_outer_ = 0.0;
  Vec c_in_, c_out_;
};

// chi = cos(alpha)/cos(beta) for the graph of u: equals <nu, p> identically.
double graph_angle_ratio(const Vec& p, const Vec& nu);

}  // namespace malab
