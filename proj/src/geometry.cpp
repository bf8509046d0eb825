#include "malab/geometry.hpp"

#include <cmath>

#include "malab/numerics.hpp"

namespace malab {

AnnularDomain AnnularDomain::concentric(int dim, double r_inner,
                                        double r_outer) {
  require(dim >= 2 && dim <= 8, ErrorCode::BadDomain, "dim must be in [2,8]");
  require(r_inner > 0.0 && r_inner < r_outer, ErrorCode::BadDomain,
          "need 0 < r_inner < r_outer");
  AnnularDomain d;
  d.kind_ = Kind::Concentric;
  d.dim_ = dim;
  d.r_inner_ = r_inner;
  d.r_outer_ = r_outer;
  d.c_in_ = Vec::Zero(dim);
  d.c_out_ = Vec::Zero(dim);
  return d;
}

AnnularDomain AnnularDomain::skewed2d(const Vec& center_inner, double r_inner,
                                      const Vec& center_outer, double r_outer) {
  require(center_inner.size() == 2 && center_outer.size() == 2,
          ErrorCode::BadDomain, "skewed annuli are planar");
  require(r_inner > 0.0 && r_inner < r_outer, ErrorCode::BadDomain,
          "need 0 < r_inner < r_outer");
  // Both circles must enclose the origin, and the inner disc must sit
  // strictly inside the outer one.
  require(center_inner.norm() < r_inner, ErrorCode::BadDomain,
          "inner circle must enclose the origin");
  require(center_outer.norm() < r_outer, ErrorCode::BadDomain,
          "outer circle must enclose the origin");
  require((center_outer - center_inner).norm() < r_outer - r_inner,
          ErrorCode::BadDomain, "inner circle must sit inside the outer one");
  AnnularDomain d;
  d.kind_ = Kind::Skewed2D;
  d.dim_ = 2;
  d.r_inner_ = r_inner;
  d.r_outer_ = r_outer;
  d.c_in_ = center_inner;
  d.c_out_ = center_outer;
  return d;
}

bool AnnularDomain::on_inner(const Vec& x, double rel_tol) const {
  return std::abs((x - c_in_).norm() - r_inner_) <= rel_tol * r_inner_;
}

bool AnnularDomain::on_outer(const Vec& x, double rel_tol) const {
  return std::abs((x - c_out_).norm() - r_outer_) <= rel_tol * r_outer_;
}

bool AnnularDomain::contains(const Vec& x, double rel_tol) const {
  return (x - c_in_).norm() >= r_inner_ * (1.0 - rel_tol) &&
         (x - c_out_).norm() <= r_outer_ * (1.0 + rel_tol);
}

Vec AnnularDomain::inner_normal(const Vec& x) const {
  require(on_inner(x), ErrorCode::PointNotOnBoundary,
          "point not on the inner boundary");
  return (x - c_in_) / (x - c_in_).norm();
}

double AnnularDomain::normal_curvature(const Vec& x, const Vec& xi) const {
  Vec nu = inner_normal(x);
  require(std::abs(nu.dot(xi)) <= 1e-10, ErrorCode::NotTangent,
          "direction not tangent to the inner boundary");
  // Spheres are umbilic: every normal curvature is 1/r.
  return 1.0 / r_inner_;
}

Vec AnnularDomain::geodesic_on_inner(const Vec& x0, const Vec& xi,
                                     double s) const {
  Vec nu = inner_normal(x0);
  require(std::abs(nu.dot(xi)) <= 1e-10, ErrorCode::NotTangent,
          "direction not tangent to the inner boundary");
  // Great circle in the plane spanned by the radius vector and xi.
  Vec radial = x0 - c_in_;
  double c = std::cos(s / r_inner_), sn = std::sin(s / r_inner_);
  return c_in_ + c * radial + sn * r_inner_ * xi;
}

double AnnularDomain::min_support() const {
  if (kind_ == Kind::Concentric) return r_inner_;
  // <c + r nu, nu> = <c, nu> + r, minimized over unit nu at r - |c|.
  return r_inner_ - c_in_.norm();
}

double AnnularDomain::diameter() const {
  // Outer boundary is a sphere either way.
  return 2.0 * r_outer_;
}

Vec AnnularDomain::inner_point(double t) const {
  require(dim_ == 2, ErrorCode::UnsupportedDomain,
          "angular parameterization is planar");
  Vec p(2);
  p << c_in_[0] + r_inner_ * std::cos(t), c_in_[1] + r_inner_ * std::sin(t);
  return p;
}

Vec AnnularDomain::outer_point(double t) const {
  require(dim_ == 2, ErrorCode::UnsupportedDomain,
          "angular parameterization is planar");
  Vec p(2);
  p << c_out_[0] + r_outer_ * std::cos(t), c_out_[1] + r_outer_ * std::sin(t);
  return p;
}

double AnnularDomain::dist_to_outer(const Vec& x) const {
  return r_outer_ - (x - c_out_).norm();
}

double graph_angle_ratio(const Vec& p, const Vec& nu) {
  require(std::abs(nu.norm() - 1.0) <= 1e-12, ErrorCode::ParameterOutOfRange,
          "nu must be a unit vector");
  // <(nu,0),(p,-1)> / <-e_{n+1},(p,-1)> collapses to <nu,p> because the
  // normalizations of (p,-1) cancel and the denominator is 1.
  return nu.dot(p);
}

}  // namespace malab
