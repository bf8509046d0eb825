#include "malab/grid_field.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

namespace malab {

GridField::GridField(const AnnularDomain& dom, int Nr, int Ntheta, double fill)
    : Nr_(Nr), Nt_(Ntheta) {
  require(dom.kind() == AnnularDomain::Kind::Concentric && dom.dim() == 2,
          ErrorCode::UnsupportedDomain, "grids live on concentric 2-D annuli");
  require(Nr >= 4 && Ntheta >= 4, ErrorCode::GridTooCoarse,
          "grid must be at least 4x4");
  r_in_ = dom.r_inner();
  r_out_ = dom.r_outer();
  dr_ = (r_out_ - r_in_) / (Nr - 1);
  dt_ = 2.0 * std::numbers::pi / Ntheta;
  v_.assign(static_cast<std::size_t>(Nr) * Ntheta, fill);
}

Vec GridField::point(int i, int j) const {
  double r = r_of(i), t = theta_of(j);
  Vec p(2);
  p << r * std::cos(t), r * std::sin(t);
  return p;
}

double GridField::d_r(int i, int j) const {
  if (i == 0)
    return (-3.0 * at(0, j) + 4.0 * at(1, j) - at(2, j)) / (2.0 * dr_);
  if (i == Nr_ - 1)
    return (3.0 * at(i, j) - 4.0 * at(i - 1, j) + at(i - 2, j)) / (2.0 * dr_);
  return (at(i + 1, j) - at(i - 1, j)) / (2.0 * dr_);
}

double GridField::d_rr(int i, int j) const {
  if (i == 0)
    return (2.0 * at(0, j) - 5.0 * at(1, j) + 4.0 * at(2, j) - at(3, j)) /
           (dr_ * dr_);
  if (i == Nr_ - 1)
    return (2.0 * at(i, j) - 5.0 * at(i - 1, j) + 4.0 * at(i - 2, j) -
            at(i - 3, j)) /
           (dr_ * dr_);
  return (at(i + 1, j) - 2.0 * at(i, j) + at(i - 1, j)) / (dr_ * dr_);
}

double GridField::d_theta(int i, int j) const {
  return (at(i, j + 1) - at(i, j - 1)) / (2.0 * dt_);
}

double GridField::d_thetatheta(int i, int j) const {
  return (at(i, j + 1) - 2.0 * at(i, j) + at(i, j - 1)) / (dt_ * dt_);
}

double GridField::d_rtheta(int i, int j) const {
  return (d_r(i, j + 1) - d_r(i, j - 1)) / (2.0 * dt_);
}

Vec GridField::cart_grad(int i, int j) const {
  double r = r_of(i), t = theta_of(j);
  double c = std::cos(t), s = std::sin(t);
  double ur = d_r(i, j), ut = d_theta(i, j);
  Vec g(2);
  g << c * ur - s * ut / r, s * ur + c * ut / r;
  return g;
}

Mat GridField::cart_hess(int i, int j) const {
  double r = r_of(i), t = theta_of(j);
  double c = std::cos(t), s = std::sin(t);
  double ur = d_r(i, j), urr = d_rr(i, j);
  double ut = d_theta(i, j), utt = d_thetatheta(i, j), urt = d_rtheta(i, j);
  double ang = ur / r + utt / (r * r);   // tangential second derivative
  double mix = urt / r - ut / (r * r);   // rotated mixed term
  Mat h(2, 2);
  h(0, 0) = c * c * urr + s * s * ang - 2.0 * c * s * mix;
  h(1, 1) = s * s * urr + c * c * ang + 2.0 * c * s * mix;
  h(0, 1) = h(1, 0) = c * s * (urr - ang) + (c * c - s * s) * mix;
  return h;
}

double GridField::sup_abs() const {
  double m = 0.0;
  for (double x : v_) m = std::max(m, std::abs(x));
  return m;
}

GridField sample_to_grid(const AnnularDomain& dom, int Nr, int Ntheta,
                         const std::function<double(const Vec&)>& u) {
  GridField f(dom, Nr, Ntheta);
  for (int i = 0; i < Nr; ++i)
    for (int j = 0; j < Ntheta; ++j) f.at(i, j) = u(f.point(i, j));
  return f;
}

void write_grid_csv(const GridField& f, const std::string& path) {
  std::ofstream out(path);
  require(out.good(), ErrorCode::BadSpec, "cannot open " + path);
  out << "r,theta,u\n";
  char buf[96];
  for (int i = 0; i < f.nr(); ++i)
    for (int j = 0; j < f.ntheta(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", f.r_of(i),
                    f.theta_of(j), f.at(i, j));
      out << buf;
    }
}

}  // namespace malab
