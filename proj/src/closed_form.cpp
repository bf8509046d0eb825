#include "malab/closed_form.hpp"

#include <cmath>

#include "malab/numerics.hpp"

namespace malab {

namespace {

constexpr double kEvalSlack = 1e-9;  // relative slack for domain membership

}  // namespace

ClosedFormSolution ClosedFormSolution::radial2d(double psi, double r_inner,
                                                double r_outer, double d_k) {
  require(psi > 0.0, ErrorCode::PsiNotPositive, "psi must be positive");
  require(0.0 < r_inner && r_inner < r_outer, ErrorCode::BadDomain,
          "need 0 < r_inner < r_outer");
  require(d_k > 0.0, ErrorCode::ParameterOutOfRange, "d_k must be positive");
  ClosedFormSolution s;
  s.family_ = Family::RadialConcentric2D;
  s.n_ = 2;
  s.psi_ = psi;
  s.r_in_ = r_inner;
  s.r_out_ = r_outer;
  s.d_ = d_k;
  s.D_ = -r_inner * r_inner + (d_k / psi) * (d_k / psi);
  return s;
}

ClosedFormSolution ClosedFormSolution::radial_nd(int n, double psi,
                                                 double r_inner, double r_outer,
                                                 double d_k) {
  require(n >= 2 && n <= 8, ErrorCode::BadDomain, "n must be in [2,8]");
  require(psi > 0.0, ErrorCode::PsiNotPositive, "psi must be positive");
  require(0.0 < r_inner && r_inner < r_outer, ErrorCode::BadDomain,
          "need 0 < r_inner < r_outer");
  require(d_k > 0.0, ErrorCode::ParameterOutOfRange, "d_k must be positive");
  ClosedFormSolution s;
  s.family_ = Family::RadialConcentricND;
  s.n_ = n;
  s.psi_ = psi;
  s.r_in_ = r_inner;
  s.r_out_ = r_outer;
  s.d_ = d_k;
  return s;
}

ClosedFormSolution ClosedFormSolution::skewed_quadratic(double psi,
                                                        const Vec& center_outer,
                                                        double r_outer) {
  require(psi > 0.0, ErrorCode::PsiNotPositive, "psi must be positive");
  require(center_outer.size() == 2, ErrorCode::BadDomain,
          "skewed quadratic is planar");
  ClosedFormSolution s;
  s.family_ = Family::SkewedQuadratic;
  s.n_ = 2;
  s.psi_ = psi;
  s.r_out_ = r_outer;
  s.r_in_ = 0.0;
  s.d_ = 0.0;
  s.shift_ = center_outer;
  return s;
}

ClosedFormSolution ClosedFormSolution::skewed_shifted(
    const ClosedFormSolution& inner, const Vec& center_outer,
    const AnnularDomain& dom) {
  require(inner.family_ == Family::RadialConcentric2D,
          ErrorCode::UnsupportedFamily, "shifted base must be a 2-D profile");
  require(dom.kind() == AnnularDomain::Kind::Skewed2D, ErrorCode::BadDomain,
          "shifted family lives on a skewed annulus");
  require((center_outer - dom.center_outer()).norm() <= 1e-12,
          ErrorCode::BadDomain, "shift must be the outer center");
  require(std::abs(inner.r_out_ - dom.r_outer()) <= 1e-12 * dom.r_outer(),
          ErrorCode::BadDomain, "profile must vanish on the outer circle");
  // The profile is only defined for radii >= its inner radius: the closest
  // point of the annulus to the outer center decides validity.
  double hole_gap = dom.r_inner() - (center_outer - dom.center_inner()).norm();
  require(hole_gap >= inner.r_in_, ErrorCode::ValidityViolated,
          "annulus reaches inside the profile's inner radius");
  ClosedFormSolution s;
  s.family_ = Family::SkewedShifted;
  s.n_ = 2;
  s.psi_ = inner.psi_;
  s.r_in_ = hole_gap;
  s.r_out_ = dom.r_outer();
  s.d_ = inner.d_;
  s.shift_ = center_outer;
  s.base_ = std::make_shared<ClosedFormSolution>(inner);
  return s;
}

ClosedFormSolution ClosedFormSolution::gradient_blowup(double r_inner,
                                                       double r_outer,
                                                       double d_k) {
  require(0.0 < r_inner && r_inner < r_outer, ErrorCode::BadDomain,
          "need 0 < r_inner < r_outer");
  require(r_outer - r_inner < 1.0, ErrorCode::ParameterOutOfRange,
          "annulus width must be below 1");
  double cap = -std::log(r_outer - r_inner);
  require(d_k > 0.0 && d_k < cap, ErrorCode::ParameterOutOfRange,
          "inner slope must lie in (0, -ln(width))");
  ClosedFormSolution s;
  s.family_ = Family::GradientBlowup;
  s.n_ = 2;
  s.psi_ = 1.0;  // right-hand side is gradient-dependent, not constant
  s.r_in_ = r_inner;
  s.r_out_ = r_outer;
  s.d_ = d_k;
  s.A_ = std::exp(-d_k) + r_inner;
  return s;
}

void ClosedFormSolution::check_point(const Vec& x) const {
  require(x.size() == n_, ErrorCode::OutOfDomain, "dimension mismatch");
  if (family_ == Family::SkewedQuadratic) {
    require((x - shift_).norm() <= r_out_ * (1.0 + kEvalSlack),
            ErrorCode::OutOfDomain, "point beyond the outer circle");
    return;
  }
  Vec c = (family_ == Family::SkewedShifted) ? shift_ : Vec(Vec::Zero(n_));
  double rho = (x - c).norm();
  if (family_ == Family::SkewedShifted) {
    require(rho >= r_in_ * (1.0 - kEvalSlack), ErrorCode::ValidityViolated,
            "point inside the profile's inner radius");
  } else {
    require(rho >= r_in_ * (1.0 - kEvalSlack), ErrorCode::OutOfDomain,
            "point inside the inner circle");
  }
  require(rho <= r_out_ * (1.0 + kEvalSlack), ErrorCode::OutOfDomain,
          "point beyond the outer circle");
}

double ClosedFormSolution::u_of_r(double r) const {
  switch (family_) {
    case Family::RadialConcentric2D: {
      auto F = [this](double s) {
        double q = std::sqrt(std::max(s * s + D_, 0.0));
        return s * q + D_ * std::log(s + q);
      };
      return 0.5 * psi_ * (F(r) - F(r_out_));
    }
    case Family::RadialConcentricND: {
      if (r == r_out_) return 0.0;
      return -integrate([this](double s) { return ur_of_r(s); }, r, r_out_,
                        1e-12);
    }
    case Family::GradientBlowup: {
      auto G = [this](double s) {
        double q = A_ - s;
        return q * (std::log(q) - 1.0);
      };
      return G(r) - G(r_out_);
    }
    default:
      raise(ErrorCode::UnsupportedFamily, "not a radial profile");
  }
}

double ClosedFormSolution::ur_of_r(double r) const {
  switch (family_) {
    case Family::RadialConcentric2D:
      return psi_ * std::sqrt(std::max(r * r + D_, 0.0));
    case Family::RadialConcentricND: {
      double pn = std::pow(psi_, n_);
      double arg = pn * (std::pow(r, n_) - std::pow(r_in_, n_)) +
                   std::pow(d_, n_);
      return std::pow(arg, 1.0 / n_);
    }
    case Family::GradientBlowup:
      return -std::log(A_ - r);
    default:
      raise(ErrorCode::UnsupportedFamily, "not a radial profile");
  }
}

double ClosedFormSolution::urr_of_r(double r) const {
  switch (family_) {
    case Family::RadialConcentric2D:
      return psi_ * r / std::sqrt(std::max(r * r + D_, 1e-300));
    case Family::RadialConcentricND: {
      double pn = std::pow(psi_, n_);
      return pn * std::pow(r, n_ - 1) / std::pow(ur_of_r(r), n_ - 1);
    }
    case Family::GradientBlowup:
      return 1.0 / (A_ - r);
    default:
      raise(ErrorCode::UnsupportedFamily, "not a radial profile");
  }
}

EvalResult ClosedFormSolution::eval(const Vec& x) const {
  check_point(x);
  EvalResult out;
  if (family_ == Family::SkewedQuadratic) {
    Vec y = x - shift_;
    out.u = 0.5 * psi_ * y.squaredNorm() - 0.5 * psi_ * r_out_ * r_out_;
    out.grad = psi_ * y;
    out.hess = psi_ * Mat::Identity(2, 2);
    return out;
  }
  if (family_ == Family::SkewedShifted) {
    return base_->eval(x - shift_);
  }
  double r = x.norm();
  double ur = ur_of_r(r), urr = urr_of_r(r);
  out.u = u_of_r(r);
  out.grad = (ur / r) * x;
  out.hess = radial_hessian(n_, r, ur, urr, x).hess;
  return out;
}

double ClosedFormSolution::inner_dnn() const {
  switch (family_) {
    case Family::RadialConcentric2D:
      // Second normal derivative of the extension u(|x|) along nu = x/|x|:
      // the curvature of the normal field contributes u_r / r_inner.
      return psi_ * psi_ * r_in_ / d_ + d_ / r_in_;
    case Family::RadialConcentricND:
      return std::pow(psi_, n_) * std::pow(r_in_, n_ - 1) /
             std::pow(d_, n_ - 1);
    case Family::GradientBlowup:
      return urr_of_r(r_in_) + ur_of_r(r_in_) / r_in_;
    default:
      raise(ErrorCode::UnsupportedFamily,
            "inner_dnn needs a radial profile family");
  }
}

double ClosedFormSolution::rhs(const Vec& x, double /*z*/, const Vec& p) const {
  if (family_ == Family::GradientBlowup) {
    double r2 = x.squaredNorm();
    double s = x.dot(p);
    return (s / r2) * std::exp(s / std::sqrt(r2));
  }
  return std::pow(psi_, n_);
}

PsiSpec ClosedFormSolution::psi_spec() const {
  if (family_ == Family::GradientBlowup) {
    return PsiSpec::of_xzp([](const Vec& x, double, const Vec& p) {
      double r2 = x.squaredNorm();
      double s = x.dot(p);
      // Only the cone x.p > 0 is reachable by convex profiles; extend by a
      // positive floor so positivity sampling is meaningful.
      double v = (s / r2) * std::exp(s / std::sqrt(r2));
      return std::sqrt(std::max(v, 1e-300));
    });
  }
  return PsiSpec::constant(psi_);
}

double ClosedFormSolution::sup_grad() const {
  switch (family_) {
    case Family::RadialConcentric2D:
    case Family::RadialConcentricND:
    case Family::GradientBlowup:
      return ur_of_r(r_out_);
    case Family::SkewedQuadratic:
      return psi_ * r_out_;
    case Family::SkewedShifted:
      return base_->ur_of_r(r_out_);
  }
  return 0.0;
}

double ClosedFormSolution::robin_phi(double gamma0) const {
  switch (family_) {
    case Family::RadialConcentric2D:
    case Family::RadialConcentricND:
    case Family::GradientBlowup:
      return d_ - gamma0 * u_of_r(r_in_);
    default:
      raise(ErrorCode::UnsupportedFamily,
            "Robin data is not constant for skewed families");
  }
}

double PhiSequence::phi_of_d(double d) const {
  require(d > 0.0, ErrorCode::ParameterOutOfRange, "d must be positive");
  const double Rm = r_inner, Rp = r_outer;
  double dd = (d / psi) * (d / psi);
  double inner_part = Rm * d - psi * (Rm * Rm - dd) * std::log(Rm + d / psi);
  double root = std::sqrt(Rp * Rp - Rm * Rm + dd);
  double outer_part = Rp * root - (Rm * Rm - dd) * std::log(Rp + root);
  return d - 0.5 * gamma0 * inner_part + 0.5 * psi * gamma0 * outer_part;
}

double PhiSequence::phi_k(std::size_t k) const {
  require(k < d_values.size(), ErrorCode::IndexOutOfRange, "k out of range");
  return phi_of_d(d_values[k]);
}

double critical_phi(double psi, double gamma0, double r_inner, double mu) {
  require(psi > 0.0 && gamma0 > 0.0 && r_inner > 0.0,
          ErrorCode::ParameterOutOfRange, "parameters must be positive");
  require(mu > 1.0, ErrorCode::BadMu, "mu must exceed 1");
  double root = std::sqrt(mu * mu - 1.0);
  return 0.5 * psi * gamma0 * (mu * root - std::log(mu + root)) * r_inner *
         r_inner;
}

double skewed_inner_neumann(const ClosedFormSolution& sol,
                            const AnnularDomain& dom, const Vec& x) {
  require(sol.family() == ClosedFormSolution::Family::SkewedQuadratic,
          ErrorCode::UnsupportedFamily, "needs the skewed quadratic");
  Vec nu = dom.inner_normal(x);  // raises PointNotOnBoundary
  return sol.psi() *
         ((dom.center_inner() - sol.center_outer()).dot(nu) + dom.r_inner());
}

BlowupFamily blowup_gradient_family(const ClosedFormSolution& fam,
                                    double gamma0) {
  require(fam.family() == ClosedFormSolution::Family::GradientBlowup,
          ErrorCode::UnsupportedFamily, "needs the blow-up family");
  BlowupFamily out;
  out.u = [fam](double r) { return fam.u_of_r(r); };
  out.sup_grad = fam.sup_grad();
  out.gamma0 = gamma0;
  out.phi = fam.robin_phi(gamma0);
  return out;
}

double polar_det(double u_r, double u_rr, double u_rtheta, double u_theta,
                 double u_thetatheta, double r) {
  require(r > 0.0, ErrorCode::ParameterOutOfRange, "radius must be positive");
  double cross = u_rtheta - u_theta / r;
  return u_rr * u_r / r + u_rr * u_thetatheta / (r * r) -
         cross * cross / (r * r);
}

RadialHessian radial_hessian(int n, double r, double u_r, double u_rr,
                             const Vec& x) {
  require(x.size() == n, ErrorCode::ParameterOutOfRange, "dimension mismatch");
  require(std::abs(x.norm() - r) <= 1e-10 * std::max(1.0, r),
          ErrorCode::ParameterOutOfRange, "|x| must equal r");
  Vec xhat = x / x.norm();
  Mat proj = xhat * xhat.transpose();
  RadialHessian out;
  out.hess = (u_r / r) * (Mat::Identity(n, n) - proj) + u_rr * proj;
  out.det = u_rr * std::pow(u_r / r, n - 1);
  return out;
}

}  // namespace malab
