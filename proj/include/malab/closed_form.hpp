#pragma once

#include <memory>
#include <vector>

#include "malab/problem.hpp"

namespace malab {

struct EvalResult {
  double u = 0.0;
  Vec grad;
  Mat hess;
};

// Exact solution families used as oracles throughout the test suites.
class ClosedFormSolution {
 public:
  enum class Family {
    RadialConcentric2D,
    RadialConcentricND,
    SkewedQuadratic,
    SkewedShifted,
    GradientBlowup,
  };

  // Radial solution on the 2-D concentric annulus with constant psi and
  // prescribed inner slope d_k.
  static ClosedFormSolution radial2d(double psi, double r_inner,
                                     double r_outer, double d_k);
  // Same family in dimension n >= 2 (u by quadrature from the exact slope).
  static ClosedFormSolution radial_nd(int n, double psi, double r_inner,
                                      double r_outer, double d_k);
  // u = (psi/2)|x - center_outer|^2 - (psi/2) r_outer^2 on a skewed annulus.
  static ClosedFormSolution skewed_quadratic(double psi, const Vec& center_outer,
                                             double r_outer);
  // v(x) = u_inner(x - center_outer) where u_inner is a radial2d profile;
  // requires |x - center_outer| >= r_inner on all of the given domain.
  static ClosedFormSolution skewed_shifted(const ClosedFormSolution& inner,
                                           const Vec& center_outer,
                                           const AnnularDomain& dom);
  // Logarithmic family whose gradient blows up as d_k approaches the cap
  // -ln(r_outer - r_inner); requires r_outer - r_inner < 1.
  static ClosedFormSolution gradient_blowup(double r_inner, double r_outer,
                                            double d_k);

  Family family() const { return family_; }
  int dim() const { return n_; }
  double psi() const { return psi_; }
  double r_inner() const { return r_in_; }
  double r_outer() const { return r_out_; }
  double d_k() const { return d_; }
  const Vec& center_outer() const { return shift_; }

  EvalResult eval(const Vec& x) const;

  // Radial profile helpers (radial families and gradient blow-up only).
  double u_of_r(double r) const;
  double ur_of_r(double r) const;
  double urr_of_r(double r) const;

  // Double normal derivative on the inner boundary, closed form.
  double inner_dnn() const;

  // psi^n(x, z, p) this family solves (the blow-up family carries its own
  // gradient-dependent right-hand side).
  double rhs(const Vec& x, double z, const Vec& p) const;
  PsiSpec psi_spec() const;

  // Largest gradient norm over the closed annulus.
  double sup_grad() const;
  // Robin data value phi = u_nu - gamma0*u on the inner circle (radial and
  // blow-up families: constant).
  double robin_phi(double gamma0) const;

 private:
  ClosedFormSolution() = default;
  void check_point(const Vec& x) const;

  Family family_ = Family::RadialConcentric2D;
  int n_ = 2;
  double psi_ = 1.0;
  double r_in_ = 1.0, r_out_ = 2.0;
  double d_ = 1.0;
  double D_ = 0.0;      // -r_in^2 + (d/psi)^2 for the 2-D family
  double A_ = 0.0;      // e^{-d} + r_in for the blow-up family
  Vec shift_;           // outer center for the skewed families
  std::shared_ptr<ClosedFormSolution> base_;  // shifted profile
};

// Sequence d_1 > d_2 > ... > 0 with the matching Robin data values phi_k.
struct PhiSequence {
  double psi = 1.0;
  double gamma0 = 1.0;
  double r_inner = 1.0;
  double r_outer = 2.0;
  std::vector<double> d_values;

  double phi_k(std::size_t k) const;
  // phi as a closed-form function of the slope d (same formula, any d > 0).
  double phi_of_d(double d) const;
};

// Limiting threshold: no strictly convex radial solution exists below it.
double critical_phi(double psi, double gamma0, double r_inner, double mu);

// Neumann trace of the skewed quadratic on the inner circle of dom.
double skewed_inner_neumann(const ClosedFormSolution& sol,
                            const AnnularDomain& dom, const Vec& x);

struct BlowupFamily {
  std::function<double(double)> u;   // of the radius
  double sup_grad = 0.0;
  double phi = 0.0;                  // Robin data for gamma0 stored below
  double gamma0 = 1.0;
};
BlowupFamily blowup_gradient_family(const ClosedFormSolution& fam,
                                    double gamma0);

// Determinant of the 2-D Hessian written in polar derivatives.
double polar_det(double u_r, double u_rr, double u_rtheta, double u_theta,
                 double u_thetatheta, double r);

// Hessian of a radial function at x with |x| = r, plus its determinant
// u_rr (u_r/r)^{n-1}.
struct RadialHessian {
  Mat hess;
  double det = 0.0;
};
RadialHessian radial_hessian(int n, double r, double u_r, double u_rr,
                             const Vec& x);

}  // namespace malab
