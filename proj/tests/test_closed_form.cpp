#include <doctest.h>

#include <cmath>

#include "malab/closed_form.hpp"

using namespace malab;

namespace {

Vec v2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

// Deterministic sample points filling the annulus.
Vec annulus_point(int k, int total, double r_in, double r_out, int n = 2) {
  double fr = (k % 97) / 96.0;
  double ft = static_cast<double>(k) / total;
  double r = r_in + (r_out - r_in) * fr;
  double t = 2.0 * std::numbers::pi * ft;
  Vec x(n);
  x.setZero();
  x[0] = r * std::cos(t);
  x[1] = r * std::sin(t);
  return x;
}

}  // namespace

TEST_CASE("radial family solves det D^2 u = psi^2 with the right traces") {
  for (double d : {1.0, 0.5, 0.1}) {
    auto sol = ClosedFormSolution::radial2d(1.0, 1.0, 2.0, d);
    for (int k = 0; k < 1000; ++k) {
      Vec x = annulus_point(k, 1000, 1.0, 2.0);
      auto ev = sol.eval(x);
      CHECK(std::abs(ev.hess.determinant() - 1.0) <= 1e-10);
    }
    // Dirichlet trace on the outer circle, Neumann slope on the inner one.
    for (int k = 0; k < 64; ++k) {
      double t = 2.0 * std::numbers::pi * k / 64;
      CHECK(std::abs(sol.u_of_r(2.0)) <= 1e-10);
      Vec xi = v2(std::cos(t), std::sin(t));
      auto ev = sol.eval(xi);
      CHECK(std::abs(ev.grad.dot(xi) - d) <= 1e-10);
    }
    CHECK(std::abs(sol.ur_of_r(1.0) - d) <= 1e-14);
  }
}

TEST_CASE("radial profile identities") {
  auto sol = ClosedFormSolution::radial2d(2.0, 1.0, 2.0, 0.7);
  double D = -1.0 + 0.7 * 0.7 / 4.0;
  for (double r : {1.0, 1.3, 1.7, 2.0}) {
    CHECK(sol.ur_of_r(r) == doctest::Approx(2.0 * std::sqrt(r * r + D)).epsilon(1e-13));
    // det in polar form: u_rr * u_r / r = psi^2.
    CHECK(sol.urr_of_r(r) * sol.ur_of_r(r) / r == doctest::Approx(4.0).epsilon(1e-13));
  }
  CHECK(sol.u_of_r(2.0) == doctest::Approx(0.0));
}

TEST_CASE("quadratic member of the radial family") {
  // d = psi * r_inner collapses the profile to (psi/2)(r^2 - R+^2).
  auto sol = ClosedFormSolution::radial2d(3.0, 1.0, 2.0, 3.0);
  CHECK(sol.u_of_r(1.5) == doctest::Approx(1.5 * (2.25 - 4.0)).epsilon(1e-14));
  CHECK(sol.inner_dnn() == doctest::Approx(6.0).epsilon(1e-14));
}

TEST_CASE("inner double normal derivative blows up like 1/d") {
  auto sol = ClosedFormSolution::radial2d(1.0, 1.0, 2.0, 0.1);
  CHECK(std::abs(sol.inner_dnn() - 10.1) <= 1e-10 * 10.1);

  // Tiny slope: value crosses 1e6.
  auto steep = ClosedFormSolution::radial2d(1.0, 1.0, 2.0, 1e-6);
  CHECK(steep.inner_dnn() >= 1e6 * (1.0 - 1e-9));

  // Dimension three: psi^3 R-^2 / d^2.
  auto nd = ClosedFormSolution::radial_nd(3, 1.0, 1.0, 2.0, 0.1);
  CHECK(std::abs(nd.inner_dnn() - 100.0) <= 1e-10 * 100.0);
}

TEST_CASE("n-dimensional radial family") {
  auto sol = ClosedFormSolution::radial_nd(3, 1.0, 1.0, 2.0, 0.5);
  // Slope closed form and the quadrature-based u agree through a finite
  // difference; the PDE holds through the Hessian.
  double h = 1e-6;
  for (double r : {1.2, 1.6, 1.9}) {
    double fd = (sol.u_of_r(r + h) - sol.u_of_r(r - h)) / (2.0 * h);
    CHECK(fd == doctest::Approx(sol.ur_of_r(r)).epsilon(1e-9));
    Vec x(3);
    x << r, 0.0, 0.0;
    auto ev = sol.eval(x);
    CHECK(std::abs(ev.hess.determinant() - 1.0) <= 1e-10);
  }
  CHECK(std::abs(sol.u_of_r(2.0)) <= 1e-12);
  CHECK(sol.ur_of_r(1.0) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("Robin data of the radial family") {
  auto one = ClosedFormSolution::radial2d(1.0, 1.0, 2.0, 1.0);
  CHECK(one.robin_phi(1.0) == doctest::Approx(2.5).epsilon(1e-14));
  auto half = ClosedFormSolution::radial2d(1.0, 1.0, 2.0, 0.5);
  CHECK(half.robin_phi(1.0) ==
        doctest::Approx(1.70392584161771935906468021335).epsilon(1e-14));
}

TEST_CASE("phi sequence: closed form, monotonicity, threshold") {
  PhiSequence seq;
  seq.d_values = {1.0, 0.5, 0.1, 1e-3, 1e-6};
  CHECK(seq.phi_k(0) == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(seq.phi_k(1) ==
        doctest::Approx(1.70392584161771935906468021335).epsilon(1e-14));
  CHECK_THROWS_AS(seq.phi_k(5), Error);

  for (std::size_t k = 0; k + 1 < seq.d_values.size(); ++k)
    CHECK(seq.phi_k(k) > seq.phi_k(k + 1));

  double crit = critical_phi(1.0, 1.0, 1.0, 2.0);
  CHECK(crit == doctest::Approx(1.07357185910646893921492316785).epsilon(1e-14));
  CHECK_THROWS_AS(critical_phi(1.0, 1.0, 1.0, 1.0), Error);

  // The sequence approaches the threshold from above, with a first-order
  // gap in d: phi(d) - crit = d + O(d^2 log d).
  double gap = seq.phi_k(4) - crit;
  CHECK(gap > 0.0);
  CHECK(std::abs(gap - 1e-6) <= 1e-11);
  CHECK(std::abs(seq.phi_k(4) - 1e-6 - crit) <= 1e-11);
}

TEST_CASE("skewed quadratic spot values") {
  auto dom = AnnularDomain::skewed2d(v2(0.25, 0.0), 0.5, v2(1.0, 0.0), 2.0);
  auto sol = ClosedFormSolution::skewed_quadratic(1.0, v2(1.0, 0.0), 2.0);

  CHECK(std::abs(skewed_inner_neumann(sol, dom, v2(0.75, 0.0)) + 0.25) <= 1e-12);
  double s5 = std::sqrt(5.0) / 6.0;
  CHECK(std::abs(skewed_inner_neumann(sol, dom, v2(7.0 / 12.0, s5))) <= 1e-12);
  CHECK(std::abs(skewed_inner_neumann(sol, dom, v2(7.0 / 12.0, -s5))) <= 1e-12);

  // Quadratic Hessian: psi * I everywhere; zero on the outer circle.
  auto ev = sol.eval(v2(0.5, 0.9));
  CHECK((ev.hess - Mat::Identity(2, 2)).norm() <= 1e-13);
  CHECK(std::abs(sol.eval(v2(3.0, 0.0)).u) <= 1e-13);
  CHECK_THROWS_AS(skewed_inner_neumann(sol, dom, v2(1.5, 0.0)), Error);
}

TEST_CASE("shifted radial profile keeps its validity window") {
  auto base = ClosedFormSolution::radial2d(1.0, 0.5, 3.5, 0.5);
  auto dom = AnnularDomain::skewed2d(v2(0.25, 0.0), 0.75, v2(0.4, 0.0), 3.5);
  auto sol = ClosedFormSolution::skewed_shifted(base, v2(0.4, 0.0), dom);
  Vec x = v2(2.0, 1.0);
  auto ev = sol.eval(x);
  Vec shifted = x - v2(0.4, 0.0);
  CHECK(ev.u == doctest::Approx(base.eval(shifted).u).epsilon(1e-14));
  CHECK(std::abs(ev.hess.determinant() - 1.0) <= 1e-10);

  // Hole too close to the shifted center: profile would leave its domain.
  auto tight = AnnularDomain::skewed2d(v2(0.2, 0.0), 0.3, v2(0.4, 0.0), 3.5);
  CHECK_THROWS_AS(ClosedFormSolution::skewed_shifted(base, v2(0.4, 0.0), tight),
                  Error);
  // Outer radii must line up.
  auto wrong = AnnularDomain::skewed2d(v2(0.25, 0.0), 0.75, v2(0.4, 0.0), 3.0);
  CHECK_THROWS_AS(ClosedFormSolution::skewed_shifted(base, v2(0.4, 0.0), wrong),
                  Error);
}

TEST_CASE("logarithmic family: blow-up of the gradient near the width cap") {
  auto sol = ClosedFormSolution::gradient_blowup(1.0, 1.5, 0.5);
  CHECK(sol.sup_grad() ==
        doctest::Approx(2.23932245063781880537959033161).epsilon(1e-14));
  CHECK(sol.robin_phi(1.0) ==
        doctest::Approx(1.0647088318805588795913400614).epsilon(1e-13));
  CHECK(sol.inner_dnn() ==
        doctest::Approx(std::exp(0.5) + 0.5).epsilon(1e-13));
  CHECK(std::abs(sol.u_of_r(1.5)) <= 1e-14);
  CHECK(sol.ur_of_r(1.0) == doctest::Approx(0.5).epsilon(1e-14));

  // The family satisfies its own gradient-dependent equation.
  for (int k = 0; k < 200; ++k) {
    Vec x = annulus_point(k, 200, 1.0, 1.5);
    auto ev = sol.eval(x);
    double det = ev.hess.determinant();
    double rhs = sol.rhs(x, ev.u, ev.grad);
    CHECK(std::abs(det - rhs) <= 1e-10 * std::max(1.0, std::abs(rhs)));
  }

  // Width must stay below one for the logarithm to make sense.
  CHECK_THROWS_AS(ClosedFormSolution::gradient_blowup(1.0, 2.0, 0.5), Error);
}

TEST_CASE("evaluation is fenced to the closed annulus") {
  auto sol = ClosedFormSolution::radial2d(1.0, 1.0, 2.0, 0.5);
  CHECK_THROWS_AS(sol.eval(v2(0.5, 0.0)), Error);
  CHECK_THROWS_AS(sol.eval(v2(2.5, 0.0)), Error);
  CHECK_NOTHROW(sol.eval(v2(2.0, 0.0)));
}

TEST_CASE("polar determinant matches the Cartesian one") {
  auto sol = ClosedFormSolution::radial2d(1.0, 1.0, 2.0, 0.5);
  for (double r : {1.1, 1.6}) {
    double det = polar_det(sol.ur_of_r(r), sol.urr_of_r(r), 0.0, 0.0, 0.0, r);
    CHECK(det == doctest::Approx(1.0).epsilon(1e-12));
  }
  // Angular wiggle: u = r^2/2 + eps r^3 cos(3 theta) style test via direct
  // numbers (hand-expanded determinant of a known Hessian).
  double r = 1.5, ur = 2.0, urr = 1.0, urt = 0.3, ut = 0.6, utt = 0.9;
  double cross = urt - ut / r;
  double expected = urr * (ur / r + utt / (r * r)) - cross * cross / (r * r);
  CHECK(polar_det(ur, urr, urt, ut, utt, r) == doctest::Approx(expected));
}

TEST_CASE("radial Hessian assembly") {
  Vec x = v2(0.6, 0.8);  // |x| = 1
  auto rh = radial_hessian(2, 1.0, 0.5, 2.0, x);
  CHECK(rh.det == doctest::Approx(2.0 * 0.5).epsilon(1e-13));
  CHECK(rh.hess.determinant() == doctest::Approx(rh.det).epsilon(1e-12));
  // Eigenvector along x has eigenvalue u_rr.
  CHECK((rh.hess * x - 2.0 * x).norm() <= 1e-12);
  CHECK_THROWS_AS(radial_hessian(2, 2.0, 0.5, 2.0, x), Error);
}

TEST_CASE("psi spec attached to each family reproduces its right-hand side") {
  auto rad = ClosedFormSolution::radial2d(1.5, 1.0, 2.0, 0.5);
  auto ps = rad.psi_spec();
  Vec x = v2(1.2, 0.3);
  CHECK(ps.rhs(x, -1.0, v2(0.1, 0.2), 2) == doctest::Approx(2.25));

  auto blow = ClosedFormSolution::gradient_blowup(1.0, 1.5, 0.5);
  auto bs = blow.psi_spec();
  Vec y = v2(1.2, 0.0);
  auto ev = blow.eval(y);
  CHECK(bs.rhs(y, ev.u, ev.grad, 2) ==
        doctest::Approx(blow.rhs(y, ev.u, ev.grad)).epsilon(1e-12));

  auto fam = blowup_gradient_family(blow, 2.0);
  CHECK(fam.sup_grad == doctest::Approx(blow.sup_grad()));
  CHECK(fam.u(1.5) == doctest::Approx(0.0));
  CHECK(fam.gamma0 == 2.0);
}
