#pragma once

#include <functional>
#include <vector>

#include "malab/types.hpp"

namespace malab {

using Fn1 = std::function<double(double)>;
using FnV = std::function<double(const Vec&)>;

// --- quadrature -----------------------------------------------------------
//
// Composite 16-node Gauss-Legendre with adaptive bisection to a relative
// tolerance; unbounded integrals by dyadic shells truncated when a shell
// contributes less than `shell_cut` of the running total.

double gl16_panel(const Fn1& f, double a, double b);
double integrate(const Fn1& f, double a, double b, double rel_tol = 1e-8);
double integrate_to_infinity(const Fn1& f, double a, double rel_tol = 1e-8,
                             double shell_cut = 1e-12);

// Integral of h over the sphere of radius s in R^n (n in {1,2,3}), i.e. the
// (n-1)-dimensional surface measure. n=1 means the two-point set {-s, +s}.
double sphere_integral(const FnV& h, int n, double s, double rel_tol = 1e-8);

// Integral of h over the ball |p| <= R in R^n.
double integrate_ball(const FnV& h, int n, double R, double rel_tol = 1e-8);

// Integral of h over all of R^n (dyadic-shell truncation).
double integrate_rn(const FnV& h, int n, double rel_tol = 1e-8,
                    double shell_cut = 1e-12);

// --- root finding / minimization ------------------------------------------

// Bisection refined by Newton-from-finite-difference; requires sign change.
double find_root(const Fn1& f, double lo, double hi, double tol = 1e-12,
                 int max_iter = 200);

// Expands hi by doubling until f changes sign; NoRoot after max_doublings.
double grow_bracket_and_solve(const Fn1& f, double lo, double hi_start,
                              double tol = 1e-12, int max_doublings = 60);

double golden_section_min(const Fn1& f, double a, double b, double tol = 1e-10);

// --- finite differences ----------------------------------------------------

// Fourth-order central first derivative of f along direction e at x.
double fd_dir1(const FnV& f, const Vec& x, const Vec& e, double h);
// Fourth-order central second derivative along e.
double fd_dir2(const FnV& f, const Vec& x, const Vec& e, double h);

// --- deterministic point sets ----------------------------------------------

// Fibonacci-lattice points on the unit sphere in R^3.
std::vector<Vec> fibonacci_sphere(int count);

// Halton sequence point in [0,1)^dim (deterministic quasi-random sampling).
Vec halton_point(int index, int dim);

}  // namespace malab
