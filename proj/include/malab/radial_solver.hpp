#pragma once

#include <vector>

#include "malab/problem.hpp"

namespace malab {

// Solution profile of the reduced radial problem on [r_inner, r_outer].
struct RadialProfile {
  std::vector<double> r_nodes;
  std::vector<double> u, u_r, u_rr;
  double d_star = 0.0;      // recovered inner slope
  double residual = 0.0;    // Neumann residual |u_r(R-) - gamma0 u(R-) - phi|
  int iterations = 0;

  double u_inner() const { return u.front(); }
  double sup_ode_residual(const ProblemSpec& spec) const;
};

// Integrates u_rr (u_r/r)^{n-1} = psi^n(r, u, u_r) outward from r_inner with
// inner slope d, then anchors u by the Dirichlet condition u(r_outer) = 0.
// For psi depending on u the two passes iterate to a fixed point.
RadialProfile integrate_outward(const ProblemSpec& spec, double d, int nodes);

// Shooting on the inner slope: finds d with u_r(R-) = gamma0 u(R-) + phi.
RadialProfile shoot(const ProblemSpec& spec, double d_lo, double d_hi,
                    double tol = 1e-10, int nodes = 1024, int max_iter = 100);

struct BlowupRow {
  double d = 0.0;
  double phi_k = 0.0;
  double u_nn_inner = 0.0;
  double sup_grad = 0.0;
};

// For each d, solves with phi = phi_k(d) and reports the inner double
// normal derivative (which blows up as d -> 0).
std::vector<BlowupRow> blowup_sweep(const ProblemSpec& spec,
                                    const std::vector<double>& d_list,
                                    int nodes = 1024);

// All shooting roots found by scanning [d_lo, d_hi] in nscan panels
// (gradient-dependent psi can make the residual non-monotone).
std::vector<double> bracket_roots(const ProblemSpec& spec, double d_lo,
                                  double d_hi, int nscan = 64,
                                  double tol = 1e-10, int nodes = 1024);

}  // namespace malab
