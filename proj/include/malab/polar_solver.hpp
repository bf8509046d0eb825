#pragma once

#include "malab/grid_field.hpp"

namespace malab {

struct NewtonReport {
  int iterations = 0;
  double final_residual_sup = 0.0;
  std::vector<double> damping_history;
  std::vector<double> residual_history;
  double convexity_min_eig = 0.0;
};

// Discrete residual of det D^2 u = psi^n with Robin inner / Dirichlet outer
// boundary rows, on the polar grid.
GridField discrete_residual(const GridField& field, const ProblemSpec& spec);

// Damped Newton iteration on the discrete system.
struct PolarSolveResult {
  GridField field;
  NewtonReport report;
};
PolarSolveResult newton_solve(const ProblemSpec& spec, const GridField& init,
                              double tol = 1e-10, int max_iter = 50);

// Default initial iterate: the concentric quadratic with slope psi_ref * r.
GridField quadratic_init(const ProblemSpec& spec, int Nr, int Ntheta,
                         double psi_ref);

struct ConvergenceRow {
  int Nr = 0, Ntheta = 0;
  double sup_error = 0.0;
  double observed_order = 0.0;  // vs previous row; 0 for the first
};

std::vector<ConvergenceRow> convergence_study(
    const ProblemSpec& spec, const std::function<double(const Vec&)>& exact,
    const std::vector<std::pair<int, int>>& grids, double tol = 1e-10);

// Deterministic sector estimate of the image area integral
// int_{Du(Omega)} (1+|p|^2)^{-(n+2)/2} dp for the solved field.
double gradient_map_mass(const GridField& field, int n);

}  // namespace malab
