#pragma once

#include "malab/radial_solver.hpp"

namespace malab {

// Radial state of the parabolic problem -u_t det D^2 u = psi^n.
struct FlowState {
  double t = 0.0;
  std::vector<double> r_nodes;
  std::vector<double> u;
  std::vector<double> ut;   // diagnostic u_t = -psi^n / det D^2 u
  double sup_abs_ut = 0.0;
  double min_abs_ut = 0.0;
  double sup_abs_u = 0.0;
};

struct FlowSeries {
  std::vector<double> t;
  std::vector<double> sup_u;
  std::vector<double> sup_ut;
  std::vector<double> min_ut;
  std::vector<double> inner_trace;
  std::vector<double> outer_trace;
};

// One explicit step of size at most dt (clamped by the stability cap).
// Returns the actual step taken.
double flow_step(FlowState& state, const ProblemSpec& spec, double dt);

struct FlowRunResult {
  FlowState final_state;
  FlowSeries series;
  double max_sup_ut = 0.0;   // over the whole run
  double min_min_ut = 0.0;   // smallest |u_t| witness
  double max_igcf_residual = 0.0;  // graph identity residual, IGCF runs only
};

// Runs the flow from u0 (a radial elliptic solution at t=0) to time T.
FlowRunResult flow_run(const ProblemSpec& spec,
                       const std::vector<double>& r_nodes,
                       const std::vector<double>& u0, double T, double dt);

// Audit over a recorded series.
struct UtBoundsAudit {
  double min_abs_ut = 0.0;
  double max_abs_ut = 0.0;
  bool violated = false;
};
UtBoundsAudit ut_bounds_audit(const FlowSeries& series, double CT_upper);

}  // namespace malab
