#pragma once

#include <map>
#include <string>
#include <vector>

#include "malab/problem.hpp"

namespace malab {

enum class ConditionId {
  Curvature,
  CurvatureDu,
  Structure,
  StructureGradient,
  Subsolution,
  FlowSubsolution,
  PrescribedGauss,
};

const char* condition_id_name(ConditionId id);

// Outcome of one solvability-condition check. margin > 0 means satisfied.
struct ConditionReport {
  ConditionId condition_id = ConditionId::Curvature;
  bool satisfied = false;
  double margin = 0.0;
  std::map<std::string, double> constants_used;
  std::vector<std::string> samples;  // human-readable diagnostics
};

// Probe data for the inner-boundary subsolution inequality: compares the
// Neumann traces of a candidate solution and a subsolution along a geodesic.
struct SubsolutionProbe {
  ScalarField u;
  ScalarField usub;
  Vec x0;
  Vec xi;
  double h = 0.0;  // 0 means the default 1e-3 * r_inner
};

// Curvature smallness on the inner boundary:
//   2 kappa_xi < gamma0 + max{0, min(gamma0 u + phi) / (M - u)}.
ConditionReport check_curvature(const ProblemSpec& spec,
                                const std::function<double(const Vec&)>& u_on_inner,
                                double M);

// Gradient-dependent variant with extra constants N > 1, C_tilde, M_tilde:
//   2 kappa_xi + C_tilde < gamma0 + max{0, min(gamma0 u + phi)/(M_tilde + (1-N^4) u)}.
ConditionReport check_curvature_du(const ProblemSpec& spec,
                                   const std::function<double(const Vec&)>& u_on_inner,
                                   double M_tilde, double N, double C_tilde);

// Mass comparison int_Omega g < int_{R^n} h plus the radius R0 at which the
// ball integral of h matches the domain integral of g.
ConditionReport check_structure(const ProblemSpec& spec,
                                const std::function<double(const Vec&)>& g,
                                const std::function<double(const Vec&)>& h);

// Decay of psi^n near the outer rim: psi^n(x,z,p) <= Z(|z|) d_x^beta |p|^{beta+n+1}
// sampled over a boundary strip of the given width.
ConditionReport check_structure_gradient(const ProblemSpec& spec,
                                         const std::function<double(double)>& Z,
                                         double beta, double band,
                                         double z_min = -1.0);

// Pointwise inner-boundary inequality
//   (1/gamma0) U''(0) + kappa_xi U(0) + usub_xixi(x0) >= tau.
ConditionReport check_subsolution(const SubsolutionProbe& probe,
                                  const ProblemSpec& spec,
                                  double tau_floor = 1e-3);

// Prescribed-Gauss-curvature mass bound int_Omega K < omega_n together with
// K = 0 on the outer boundary.
ConditionReport check_prescribed_gauss(const ProblemSpec& spec);

// Exact volume of the unit ball in R^n.
double unit_ball_volume(int n);

}  // namespace malab
