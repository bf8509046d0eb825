#pragma once

#include <map>
#include <optional>
#include <string>

#include "malab/closed_form.hpp"
#include "malab/grid_field.hpp"

namespace malab {

// A-priori constants, each tagged with the formula it came from.
struct BoundConstants {
  std::optional<double> C0, C1, C3;
  std::optional<double> C0_prime, C1_loc;
  std::optional<double> M, ell1, ell2, ell3;
  std::optional<double> CT_upper, C0_T, C1_T, CT_lower_witness;
  std::map<std::string, std::string> formula_id;

  void set(const std::string& name, double value, const std::string& formula);
};

// Defining function data for the gradient bound: rho < 0 on the annulus,
// rho = 0 on the outer boundary, D^2 rho >= lambda_min, |D rho| <= 1 there.
struct DefiningFunction {
  double lambda_min = 0.0;
  double sup_grad_on_outer = 0.0;
  double min_abs_on_inner = 0.0;
  double max_abs_on_inner = 0.0;
};

// rho = (|x - center_outer|^2 - r_outer^2) / (2 r_outer).
DefiningFunction default_defining_function(const AnnularDomain& dom);

// Gauge g(u) multiplying u_xixi in the barrier.
struct BarrierSpec {
  enum class Gauge { Reciprocal, PowerLaw };
  Gauge gauge = Gauge::Reciprocal;
  double M = 1.0;        // Reciprocal: g = 1/(M - u)
  double M_tilde = 1.0;  // PowerLaw: g = (M_tilde + (1-N^4) u)^{1/(1-N^4)}
  double N = 0.0;        // PowerLaw exponent parameter; also the weight in w~
  Vec xi;                // fixed direction
  bool weighted = false; // multiply by e^{N |Du|^2}
};

double gauge_value(const BarrierSpec& b, double u);
double gauge_d1(const BarrierSpec& b, double u);
double gauge_d2(const BarrierSpec& b, double u);

// sup |u| bound: C0 = sqrt(e) * max{ sup psi / (K (1 - K max|x|^2)),
//                                    max_inner |phi| / (K m0) }.
double c0_bound(const ProblemSpec& spec, double K);
// Same, minimized over K on a 64-point log grid.
double c0_bound_auto(const ProblemSpec& spec, double* K_best = nullptr);

// sup |Du| bound from a defining function.
double c1_bound(const ProblemSpec& spec, const DefiningFunction& rho, double C0);

// Mixed second derivative bound on the inner boundary.
double c3_bound(const ProblemSpec& spec, double C1);

struct PsiNorms {
  double sup = 1.0;
  double sup_dlog = 0.0;
  double sup_d2log = 0.0;
};

struct BarrierNorms {
  double a_sup = 0.0, da_sup = 0.0, d2a_sup = 0.0;
  double b_sup = 0.0, db_sup = 0.0, d2b_sup = 0.0, d3phi_sup = 0.0;
  double ell1 = 0.0, ell2 = 0.0, ell3 = 0.0;
  int grid = 0;
};

// Supremum norms of the barrier coefficient fields a_k, b and the ell
// aggregates, by dense sampling with finite differences.
BarrierNorms sample_barrier_norms(const ProblemSpec& spec, const Vec& xi,
                                  double C1, const PsiNorms& psi_norms = {},
                                  int grid = 96);

// Threshold for the barrier weight M.
double m_bound(const BarrierNorms& norms, const PsiNorms& psi_norms, double C1,
               int n);

// Pointwise barrier w = g(u) u_xixi + a_k u_k + b + M |x|^2 (or the weighted
// variant) sampled on a polar grid.
GridField barrier_field(const ClosedFormSolution& sol, const ProblemSpec& spec,
                        const BarrierSpec& bspec, int Nr, int Ntheta);

// Residual of the second-linearization identity at x in direction xi, using
// finite differences of the closed-form Hessian at step h.
double linearization_identity_check(const ClosedFormSolution& sol, const Vec& x,
                                    const Vec& xi, double h);
// First-order variant: |F^{ij} u_{ij,xi} - d_xi ln(psi^n)|.
double linearization_first_order_check(const ClosedFormSolution& sol,
                                       const Vec& x, const Vec& xi, double h);

struct FlowConstants {
  double CT_upper = 0.0;
  double C0_T = 0.0;
  double C1_T = 0.0;
};

FlowConstants flow_constants(const ProblemSpec& spec, double sup_u0,
                             const DefiningFunction* rho = nullptr);

// Gradient bound away from the outer boundary: C0' / dist({u <= -lambda}, outer).
double local_gradient_bound(double C0_prime, double lambda,
                            const ClosedFormSolution& sol,
                            const AnnularDomain& dom);

// C0' = (R0 + max_inner |phi|) / gamma0 + R0 * diam(Omega).
double c0_du_bound(double R0, const ProblemSpec& spec);

}  // namespace malab
