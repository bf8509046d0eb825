#include "malab/flow_solver.hpp"

#include <algorithm>
#include <cmath>

#include "malab/numerics.hpp"

namespace malab {

namespace {

struct NodeDerivs {
  std::vector<double> ur, urr, det, rhs, ut;
};

// Radial finite differences (one-sided second order at the two rings) plus
// the pointwise diagnostics u_t = -psi^n / det.
NodeDerivs diagnose(const std::vector<double>& r, const std::vector<double>& u,
                    const ProblemSpec& spec) {
  const std::size_t m = r.size();
  const int n = spec.dim();
  const double h = r[1] - r[0];
  NodeDerivs d;
  d.ur.resize(m);
  d.urr.resize(m);
  d.det.resize(m);
  d.rhs.resize(m);
  d.ut.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (i == 0) {
      d.ur[i] = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * h);
      d.urr[i] = (2.0 * u[0] - 5.0 * u[1] + 4.0 * u[2] - u[3]) / (h * h);
    } else if (i == m - 1) {
      d.ur[i] = (3.0 * u[i] - 4.0 * u[i - 1] + u[i - 2]) / (2.0 * h);
      d.urr[i] =
          (2.0 * u[i] - 5.0 * u[i - 1] + 4.0 * u[i - 2] - u[i - 3]) / (h * h);
    } else {
      d.ur[i] = (u[i + 1] - u[i - 1]) / (2.0 * h);
      d.urr[i] = (u[i + 1] - 2.0 * u[i] + u[i - 1]) / (h * h);
    }
    require(d.urr[i] > 0.0 && d.ur[i] > 0.0, ErrorCode::ConvexityLost,
            "profile stopped being strictly convex");
    d.det[i] = d.urr[i] * std::pow(d.ur[i] / r[i], n - 1);
    require(d.det[i] >= 1e-12, ErrorCode::DeterminantFloor,
            "Hessian determinant under the floor");
    Vec x = Vec::Zero(n);
    x[0] = r[i];
    Vec p = Vec::Zero(n);
    p[0] = d.ur[i];
    d.rhs[i] = spec.psi.rhs(x, u[i], p, n);
    d.ut[i] = -d.rhs[i] / d.det[i];
  }
  return d;
}

double phi_at(const ProblemSpec& spec, double r_inner, double t) {
  Vec x = Vec::Zero(spec.dim());
  x[0] = r_inner;
  return spec.flow->phi_t(x, t);
}

double theta_dot_at(const ProblemSpec& spec, double t) {
  if (spec.flow->theta_dot) return spec.flow->theta_dot(t);
  const double h = 1e-6;
  return (spec.flow->theta(t + h) - spec.flow->theta(std::max(0.0, t - h))) /
         (t < h ? h : 2.0 * h);
}

void refresh_state(FlowState& state, const ProblemSpec& spec) {
  NodeDerivs d = diagnose(state.r_nodes, state.u, spec);
  state.ut = d.ut;
  // The outer trace moves exactly with the prescribed Dirichlet data, so its
  // time derivative is reported from that data rather than the quotient.
  state.ut.back() = theta_dot_at(spec, state.t);
  state.sup_abs_ut = 0.0;
  state.min_abs_ut = std::numeric_limits<double>::infinity();
  state.sup_abs_u = 0.0;
  for (std::size_t i = 0; i < state.u.size(); ++i) {
    state.sup_abs_ut = std::max(state.sup_abs_ut, std::abs(state.ut[i]));
    state.min_abs_ut = std::min(state.min_abs_ut, std::abs(state.ut[i]));
    state.sup_abs_u = std::max(state.sup_abs_u, std::abs(state.u[i]));
  }
}

}  // namespace

double flow_step(FlowState& state, const ProblemSpec& spec, double dt) {
  require(spec.flow.has_value(), ErrorCode::MissingFlow, "no flow data");
  require(dt >= 0.0, ErrorCode::ParameterOutOfRange, "dt must be nonnegative");
  if (dt == 0.0) return 0.0;
  const auto& r = state.r_nodes;
  const std::size_t m = r.size();
  const double h = r[1] - r[0];
  NodeDerivs d = diagnose(r, state.u, spec);

  // Two caps: the convexity-safety cap from the determinant level and an
  // explicit-scheme stability cap from the effective diffusivity
  // psi^n (u_r / r) / det^2 of the quotient's u_rr dependence.
  double cap_convex = std::numeric_limits<double>::infinity();
  double diff_max = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    cap_convex = std::min(cap_convex, 0.5 * d.det[i] / d.rhs[i]);
    double diff = d.rhs[i] * (d.ur[i] / r[i]) / (d.det[i] * d.det[i]);
    diff_max = std::max(diff_max, diff);
  }
  double cap_stab = 0.45 * h * h / std::max(diff_max, 1e-300);
  double dt_eff = std::min({dt, cap_convex, cap_stab});
  require(dt_eff > 0.0 && std::isfinite(dt_eff), ErrorCode::TimeStepTooLarge,
          "no admissible time step");

  double t_new = state.t + dt_eff;
  for (std::size_t i = 1; i + 1 < m; ++i) state.u[i] += dt_eff * d.ut[i];
  state.u[m - 1] = spec.flow->theta(t_new);
  // Inner Robin ring: one-sided slope = gamma0 u + phi(t_new); the stencil is
  // linear in u_0, so the per-step Newton solve lands in one iteration.
  double phi_new = phi_at(spec, r.front(), t_new);
  state.u[0] = (4.0 * state.u[1] - state.u[2] - 2.0 * h * phi_new) /
               (3.0 + 2.0 * h * spec.gamma0);
  state.t = t_new;
  refresh_state(state, spec);
  return dt_eff;
}

FlowRunResult flow_run(const ProblemSpec& spec,
                       const std::vector<double>& r_nodes,
                       const std::vector<double>& u0, double T, double dt) {
  require(spec.flow.has_value(), ErrorCode::MissingFlow, "no flow data");
  require(r_nodes.size() == u0.size() && r_nodes.size() >= 8,
          ErrorCode::GridTooCoarse, "need matching grids of at least 8 nodes");
  const FlowData& fd = *spec.flow;
  require(std::abs(fd.theta(0.0)) <= 1e-12, ErrorCode::FlowDataInvalid,
          "outer trace must vanish at t = 0");
  for (int i = 0; i <= 64; ++i) {
    double t = T * i / 64.0;
    require(theta_dot_at(spec, t) < 0.0, ErrorCode::FlowDataInvalid,
            "outer trace must be strictly decreasing");
    double rate = fd.phi_t_rate
                      ? fd.phi_t_rate(Vec::Zero(spec.dim()), t)
                      : (phi_at(spec, r_nodes.front(), t + 1e-6) -
                         phi_at(spec, r_nodes.front(), t)) * 1e6;
    require(rate > 0.0, ErrorCode::FlowDataInvalid,
            "inner data must be strictly increasing in time");
  }

  FlowState state;
  state.t = 0.0;
  state.r_nodes = r_nodes;
  state.u = u0;

  // The start field must solve the elliptic problem at t = 0.
  {
    NodeDerivs d = diagnose(r_nodes, u0, spec);
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < r_nodes.size(); ++i)
      worst = std::max(worst, std::abs(d.det[i] - d.rhs[i]));
    require(worst <= 1e-6, ErrorCode::FlowDataInvalid,
            "initial field does not solve the elliptic problem");
  }

  refresh_state(state, spec);
  FlowRunResult out;
  out.max_sup_ut = state.sup_abs_ut;
  out.min_min_ut = state.min_abs_ut;
  auto record = [&](const FlowState& s) {
    out.series.t.push_back(s.t);
    out.series.sup_u.push_back(s.sup_abs_u);
    out.series.sup_ut.push_back(s.sup_abs_ut);
    out.series.min_ut.push_back(s.min_abs_ut);
    out.series.inner_trace.push_back(s.u.front());
    out.series.outer_trace.push_back(s.u.back());
  };
  record(state);

  const bool igcf = spec.psi.depends_on_p();
  while (state.t < T - 1e-14) {
    double want = std::min(dt, T - state.t);
    std::vector<double> prev_u = state.u;
    double taken = flow_step(state, spec, want);
    require(taken > 1e-15, ErrorCode::TimeStepTooLarge, "step size underflow");
    for (std::size_t i = 0; i < state.u.size(); ++i)
      require(state.u[i] <= prev_u[i] + 1e-10, ErrorCode::FlowDataInvalid,
              "field failed to decrease in time");
    out.max_sup_ut = std::max(out.max_sup_ut, state.sup_abs_ut);
    out.min_min_ut = std::min(out.min_min_ut, state.min_abs_ut);
    if (igcf) {
      // Graph identity of the inverse-curvature specialization:
      // -u_t / sqrt(1+|Du|^2) = (1+|Du|^2)^{(n+2)/2} / det.
      NodeDerivs d = diagnose(state.r_nodes, state.u, spec);
      const int n = spec.dim();
      for (std::size_t i = 0; i < state.u.size(); ++i) {
        double q = 1.0 + d.ur[i] * d.ur[i];
        double lhs = -d.ut[i] / std::sqrt(q);
        double rhs = std::pow(q, 0.5 * (n + 2)) / d.det[i];
        out.max_igcf_residual =
            std::max(out.max_igcf_residual, std::abs(lhs - rhs));
      }
    }
    record(state);
  }
  out.final_state = state;
  return out;
}

UtBoundsAudit ut_bounds_audit(const FlowSeries& series, double CT_upper) {
  require(!series.t.empty(), ErrorCode::ParameterOutOfRange, "empty series");
  UtBoundsAudit a;
  a.min_abs_ut = *std::min_element(series.min_ut.begin(), series.min_ut.end());
  a.max_abs_ut = *std::max_element(series.sup_ut.begin(), series.sup_ut.end());
  a.violated = a.max_abs_ut > CT_upper + 1e-6;
  return a;
}

}  // namespace malab
