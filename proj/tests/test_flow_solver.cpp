#include <doctest.h>

#include <cmath>

#include "malab/closed_form.hpp"
#include "malab/flow_solver.hpp"

using namespace malab;

namespace {

// Benchmark: annulus [1,2], gamma0 = 2, shrinking outer trace, growing inner
// data, started from the slope-1 member of the closed-form family.
ProblemSpec bench_spec() {
  ProblemSpec spec;
  spec.domain = AnnularDomain::concentric(2, 1.0, 2.0);
  spec.psi = PsiSpec::constant(1.0);
  spec.gamma0 = 2.0;
  auto sol = ClosedFormSolution::radial2d(1.0, 1.0, 2.0, 1.0);
  double phi0 = sol.robin_phi(2.0);
  spec.phi = constant_field(phi0);
  FlowData fd;
  fd.theta = [](double t) { return -t; };
  fd.theta_dot = [](double) { return -1.0; };
  fd.phi_t = [phi0](const Vec&, double t) { return phi0 + t; };
  fd.phi_t_rate = [](const Vec&, double) { return 1.0; };
  fd.horizon = 1.0;
  spec.flow = fd;
  return spec;
}

std::pair<std::vector<double>, std::vector<double>> bench_init(int nodes) {
  auto sol = ClosedFormSolution::radial2d(1.0, 1.0, 2.0, 1.0);
  std::vector<double> r(nodes), u(nodes);
  for (int i = 0; i < nodes; ++i) {
    r[i] = 1.0 + i * (1.0 / (nodes - 1));
    u[i] = sol.u_of_r(r[i]);
  }
  return {r, u};
}

}  // namespace

TEST_CASE("single step honors the caps and the boundary conditions") {
  auto spec = bench_spec();
  auto [r, u] = bench_init(65);
  FlowState state;
  state.r_nodes = r;
  state.u = u;
  double taken = flow_step(state, spec, 1.0);
  CHECK(taken > 0.0);
  CHECK(taken < 1.0);  // the caps bite long before a full unit step
  CHECK(state.t == doctest::Approx(taken).epsilon(1e-15));
  CHECK(state.u.back() == doctest::Approx(-taken).epsilon(1e-12));
  // Robin ring: one-sided slope equals gamma0 u + phi at the new time.
  double h = r[1] - r[0];
  double slope = (-3.0 * state.u[0] + 4.0 * state.u[1] - state.u[2]) / (2 * h);
  double phi_new = spec.flow->phi_t(Vec::Zero(2), state.t);
  CHECK(slope == doctest::Approx(spec.gamma0 * state.u[0] + phi_new)
                     .epsilon(1e-12));

  double before = state.t;
  CHECK(flow_step(state, spec, 0.0) == 0.0);
  CHECK(state.t == before);
  CHECK_THROWS_AS(flow_step(state, spec, -1e-3), Error);

  ProblemSpec noflow = spec;
  noflow.flow.reset();
  CHECK_THROWS_AS(flow_step(state, noflow, 1e-4), Error);
}

TEST_CASE("short run decreases monotonically and keeps the speed pinched") {
  auto spec = bench_spec();
  auto [r, u] = bench_init(65);
  auto out = flow_run(spec, r, u, 0.05, 1.0);
  CHECK(out.final_state.t == doctest::Approx(0.05).epsilon(1e-12));
  // u_t stays in [c_T, C_T]: the benchmark data give C_T = 1.
  CHECK(out.max_sup_ut <= 1.0 + 1e-6);
  CHECK(out.min_min_ut > 0.1);
  auto audit = ut_bounds_audit(out.series, 1.0);
  CHECK_FALSE(audit.violated);
  CHECK(audit.max_abs_ut == doctest::Approx(out.max_sup_ut));
  // Every recorded trace decreases.
  for (std::size_t k = 1; k < out.series.t.size(); ++k) {
    CHECK(out.series.inner_trace[k] <= out.series.inner_trace[k - 1] + 1e-10);
    CHECK(out.series.outer_trace[k] <= out.series.outer_trace[k - 1]);
  }
  CHECK(out.final_state.sup_abs_u >= std::abs(u.front()));  // grew in magnitude

  auto zero = flow_run(spec, r, u, 0.0, 1.0);
  CHECK(zero.final_state.u == u);
}

TEST_CASE("invalid flow data is rejected up front") {
  auto [r, u] = bench_init(65);

  auto spec = bench_spec();
  spec.flow->theta = [](double t) { return 0.5 - t; };  // theta(0) != 0
  CHECK_THROWS_AS(flow_run(spec, r, u, 0.1, 1.0), Error);

  spec = bench_spec();
  spec.flow->theta = [](double t) { return +t; };  // increasing
  spec.flow->theta_dot = [](double) { return +1.0; };
  CHECK_THROWS_AS(flow_run(spec, r, u, 0.1, 1.0), Error);

  spec = bench_spec();
  spec.flow->phi_t_rate = [](const Vec&, double) { return -1.0; };
  CHECK_THROWS_AS(flow_run(spec, r, u, 0.1, 1.0), Error);

  // A start field that does not solve the elliptic problem.
  spec = bench_spec();
  std::vector<double> bad = u;
  for (double& v : bad) v *= 1.05;
  CHECK_THROWS_AS(flow_run(spec, r, bad, 0.1, 1.0), Error);

  std::vector<double> short_r(r.begin(), r.begin() + 4);
  std::vector<double> short_u(u.begin(), u.begin() + 4);
  CHECK_THROWS_AS(flow_run(spec, short_r, short_u, 0.1, 1.0), Error);
}

TEST_CASE("convexity loss is detected") {
  auto spec = bench_spec();
  auto [r, u] = bench_init(65);
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = -u[i];  // concave profile
  FlowState state;
  state.r_nodes = r;
  state.u = u;
  CHECK_THROWS_AS(flow_step(state, spec, 1e-4), Error);
  try {
    flow_step(state, spec, 1e-4);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConvexityLost);
  }
}

TEST_CASE("gradient-dependent speed tracks the graph identity") {
  // psi^n = (1+|p|^2)^{(n+3)/2}: the quotient -psi^n/det equals the
  // inverse-curvature normal speed times the graph area factor.
  ProblemSpec spec;
  spec.domain = AnnularDomain::concentric(2, 1.0, 1.2);
  spec.psi = PsiSpec::of_xzp([](const Vec&, double, const Vec& p) {
    double q = 1.0 + p.squaredNorm();
    return std::pow(q, (2.0 + 3.0) / (2.0 * 2.0));
  });
  spec.gamma0 = 2.0;

  // Start from the compatible elliptic profile so the Robin trace matches
  // phi_t at time zero; a mismatched trace would kink the first snap.
  auto prof = integrate_outward(spec, 0.3, 25);
  double phi0 = prof.u_r.front() - spec.gamma0 * prof.u.front();
  spec.phi = constant_field(phi0);
  FlowData fd;
  fd.theta = [](double t) { return -t; };
  fd.theta_dot = [](double) { return -1.0; };
  fd.phi_t = [phi0](const Vec&, double t) { return phi0 + t; };
  fd.phi_t_rate = [](const Vec&, double) { return 1.0; };
  spec.flow = fd;

  const auto& r = prof.r_nodes;
  const double h = r[1] - r[0];
  FlowState state;
  state.r_nodes = r;
  state.u = prof.u;
  for (int s = 0; s < 5; ++s) {
    double taken = flow_step(state, spec, 1e-5);
    CHECK(taken > 0.0);
    for (std::size_t i = 1; i + 1 < state.ut.size(); ++i) {
      // Rebuild the discrete derivatives the step used and confirm the
      // recorded speed satisfies the graph identity at every node.
      double ur = (state.u[i + 1] - state.u[i - 1]) / (2.0 * h);
      double urr = (state.u[i + 1] - 2.0 * state.u[i] + state.u[i - 1]) /
                   (h * h);
      double det = urr * ur / r[i];
      double q = 1.0 + ur * ur;
      double lhs_id = -state.ut[i] / std::sqrt(q);
      double rhs_id = std::pow(q, 0.5 * (2 + 2)) / det;
      CHECK(std::abs(lhs_id - rhs_id) <= 1e-9 * std::abs(rhs_id));
    }
  }
  CHECK(state.ut.front() < 0.0);
  CHECK(state.t > 0.0);
}

TEST_CASE("audit flags a series that exceeds the budget") {
  FlowSeries s;
  s.t = {0.0, 0.1};
  s.sup_ut = {0.9, 1.2};
  s.min_ut = {0.5, 0.4};
  auto a = ut_bounds_audit(s, 1.0);
  CHECK(a.violated);
  CHECK(a.max_abs_ut == doctest::Approx(1.2));
  CHECK(a.min_abs_ut == doctest::Approx(0.4));
  CHECK_FALSE(ut_bounds_audit(s, 1.5).violated);
  FlowSeries empty;
  CHECK_THROWS_AS(ut_bounds_audit(empty, 1.0), Error);
}
