#include <doctest.h>

#include <cmath>

#include "malab/closed_form.hpp"
#include "malab/radial_solver.hpp"

using namespace malab;

namespace {

ProblemSpec const_spec(double phi, double gamma0 = 1.0, int n = 2) {
  ProblemSpec spec;
  spec.domain = AnnularDomain::concentric(n, 1.0, 2.0);
  spec.psi = PsiSpec::constant(1.0);
  spec.gamma0 = gamma0;
  spec.phi = constant_field(phi);
  return spec;
}

}  // namespace

TEST_CASE("outward integration reproduces the closed form") {
  auto spec = const_spec(0.0);
  auto sol = ClosedFormSolution::radial2d(1.0, 1.0, 2.0, 0.5);
  auto prof = integrate_outward(spec, 0.5, 1024);
  REQUIRE(prof.r_nodes.size() == 1024);
  double worst = 0.0;
  for (std::size_t i = 0; i < prof.r_nodes.size(); ++i)
    worst = std::max(worst, std::abs(prof.u[i] - sol.u_of_r(prof.r_nodes[i])));
  CHECK(worst <= 1e-8);
  CHECK(std::abs(prof.u.back()) <= 1e-14);  // Dirichlet anchor
  CHECK(prof.u_r.front() == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(prof.sup_ode_residual(spec) <= 1e-6);

  CHECK_THROWS_AS(integrate_outward(spec, 0.5, 4), Error);
  CHECK_THROWS_AS(integrate_outward(spec, 1e-14, 1024), Error);
}

TEST_CASE("integration guards against a non-finite right-hand side") {
  auto spec = const_spec(0.0);
  spec.psi = PsiSpec::of_x([](const Vec& x) {
    return x.norm() > 1.5 ? std::numeric_limits<double>::quiet_NaN() : 1.0;
  });
  CHECK_THROWS_AS(integrate_outward(spec, 0.5, 256), Error);
}

TEST_CASE("shooting recovers the generating slope") {
  for (double d : {1.0, 0.5, 0.1}) {
    auto sol = ClosedFormSolution::radial2d(1.0, 1.0, 2.0, d);
    auto spec = const_spec(sol.robin_phi(1.0));
    auto prof = shoot(spec, d / 4.0, 4.0 * d);
    CHECK(std::abs(prof.d_star - d) <= 1e-8);
    CHECK(prof.residual <= 1e-10);
    double worst = 0.0;
    for (std::size_t i = 0; i < prof.r_nodes.size(); ++i)
      worst = std::max(worst,
                       std::abs(prof.u[i] - sol.u_of_r(prof.r_nodes[i])));
    CHECK(worst <= 1e-8);
  }
}

TEST_CASE("no solution below the critical data value") {
  double crit = critical_phi(1.0, 1.0, 1.0, 2.0);
  auto spec = const_spec(0.9 * crit);
  CHECK_THROWS_AS(shoot(spec, 1e-6, 10.0), Error);
  try {
    shoot(spec, 1e-6, 10.0);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoBracket);
  }
  // Just above the threshold a root exists again, at a small slope. The
  // bracket floor stays where the fixed-step integrator still resolves the
  // square-root corner u_rr(R-) = 1/d of near-degenerate profiles.
  auto near = const_spec(crit + 2e-2);
  auto prof = shoot(near, 5e-3, 10.0, 1e-10, 32768);
  CHECK(prof.d_star > 0.0);
  CHECK(prof.d_star < 5e-2);
  CHECK(prof.residual <= 1e-8);
}

TEST_CASE("shooting in dimension three") {
  auto sol = ClosedFormSolution::radial_nd(3, 1.0, 1.0, 2.0, 0.5);
  auto spec = const_spec(sol.robin_phi(1.0), 1.0, 3);
  auto prof = shoot(spec, 0.1, 2.0);
  CHECK(std::abs(prof.d_star - 0.5) <= 1e-8);
  CHECK(std::abs(prof.u.front() - sol.u_of_r(1.0)) <= 1e-8);
}

TEST_CASE("solution-dependent right-hand side settles to a fixed point") {
  auto spec = const_spec(1.8);
  spec.psi = PsiSpec::of_xz(
      [](const Vec&, double z) { return std::exp(0.05 * z); });
  auto prof = shoot(spec, 0.1, 5.0);
  CHECK(std::abs(prof.u.back()) <= 1e-12);
  CHECK(prof.residual <= 1e-10);
  CHECK(prof.sup_ode_residual(spec) <= 1e-6);
}

TEST_CASE("blow-up sweep tabulates the inner second derivative") {
  auto spec = const_spec(0.0);
  auto rows = blowup_sweep(spec, {1.0, 0.5, 0.1});
  REQUIRE(rows.size() == 3);
  PhiSequence seq;
  const double d_in[] = {1.0, 0.5, 0.1};
  for (std::size_t k = 0; k < rows.size(); ++k) {
    double d = d_in[k];
    CHECK(std::abs(rows[k].d - d) <= 1e-6);  // recovered generating slope
    double exact_dnn = 1.0 / d + d;  // psi^2 R-/d + d/R-
    CHECK(std::abs(rows[k].u_nn_inner - exact_dnn) <= 1e-6 * exact_dnn);
    CHECK(rows[k].phi_k ==
          doctest::Approx(seq.phi_of_d(d)).epsilon(1e-12));
    double D = -1.0 + d * d;
    CHECK(rows[k].sup_grad ==
          doctest::Approx(std::sqrt(4.0 + D)).epsilon(1e-6));
  }
  // Table is ordered by the given slopes and blows up as d shrinks.
  CHECK(rows[2].u_nn_inner > rows[1].u_nn_inner);
  CHECK(rows[1].u_nn_inner > rows[0].u_nn_inner);

  auto gauss = const_spec(0.0);
  gauss.psi = PsiSpec::gauss_curvature([](const Vec&) { return 0.1; });
  CHECK_THROWS_AS(blowup_sweep(gauss, {0.5}), Error);
}

TEST_CASE("panel scan finds the unique root for monotone data") {
  auto spec = const_spec(2.5);
  auto roots = bracket_roots(spec, 0.05, 5.0, 32);
  REQUIRE(roots.size() == 1);
  CHECK(std::abs(roots[0] - 1.0) <= 1e-8);

  auto below = const_spec(0.9 * critical_phi(1.0, 1.0, 1.0, 2.0));
  CHECK(bracket_roots(below, 0.05, 5.0, 32).empty());
}
