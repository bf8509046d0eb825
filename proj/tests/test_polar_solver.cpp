#include <doctest.h>

#include <cmath>
#include <numbers>

#include "malab/closed_form.hpp"
#include "malab/polar_solver.hpp"

using namespace malab;

namespace {

ProblemSpec family_spec(double d) {
  ProblemSpec spec;
  spec.domain = AnnularDomain::concentric(2, 1.0, 2.0);
  spec.psi = PsiSpec::constant(1.0);
  spec.gamma0 = 1.0;
  auto sol = ClosedFormSolution::radial2d(1.0, 1.0, 2.0, d);
  spec.phi = constant_field(sol.robin_phi(1.0));
  return spec;
}

}  // namespace

TEST_CASE("quadratic initial iterate matches its formula") {
  auto spec = family_spec(1.0);
  auto f = quadratic_init(spec, 24, 24, 1.0);
  REQUIRE(f.nr() == 24);
  REQUIRE(f.ntheta() == 24);
  // u = psi_ref/2 (r^2 - R+^2) vanishes on the outer ring.
  CHECK(f.at(23, 5) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(f.at(0, 0) == doctest::Approx(0.5 * (1.0 - 4.0)).epsilon(1e-13));
}

TEST_CASE("discrete residual is small on the sampled exact solution") {
  auto spec = family_spec(0.5);
  auto sol = ClosedFormSolution::radial2d(1.0, 1.0, 2.0, 0.5);
  auto f = sample_to_grid(spec.domain, 64, 64,
                          [&](const Vec& x) { return sol.eval(x).u; });
  auto res = discrete_residual(f, spec);
  double interior = 0.0;
  for (int i = 1; i + 1 < f.nr(); ++i)
    for (int j = 0; j < f.ntheta(); ++j)
      interior = std::max(interior, std::abs(res.at(i, j)));
  CHECK(interior <= 5e-3);  // second order in h on a 64-point mesh
  // Dirichlet rows are exact for the sampled solution.
  for (int j = 0; j < f.ntheta(); ++j)
    CHECK(std::abs(res.at(f.nr() - 1, j)) <= 1e-12);
}

TEST_CASE("damped Newton converges quadratically on the benchmark family") {
  auto spec = family_spec(0.5);
  auto init = quadratic_init(spec, 32, 32, 1.0);
  auto out = newton_solve(spec, init);
  CHECK(out.report.final_residual_sup <= 1e-10);
  CHECK(out.report.convexity_min_eig > 0.0);
  const auto& hist = out.report.residual_history;
  REQUIRE(hist.size() >= 3);
  // Inside the basin successive residuals contract by far more than 10x.
  for (std::size_t k = 2; k + 1 < hist.size(); ++k)
    CHECK(hist[k + 1] <= 0.1 * hist[k]);

  auto sol = ClosedFormSolution::radial2d(1.0, 1.0, 2.0, 0.5);
  double worst = 0.0;
  for (int i = 0; i < out.field.nr(); ++i)
    for (int j = 0; j < out.field.ntheta(); ++j)
      worst = std::max(worst, std::abs(out.field.at(i, j) -
                                       sol.u_of_r(out.field.r_of(i))));
  CHECK(worst <= 1e-3);  // discretization error at h = 1/31
}

TEST_CASE("grid refinement shows second-order accuracy") {
  auto spec = family_spec(0.5);
  auto sol = ClosedFormSolution::radial2d(1.0, 1.0, 2.0, 0.5);
  auto rows = convergence_study(
      spec, [&](const Vec& x) { return sol.eval(x).u; },
      {{16, 16}, {32, 32}, {64, 64}});
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].sup_error > rows[1].sup_error);
  CHECK(rows[1].sup_error > rows[2].sup_error);
  for (std::size_t k = 1; k < rows.size(); ++k) {
    CHECK(rows[k].observed_order >= 1.7);
    CHECK(rows[k].observed_order <= 2.3);
  }
}

TEST_CASE("gradient image mass approaches its analytic value") {
  auto spec = family_spec(0.5);
  auto out = newton_solve(spec, quadratic_init(spec, 64, 64, 1.0));
  // Image of the gradient map is the annulus d <= |p| <= sqrt(R+^2 + D).
  double D = -1.0 + 0.25;
  double lo = 0.5, hi = std::sqrt(4.0 + D);
  double exact = std::numbers::pi *
                 (1.0 / (1.0 + lo * lo) - 1.0 / (1.0 + hi * hi));
  double mass = gradient_map_mass(out.field, 2);
  CHECK(std::abs(mass - exact) <= 0.01 * exact);
  CHECK_THROWS_AS(gradient_map_mass(out.field, 3), Error);
}

TEST_CASE("a concave start is rejected instead of silently accepted") {
  auto spec = family_spec(0.5);
  auto init = quadratic_init(spec, 24, 24, 1.0);
  for (double& v : init.data()) v = -v;  // concave bowl
  CHECK_THROWS_AS(newton_solve(spec, init), Error);
}

TEST_CASE("mesh size guards") {
  auto spec = family_spec(0.5);
  // Building a coarse iterate is fine; solving or differencing on it is not.
  auto coarse = quadratic_init(spec, 12, 32, 1.0);
  CHECK_THROWS_AS(newton_solve(spec, coarse), Error);
  GridField tiny(spec.domain, 8, 8, 0.0);
  CHECK_THROWS_AS(discrete_residual(tiny, spec), Error);
}
