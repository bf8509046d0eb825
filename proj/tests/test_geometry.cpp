#include <doctest.h>

#include <cmath>

#include "malab/geometry.hpp"

using namespace malab;

namespace {
Vec v2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}
}  // namespace

TEST_CASE("concentric factory validates radii") {
  auto dom = AnnularDomain::concentric(2, 1.0, 2.0);
  CHECK(dom.kind() == AnnularDomain::Kind::Concentric);
  CHECK(dom.dim() == 2);
  CHECK(dom.r_inner() == 1.0);
  CHECK(dom.r_outer() == 2.0);
  CHECK(dom.center_inner().norm() == 0.0);

  CHECK_THROWS_AS(AnnularDomain::concentric(2, 2.0, 1.0), Error);
  CHECK_THROWS_AS(AnnularDomain::concentric(2, -1.0, 2.0), Error);
  CHECK_THROWS_AS(AnnularDomain::concentric(1, 1.0, 2.0), Error);
}

TEST_CASE("skewed factory needs inner circle strictly inside outer") {
  auto dom = AnnularDomain::skewed2d(v2(0.25, 0.0), 0.5, v2(1.0, 0.0), 2.0);
  CHECK(dom.kind() == AnnularDomain::Kind::Skewed2D);
  CHECK(dom.r_inner() == 0.5);
  CHECK(dom.center_outer()[0] == 1.0);

  // Inner circle touching the outer one is rejected.
  CHECK_THROWS_AS(
      AnnularDomain::skewed2d(v2(0.5, 0.0), 1.0, v2(0.0, 0.0), 1.5), Error);
  // Origin must stay inside the inner hole.
  CHECK_THROWS_AS(
      AnnularDomain::skewed2d(v2(3.0, 0.0), 0.5, v2(1.0, 0.0), 4.0), Error);
}

TEST_CASE("membership predicates") {
  auto dom = AnnularDomain::concentric(2, 1.0, 2.0);
  CHECK(dom.contains(v2(1.5, 0.0)));
  CHECK(dom.contains(v2(0.0, -2.0)));  // boundary counts as closure
  CHECK_FALSE(dom.contains(v2(0.5, 0.0)));
  CHECK_FALSE(dom.contains(v2(2.5, 0.0)));
  CHECK(dom.on_inner(v2(0.0, 1.0)));
  CHECK(dom.on_outer(v2(-2.0, 0.0)));
  CHECK_FALSE(dom.on_inner(v2(1.1, 0.0)));
}

TEST_CASE("inner normal points into the annulus") {
  auto dom = AnnularDomain::skewed2d(v2(0.25, 0.0), 0.5, v2(1.0, 0.0), 2.0);
  Vec x = v2(0.75, 0.0);
  Vec nu = dom.inner_normal(x);
  CHECK(nu[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(nu[1] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK_THROWS_AS(dom.inner_normal(v2(1.5, 0.0)), Error);

  auto con = AnnularDomain::concentric(3, 1.0, 2.0);
  Vec y(3);
  y << 0.0, 1.0, 0.0;
  CHECK((con.inner_normal(y) - y).norm() < 1e-14);
}

TEST_CASE("normal curvature of a circle is 1/r in any tangent direction") {
  auto dom = AnnularDomain::concentric(2, 0.5, 2.0);
  Vec x = v2(0.5, 0.0);
  CHECK(dom.normal_curvature(x, v2(0.0, 1.0)) == doctest::Approx(2.0));
  CHECK(dom.normal_curvature(x, v2(0.0, -1.0)) == doctest::Approx(2.0));
  // Non-tangent direction is rejected.
  CHECK_THROWS_AS(dom.normal_curvature(x, v2(1.0, 0.0)), Error);
}

TEST_CASE("inner geodesic stays on the circle at unit speed") {
  auto dom = AnnularDomain::skewed2d(v2(0.25, 0.0), 0.5, v2(1.0, 0.0), 2.0);
  Vec x0 = v2(0.75, 0.0);
  Vec xi = v2(0.0, 1.0);
  for (double s : {0.0, 0.1, 0.7, 3.0}) {
    Vec g = dom.geodesic_on_inner(x0, xi, s);
    CHECK((g - dom.center_inner()).norm() == doctest::Approx(0.5).epsilon(1e-13));
  }
  CHECK((dom.geodesic_on_inner(x0, xi, 0.0) - x0).norm() < 1e-14);
  // Arclength pi * r is the antipode.
  Vec anti = dom.geodesic_on_inner(x0, xi, std::numbers::pi * 0.5);
  CHECK(anti[0] == doctest::Approx(-0.25).epsilon(1e-12));
  CHECK(anti[1] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("support minimum and diameter") {
  auto con = AnnularDomain::concentric(2, 1.0, 2.0);
  CHECK(con.min_support() == doctest::Approx(1.0));
  CHECK(con.diameter() == doctest::Approx(4.0));

  auto skew = AnnularDomain::skewed2d(v2(0.25, 0.0), 0.5, v2(1.0, 0.0), 2.0);
  // <x, nu> minimized where the shifted center works against the normal.
  CHECK(skew.min_support() == doctest::Approx(0.25));
}

TEST_CASE("boundary parameterizations and outer distance") {
  auto dom = AnnularDomain::skewed2d(v2(0.25, 0.0), 0.5, v2(1.0, 0.0), 2.0);
  Vec p = dom.inner_point(0.0);
  CHECK(p[0] == doctest::Approx(0.75));
  CHECK(dom.on_inner(p));
  Vec q = dom.outer_point(std::numbers::pi);
  CHECK(q[0] == doctest::Approx(-1.0));
  CHECK(dom.on_outer(q));
  CHECK(dom.dist_to_outer(v2(1.0, 0.0)) == doctest::Approx(2.0));
  CHECK(dom.dist_to_outer(v2(2.0, 0.0)) == doctest::Approx(1.0));
}

TEST_CASE("graph angle ratio is the normal component of the gradient") {
  Vec nu = v2(1.0, 0.0);
  CHECK(graph_angle_ratio(v2(3.0, 4.0), nu) == doctest::Approx(3.0));
  CHECK(graph_angle_ratio(v2(0.0, 2.0), nu) == doctest::Approx(0.0));
  // nu must be unit length.
  CHECK_THROWS_AS(graph_angle_ratio(v2(1.0, 0.0), v2(2.0, 0.0)), Error);
}
