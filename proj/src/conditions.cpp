#include "malab/conditions.hpp"

#include <cmath>
#include <numbers>

#include "malab/numerics.hpp"

namespace malab {

const char* condition_id_name(ConditionId id) {
  switch (id) {
    case ConditionId::Curvature: return "Curvature";
    case ConditionId::CurvatureDu: return "CurvatureDu";
    case ConditionId::Structure: return "Structure";
    case ConditionId::StructureGradient: return "StructureGradient";
    case ConditionId::Subsolution: return "Subsolution";
    case ConditionId::FlowSubsolution: return "FlowSubsolution";
    case ConditionId::PrescribedGauss: return "PrescribedGauss";
  }
  return "Unknown";
}

namespace {

constexpr int kBoundaryPoints2D = 720;
constexpr int kBoundaryPoints3D = 1282;

// Minimizes f over the inner boundary: dense sweep plus golden-section
// refinement in 2-D, dense sphere mesh in 3-D.
double min_on_inner(const AnnularDomain& dom,
                    const std::function<double(const Vec&)>& f) {
  if (dom.dim() == 2) {
    double best = std::numeric_limits<double>::infinity();
    int best_i = 0;
    for (int i = 0; i < kBoundaryPoints2D; ++i) {
      double t = 2.0 * std::numbers::pi * i / kBoundaryPoints2D;
      double v = f(dom.inner_point(t));
      if (v < best) {
        best = v;
        best_i = i;
      }
    }
    double step = 2.0 * std::numbers::pi / kBoundaryPoints2D;
    double t0 = best_i * step;
    double t_star = golden_section_min(
        [&](double t) { return f(dom.inner_point(t)); }, t0 - step, t0 + step);
    return std::min(best, f(dom.inner_point(t_star)));
  }
  require(dom.dim() == 3, ErrorCode::NotImplemented,
          "boundary extremum sampling supports n <= 3");
  double best = std::numeric_limits<double>::infinity();
  for (const Vec& dir : fibonacci_sphere(kBoundaryPoints3D)) {
    Vec x = dom.center_inner() + dom.r_inner() * dir;
    best = std::min(best, f(x));
  }
  return best;
}

double max_kappa_on_inner(const AnnularDomain& dom) {
  // Inner boundaries are spheres: every normal curvature is 1/r.
  return 1.0 / dom.r_inner();
}

// Integral of f over the annulus (2-D skewed handled in polar form around
// the origin, which both circles enclose).
double integrate_domain(const AnnularDomain& dom,
                        const std::function<double(const Vec&)>& f,
                        double rel_tol) {
  if (dom.kind() == AnnularDomain::Kind::Concentric) {
    return integrate(
        [&](double s) { return sphere_integral(f, dom.dim(), s, rel_tol); },
        dom.r_inner(), dom.r_outer(), rel_tol);
  }
  auto circle_cross = [](const Vec& c, double R, double t) {
    // Larger root of |c + r omega - c| ... solves |r omega - c| = R for the
    // circle centered at c: r(t) = <c,omega> + sqrt(R^2 - |c|^2 + <c,omega>^2).
    double co = c[0] * std::cos(t) + c[1] * std::sin(t);
    return co + std::sqrt(R * R - c.squaredNorm() + co * co);
  };
  return integrate(
      [&](double t) {
        double r_lo = circle_cross(dom.center_inner(), dom.r_inner(), t);
        double r_hi = circle_cross(dom.center_outer(), dom.r_outer(), t);
        return integrate(
            [&](double r) {
              Vec x(2);
              x << r * std::cos(t), r * std::sin(t);
              return f(x) * r;
            },
            r_lo, r_hi, rel_tol);
      },
      0.0, 2.0 * std::numbers::pi, rel_tol);
}

}  // namespace

double unit_ball_volume(int n) {
  require(n >= 1, ErrorCode::ParameterOutOfRange, "dimension must be >= 1");
  double v_prev = 1.0, v = 2.0;  // omega_0, omega_1
  for (int k = 2; k <= n; ++k) {
    double next = 2.0 * std::numbers::pi / k * v_prev;
    v_prev = v;
    v = next;
  }
  return n == 0 ? 1.0 : v;
}

ConditionReport check_curvature(const ProblemSpec& spec,
                                const std::function<double(const Vec&)>& u_on_inner,
                                double M) {
  require(spec.gamma0 > 0.0, ErrorCode::GammaZero,
          "curvature condition assumes gamma0 > 0");
  require(M > 0.0, ErrorCode::ParameterOutOfRange, "M must be positive");
  const auto& dom = spec.domain;
  auto quotient = [&](const Vec& x) {
    double u = u_on_inner(x);
    double chi = spec.gamma0 * u + spec.phi.value(x);
    double den = M - u;
    require(den > 0.0, ErrorCode::ParameterOutOfRange, "M must exceed sup u");
    return chi / den;
  };
  double min_q = min_on_inner(dom, quotient);
  double kappa = max_kappa_on_inner(dom);
  double rhs = spec.gamma0 + std::max(0.0, min_q);
  ConditionReport rep;
  rep.condition_id = ConditionId::Curvature;
  rep.margin = rhs - 2.0 * kappa;
  rep.satisfied = rep.margin > 0.0;
  rep.constants_used = {{"M", M},
                        {"gamma0", spec.gamma0},
                        {"kappa_max", kappa},
                        {"min_quotient", min_q}};
  return rep;
}

ConditionReport check_curvature_du(const ProblemSpec& spec,
                                   const std::function<double(const Vec&)>& u_on_inner,
                                   double M_tilde, double N, double C_tilde) {
  require(spec.gamma0 > 0.0, ErrorCode::GammaZero,
          "curvature condition assumes gamma0 > 0");
  require(N > 1.0, ErrorCode::ParameterOutOfRange, "N must exceed 1");
  const auto& dom = spec.domain;
  double shrink = 1.0 - std::pow(N, 4);
  auto quotient = [&](const Vec& x) {
    double u = u_on_inner(x);
    double chi = spec.gamma0 * u + spec.phi.value(x);
    double den = M_tilde + shrink * u;
    require(den > 0.0, ErrorCode::DenominatorSign,
            "gauge denominator must stay positive on the inner boundary");
    return chi / den;
  };
  double min_q = min_on_inner(dom, quotient);
  double kappa = max_kappa_on_inner(dom);
  ConditionReport rep;
  rep.condition_id = ConditionId::CurvatureDu;
  rep.margin = spec.gamma0 + std::max(0.0, min_q) - 2.0 * kappa - C_tilde;
  rep.satisfied = rep.margin > 0.0;
  rep.constants_used = {{"M_tilde", M_tilde},
                        {"N", N},
                        {"C_tilde", C_tilde},
                        {"gamma0", spec.gamma0},
                        {"kappa_max", kappa},
                        {"min_quotient", min_q}};
  return rep;
}

ConditionReport check_structure(const ProblemSpec& spec,
                                const std::function<double(const Vec&)>& g,
                                const std::function<double(const Vec&)>& h) {
  const int n = spec.dim();
  const double tol = 1e-10;
  double int_g = integrate_domain(spec.domain, g, tol);
  double int_h = integrate_rn(h, n, tol);
  ConditionReport rep;
  rep.condition_id = ConditionId::Structure;
  rep.margin = int_h - int_g;
  rep.satisfied = rep.margin > 0.0;
  rep.constants_used = {{"int_g", int_g}, {"int_h", int_h}};
  if (rep.satisfied) {
    auto ball_minus_g = [&](double R) {
      if (R <= 0.0) return -int_g;
      return integrate([&](double s) { return sphere_integral(h, n, s, tol); },
                       0.0, R, tol) -
             int_g;
    };
    double R0 = grow_bracket_and_solve(ball_minus_g, 0.0, 1.0, 1e-12);
    rep.constants_used["R0"] = R0;
  } else {
    rep.samples.push_back("R0 undefined: domain mass not below total mass (NoRoot)");
  }
  return rep;
}

ConditionReport check_structure_gradient(const ProblemSpec& spec,
                                         const std::function<double(double)>& Z,
                                         double beta, double band,
                                         double z_min) {
  require(band > 0.0, ErrorCode::ParameterOutOfRange, "band must be positive");
  const auto& dom = spec.domain;
  const int n = dom.dim();
  ConditionReport rep;
  rep.condition_id = ConditionId::StructureGradient;
  double worst = std::numeric_limits<double>::infinity();
  Vec worst_x;
  double worst_p = 0.0, worst_z = 0.0;
  const int n_ang = 24, n_depth = 12, n_z = 4, n_mag = 6;
  for (int ia = 0; ia < n_ang; ++ia) {
    double t = 2.0 * std::numbers::pi * ia / n_ang;
    Vec dir = Vec::Zero(n);
    dir[0] = std::cos(t);
    dir[1] = std::sin(t);
    for (int idp = 0; idp < n_depth; ++idp) {
      // Depths log-spaced into the strip so the d_x -> 0 corner is probed.
      double dx = band * std::pow(10.0, -3.0 * (idp + 1) / n_depth);
      Vec x = dom.center_outer() + (dom.r_outer() - dx) * dir;
      if (!dom.contains(x, 0.0)) continue;
      for (int iz = 0; iz < n_z; ++iz) {
        double z = z_min * iz / (n_z - 1);
        double zmag = Z(std::abs(z));
        for (int im = 0; im < n_mag; ++im) {
          double pmag = zmag * std::pow(10.0, static_cast<double>(im) / (n_mag - 1));
          for (int sgn : {1, -1}) {
            Vec p = sgn * pmag * dir;
            double lhs = spec.psi.rhs(x, z, p, n);
            double rhs = zmag * std::pow(dx, beta) * std::pow(pmag, beta + n + 1);
            double gap = rhs - lhs;
            if (gap < worst) {
              worst = gap;
              worst_x = x;
              worst_p = sgn * pmag;
              worst_z = z;
            }
          }
        }
      }
    }
  }
  rep.margin = worst;
  rep.satisfied = rep.margin > 0.0;
  rep.constants_used = {{"beta", beta},
                        {"band", band},
                        {"z_min", z_min},
                        {"worst_pmag", worst_p},
                        {"worst_z", worst_z}};
  if (worst_x.size() > 0)
    rep.samples.push_back("worst sample at |x| = " + std::to_string(worst_x.norm()));
  return rep;
}

ConditionReport check_subsolution(const SubsolutionProbe& probe,
                                  const ProblemSpec& spec, double tau_floor) {
  require(spec.gamma0 > 0.0, ErrorCode::GammaZero,
          "subsolution condition assumes gamma0 > 0");
  const auto& dom = spec.domain;
  double h = probe.h > 0.0 ? probe.h : 1e-3 * dom.r_inner();
  auto U = [&](double s) {
    Vec y = dom.geodesic_on_inner(probe.x0, probe.xi, s);
    Vec nu = dom.inner_normal(y);
    return probe.u.grad(y).dot(nu) - probe.usub.grad(y).dot(nu);
  };
  auto second = [&](double hh) {
    return (U(hh) - 2.0 * U(0.0) + U(-hh)) / (hh * hh);
  };
  double c1 = second(h), c2 = second(0.5 * h);
  require(std::abs(c2 - c1) <= 1e-4, ErrorCode::StepTooLarge,
          "second-difference step too large for the probe");
  double Udd = (4.0 * c2 - c1) / 3.0;
  double kappa = dom.normal_curvature(probe.x0, probe.xi);
  double usub_xixi = probe.xi.dot(probe.usub.hess(probe.x0) * probe.xi);
  double lhs = Udd / spec.gamma0 + kappa * U(0.0) + usub_xixi;
  ConditionReport rep;
  rep.condition_id = ConditionId::Subsolution;
  rep.margin = lhs - tau_floor;
  rep.satisfied = rep.margin > 0.0;
  rep.constants_used = {{"tau", tau_floor},
                        {"kappa_xi", kappa},
                        {"U0", U(0.0)},
                        {"Udd", Udd},
                        {"usub_xixi", usub_xixi},
                        {"u_xixi_implied", lhs}};
  return rep;
}

ConditionReport check_prescribed_gauss(const ProblemSpec& spec) {
  require(spec.psi.kind() == PsiSpec::Kind::GaussCurvature,
          ErrorCode::UnsupportedFamily,
          "needs a Gauss-curvature right-hand side");
  const auto& dom = spec.domain;
  const int n = dom.dim();
  auto K = [&](const Vec& x) {
    double v = spec.psi.curvature_profile(x);
    require(v >= 0.0, ErrorCode::NegativeK, "curvature profile went negative");
    return v;
  };
  double int_K = integrate_domain(dom, K, 1e-10);
  double omega_n = unit_ball_volume(n);
  // Vanishing on the outer rim, sampled.
  double max_K_outer = 0.0;
  if (n == 2) {
    for (int i = 0; i < kBoundaryPoints2D; ++i) {
      double t = 2.0 * std::numbers::pi * i / kBoundaryPoints2D;
      max_K_outer = std::max(max_K_outer, K(dom.outer_point(t)));
    }
  } else {
    for (const Vec& dir : fibonacci_sphere(kBoundaryPoints3D)) {
      Vec x = dom.center_outer() + dom.r_outer() * dir;
      max_K_outer = std::max(max_K_outer, K(x));
    }
  }
  ConditionReport rep;
  rep.condition_id = ConditionId::PrescribedGauss;
  double mass_margin = omega_n - int_K;
  double rim_margin = 1e-10 - max_K_outer;
  // The mass gap is the reported margin; a rim violation forces it negative
  // so that satisfied <=> margin > 0 still holds.
  rep.margin = rim_margin >= 0.0 ? mass_margin : std::min(mass_margin, rim_margin);
  rep.satisfied = rep.margin > 0.0;
  rep.constants_used = {{"omega_n", omega_n},
                        {"int_K", int_K},
                        {"max_K_outer", max_K_outer}};
  return rep;
}

}  // namespace malab
