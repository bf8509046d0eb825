#include "malab/bounds.hpp"

#include <cmath>
#include <numbers>

#include "malab/numerics.hpp"

namespace malab {

void BoundConstants::set(const std::string& name, double value,
                         const std::string& formula) {
  formula_id[name] = formula;
  if (name == "C0") C0 = value;
  else if (name == "C1") C1 = value;
  else if (name == "C3") C3 = value;
  else if (name == "C0_prime") C0_prime = value;
  else if (name == "C1_loc") C1_loc = value;
  else if (name == "M") M = value;
  else if (name == "ell1") ell1 = value;
  else if (name == "ell2") ell2 = value;
  else if (name == "ell3") ell3 = value;
  else if (name == "CT_upper") CT_upper = value;
  else if (name == "C0_T") C0_T = value;
  else if (name == "C1_T") C1_T = value;
  else if (name == "CT_lower_witness") CT_lower_witness = value;
}

DefiningFunction default_defining_function(const AnnularDomain& dom) {
  // rho = (|x - c_out|^2 - R_out^2) / (2 R_out): vanishes on the outer
  // circle, |D rho| = 1 there, Hessian = I / R_out.
  DefiningFunction f;
  double Rp = dom.r_outer();
  double off = (dom.center_outer() - dom.center_inner()).norm();
  f.lambda_min = 1.0 / Rp;
  f.sup_grad_on_outer = 1.0;
  double far = dom.r_inner() + off;   // farthest inner point from c_out
  double near = dom.r_inner() - off;  // closest
  f.min_abs_on_inner = (Rp * Rp - far * far) / (2.0 * Rp);
  f.max_abs_on_inner = (Rp * Rp - near * near) / (2.0 * Rp);
  return f;
}

namespace {

double max_abs_x(const AnnularDomain& dom) {
  return dom.center_outer().norm() + dom.r_outer();
}

double sup_psi(const ProblemSpec& spec) {
  if (spec.psi.kind() == PsiSpec::Kind::Constant) {
    Vec x0 = Vec::Zero(spec.dim());
    return spec.psi.value(x0, 0.0, x0, spec.dim());
  }
  // Dense sampling; gradient- and value-dependent right-hand sides are
  // evaluated on the zero section.
  double best = 0.0;
  const int n = spec.dim();
  Vec zero_p = Vec::Zero(n);
  for (int i = 0; i < 4000; ++i) {
    Vec h = halton_point(i, n);
    Vec x(n);
    for (int d = 0; d < n; ++d)
      x[d] = spec.domain.center_outer()[d] + (2.0 * h[d] - 1.0) * spec.domain.r_outer();
    if (!spec.domain.contains(x, 0.0)) continue;
    best = std::max(best, spec.psi.value(x, 0.0, zero_p, n));
  }
  return best;
}

double max_abs_phi_on_inner(const ProblemSpec& spec) {
  const auto& dom = spec.domain;
  double best = 0.0;
  if (dom.dim() == 2) {
    for (int i = 0; i < 720; ++i) {
      double t = 2.0 * std::numbers::pi * i / 720;
      best = std::max(best, std::abs(spec.phi.value(dom.inner_point(t))));
    }
  } else {
    require(dom.dim() == 3, ErrorCode::NotImplemented,
            "boundary sampling supports n <= 3");
    for (const Vec& dir : fibonacci_sphere(1282)) {
      Vec x = dom.center_inner() + dom.r_inner() * dir;
      best = std::max(best, std::abs(spec.phi.value(x)));
    }
  }
  return best;
}

double max_grad_phi_on_inner(const ProblemSpec& spec) {
  const auto& dom = spec.domain;
  require(static_cast<bool>(spec.phi.grad), ErrorCode::BadSpec,
          "phi gradient required");
  double best = 0.0;
  if (dom.dim() == 2) {
    for (int i = 0; i < 720; ++i) {
      double t = 2.0 * std::numbers::pi * i / 720;
      best = std::max(best, spec.phi.grad(dom.inner_point(t)).norm());
    }
  } else {
    require(dom.dim() == 3, ErrorCode::NotImplemented,
            "boundary sampling supports n <= 3");
    for (const Vec& dir : fibonacci_sphere(1282)) {
      Vec x = dom.center_inner() + dom.r_inner() * dir;
      best = std::max(best, spec.phi.grad(x).norm());
    }
  }
  return best;
}

// Barrier coefficient fields for the concentric annulus with the radial
// extension nu = x/|x|. With xi' = xi - (xi.nu)nu the directional derivative
// xi'_i D_i nu_k collapses to xi'_k / |x|, so
//   a(x) = 2 (xi.nu) (gamma0 - 1/|x|) xi',   b_bar(x) = 2 (xi.nu) xi'.
Vec barrier_a(const ProblemSpec& spec, const Vec& xi, const Vec& x) {
  double r = x.norm();
  Vec nu = x / r;
  double c = xi.dot(nu);
  Vec xi_t = xi - c * nu;
  return 2.0 * c * (spec.gamma0 - 1.0 / r) * xi_t;
}

Vec barrier_bbar(const Vec& xi, const Vec& x) {
  double r = x.norm();
  Vec nu = x / r;
  double c = xi.dot(nu);
  Vec xi_t = xi - c * nu;
  return 2.0 * c * xi_t;
}

}  // namespace

double c0_bound(const ProblemSpec& spec, double K) {
  double mx2 = max_abs_x(spec.domain);
  mx2 *= mx2;
  require(K > 0.0 && K < 1.0 / mx2, ErrorCode::KOutOfRange,
          "K must lie in (0, 1/max|x|^2)");
  double m0 = spec.domain.min_support();
  double branch1 = sup_psi(spec) / (K * (1.0 - K * mx2));
  double branch2 = max_abs_phi_on_inner(spec) / (K * m0);
  return std::sqrt(std::numbers::e) * std::max(branch1, branch2);
}

double c0_bound_auto(const ProblemSpec& spec, double* K_best) {
  double mx2 = max_abs_x(spec.domain);
  mx2 *= mx2;
  double cap = 1.0 / mx2;
  double best_v = std::numeric_limits<double>::infinity();
  double best_k = 0.5 * cap;
  for (int i = 0; i < 64; ++i) {
    // Log grid over (1e-3, ~1) of the admissible range.
    double frac = std::pow(10.0, -3.0 + 2.999 * i / 63.0);
    double K = frac * cap;
    double v = c0_bound(spec, K);
    if (v < best_v) {
      best_v = v;
      best_k = K;
    }
  }
  double lo = std::max(best_k / 2.0, 1e-6 * cap);
  double hi = std::min(best_k * 2.0, cap * (1.0 - 1e-9));
  double k_star = golden_section_min(
      [&](double K) { return c0_bound(spec, K); }, lo, hi, 1e-12);
  double v_star = c0_bound(spec, k_star);
  if (v_star < best_v) {
    best_v = v_star;
    best_k = k_star;
  }
  if (K_best) *K_best = best_k;
  return best_v;
}

double c1_bound(const ProblemSpec& spec, const DefiningFunction& rho,
                double C0) {
  require(rho.lambda_min > 0.0 && rho.min_abs_on_inner > 0.0 &&
              rho.sup_grad_on_outer > 0.0 && rho.sup_grad_on_outer <= 1.0,
          ErrorCode::BadDefiningFunction, "defining-function data out of range");
  return std::max(C0 / rho.min_abs_on_inner, sup_psi(spec) / rho.lambda_min) *
         rho.sup_grad_on_outer;
}

double c3_bound(const ProblemSpec& spec, double C1) {
  return spec.gamma0 * C1 + max_grad_phi_on_inner(spec);
}

double gauge_value(const BarrierSpec& b, double u) {
  if (b.gauge == BarrierSpec::Gauge::Reciprocal) {
    require(b.M - u > 0.0, ErrorCode::GaugeUndefined, "need M > u");
    return 1.0 / (b.M - u);
  }
  double shrink = 1.0 - std::pow(b.N, 4);
  double base = b.M_tilde + shrink * u;
  require(base > 0.0, ErrorCode::GaugeUndefined, "gauge base went nonpositive");
  return std::pow(base, 1.0 / shrink);
}

double gauge_d1(const BarrierSpec& b, double u) {
  if (b.gauge == BarrierSpec::Gauge::Reciprocal) {
    require(b.M - u > 0.0, ErrorCode::GaugeUndefined, "need M > u");
    double inv = 1.0 / (b.M - u);
    return inv * inv;
  }
  double shrink = 1.0 - std::pow(b.N, 4);
  double base = b.M_tilde + shrink * u;
  require(base > 0.0, ErrorCode::GaugeUndefined, "gauge base went nonpositive");
  return std::pow(base, 1.0 / shrink - 1.0);
}

double gauge_d2(const BarrierSpec& b, double u) {
  if (b.gauge == BarrierSpec::Gauge::Reciprocal) {
    require(b.M - u > 0.0, ErrorCode::GaugeUndefined, "need M > u");
    double inv = 1.0 / (b.M - u);
    return 2.0 * inv * inv * inv;
  }
  double shrink = 1.0 - std::pow(b.N, 4);
  double base = b.M_tilde + shrink * u;
  require(base > 0.0, ErrorCode::GaugeUndefined, "gauge base went nonpositive");
  return std::pow(b.N, 4) * std::pow(base, 1.0 / shrink - 2.0);
}

BarrierNorms sample_barrier_norms(const ProblemSpec& spec, const Vec& xi,
                                  double C1, const PsiNorms& psi_norms,
                                  int grid) {
  require(spec.domain.kind() == AnnularDomain::Kind::Concentric &&
              spec.dim() == 2,
          ErrorCode::UnsupportedDomain,
          "barrier norms need the concentric planar annulus");
  const auto& dom = spec.domain;
  const double h = 1e-4 * dom.r_inner();
  BarrierNorms out;
  out.grid = grid;
  Vec e0(2), e1(2);
  e0 << 1, 0;
  e1 << 0, 1;
  const Vec dirs[2] = {e0, e1};
  double dphi_sup = 0.0, d2phi_sup = 0.0;
  for (int i = 0; i < grid; ++i) {
    double r = dom.r_inner() + (dom.r_outer() - dom.r_inner()) * i / (grid - 1);
    for (int j = 0; j < grid; ++j) {
      double t = 2.0 * std::numbers::pi * j / grid;
      Vec x(2);
      x << r * std::cos(t), r * std::sin(t);
      Vec a = barrier_a(spec, xi, x);
      Vec bb = barrier_bbar(xi, x);
      out.a_sup = std::max(out.a_sup, a.cwiseAbs().maxCoeff());
      out.b_sup = std::max(out.b_sup, bb.cwiseAbs().maxCoeff());
      for (int k = 0; k < 2; ++k) {
        auto a_k = [&](const Vec& y) { return barrier_a(spec, xi, y)[k]; };
        auto b_k = [&](const Vec& y) { return barrier_bbar(xi, y)[k]; };
        for (int d = 0; d < 2; ++d) {
          out.da_sup = std::max(out.da_sup, std::abs(fd_dir1(a_k, x, dirs[d], h)));
          out.db_sup = std::max(out.db_sup, std::abs(fd_dir1(b_k, x, dirs[d], h)));
          out.d2a_sup =
              std::max(out.d2a_sup, std::abs(fd_dir2(a_k, x, dirs[d], h)));
          out.d2b_sup =
              std::max(out.d2b_sup, std::abs(fd_dir2(b_k, x, dirs[d], h)));
        }
        // Mixed second derivatives via the diagonal direction trick.
        Vec diag = (e0 + e1) / std::sqrt(2.0);
        out.d2a_sup = std::max(out.d2a_sup, std::abs(fd_dir2(a_k, x, diag, h)));
        out.d2b_sup = std::max(out.d2b_sup, std::abs(fd_dir2(b_k, x, diag, h)));
      }
      if (spec.phi.grad) {
        dphi_sup = std::max(dphi_sup, spec.phi.grad(x).cwiseAbs().maxCoeff());
      }
      if (spec.phi.hess) {
        d2phi_sup = std::max(d2phi_sup, spec.phi.hess(x).cwiseAbs().maxCoeff());
        for (int a0 = 0; a0 < 2; ++a0)
          for (int b0 = a0; b0 < 2; ++b0) {
            auto h_entry = [&](const Vec& y) { return spec.phi.hess(y)(a0, b0); };
            for (int d = 0; d < 2; ++d)
              out.d3phi_sup = std::max(
                  out.d3phi_sup, std::abs(fd_dir1(h_entry, x, dirs[d], h)));
          }
      }
    }
  }
  const int n = 2;
  out.ell1 = 2.0 * C1 *
             (C1 * out.da_sup + (C1 + dphi_sup) * out.db_sup +
              out.b_sup * d2phi_sup);
  out.ell2 = out.d2a_sup * C1 + (C1 + dphi_sup) * out.d2b_sup +
             2.0 * out.db_sup * d2phi_sup + out.b_sup * out.d3phi_sup +
             4.0 * C1 * max_abs_x(spec.domain);
  out.ell3 = spec.gamma0 * out.b_sup +
             n * (out.a_sup + spec.gamma0 * out.b_sup) * psi_norms.sup_dlog +
             2.0 * n * (out.da_sup + spec.gamma0 * out.b_sup);
  return out;
}

double m_bound(const BarrierNorms& norms, const PsiNorms& psi_norms, double C1,
               int n) {
  double b1 =
      0.5 * (norms.ell2 + std::sqrt(norms.ell2 * norms.ell2 + 4.0 * norms.ell1));
  double half3 = 0.5 * norms.ell3;
  double inner = half3 * half3 +
                 n * (n * psi_norms.sup_d2log + 2.0 * norms.a_sup * C1) /
                     psi_norms.sup;
  double b2 = (psi_norms.sup / n) * (half3 + std::sqrt(inner));
  return std::max(b1, b2);
}

GridField barrier_field(const ClosedFormSolution& sol, const ProblemSpec& spec,
                        const BarrierSpec& bspec, int Nr, int Ntheta) {
  GridField f(spec.domain, Nr, Ntheta);
  for (int i = 0; i < Nr; ++i)
    for (int j = 0; j < Ntheta; ++j) {
      Vec x = f.point(i, j);
      EvalResult ev = sol.eval(x);
      double uxx = bspec.xi.dot(ev.hess * bspec.xi);
      Vec a = barrier_a(spec, bspec.xi, x);
      Vec bb = barrier_bbar(bspec.xi, x);
      double b_val = spec.phi.grad ? bb.dot(spec.phi.grad(x)) : 0.0;
      double w = gauge_value(bspec, ev.u) * uxx + a.dot(ev.grad) + b_val +
                 bspec.M * x.squaredNorm();
      if (bspec.weighted)
        w *= std::exp(bspec.N * ev.grad.squaredNorm());
      f.at(i, j) = w;
    }
  return f;
}

double linearization_identity_check(const ClosedFormSolution& sol, const Vec& x,
                                    const Vec& xi, double h) {
  auto H = [&](double s) { return sol.eval(x + s * xi).hess; };
  auto logpsi_n = [&](double s) {
    Vec y = x + s * xi;
    EvalResult ev = sol.eval(y);
    return std::log(sol.rhs(y, ev.u, ev.grad));
  };
  Mat H0 = H(0.0);
  double det = H0.determinant();
  require(det > 1e-12, ErrorCode::SingularHessian, "Hessian not positive");
  Mat F = H0.inverse();
  Mat T1 = (H(h) - H(-h)) / (2.0 * h);
  Mat T2 = (H(h) - 2.0 * H0 + H(-h)) / (h * h);
  double lhs = (F * T2).trace();
  double s2 = (logpsi_n(h) - 2.0 * logpsi_n(0.0) + logpsi_n(-h)) / (h * h);
  double rhs = s2 + (F * T1 * F * T1).trace();
  return std::abs(lhs - rhs);
}

double linearization_first_order_check(const ClosedFormSolution& sol,
                                       const Vec& x, const Vec& xi, double h) {
  auto H = [&](double s) { return sol.eval(x + s * xi).hess; };
  auto logpsi_n = [&](double s) {
    Vec y = x + s * xi;
    EvalResult ev = sol.eval(y);
    return std::log(sol.rhs(y, ev.u, ev.grad));
  };
  Mat H0 = H(0.0);
  require(H0.determinant() > 1e-12, ErrorCode::SingularHessian,
          "Hessian not positive");
  Mat F = H0.inverse();
  Mat T1 = (-H(2 * h) + 8.0 * H(h) - 8.0 * H(-h) + H(-2 * h)) / (12.0 * h);
  double s1 = (-logpsi_n(2 * h) + 8.0 * logpsi_n(h) - 8.0 * logpsi_n(-h) +
               logpsi_n(-2 * h)) /
              (12.0 * h);
  return std::abs((F * T1).trace() - s1);
}

FlowConstants flow_constants(const ProblemSpec& spec, double sup_u0,
                             const DefiningFunction* rho) {
  require(spec.flow.has_value(), ErrorCode::MissingFlow, "no flow data");
  const FlowData& fd = *spec.flow;
  double T = fd.horizon;
  double sup_theta_dot = 0.0, sup_phi_rate = 0.0;
  const int nt = 256;
  for (int i = 0; i <= nt; ++i) {
    double t = T * i / nt;
    double td = fd.theta_dot ? fd.theta_dot(t)
                             : (fd.theta(t + 1e-6) - fd.theta(t - 1e-6)) / 2e-6;
    sup_theta_dot = std::max(sup_theta_dot, std::abs(td));
    if (spec.dim() == 2) {
      for (int j = 0; j < 64; ++j) {
        Vec x = spec.domain.inner_point(2.0 * std::numbers::pi * j / 64);
        sup_phi_rate = std::max(sup_phi_rate, fd.phi_t_rate(x, t));
      }
    }
  }
  FlowConstants out;
  require(spec.gamma0 > 0.0, ErrorCode::GammaZero, "flow bound needs gamma0 > 0");
  out.CT_upper = std::max({1.0, sup_theta_dot, sup_phi_rate / spec.gamma0});
  out.C0_T = T * out.CT_upper + sup_u0;
  if (rho) {
    require(rho->max_abs_on_inner < 1.0, ErrorCode::RhoTooDeep,
            "defining function too deep on the inner boundary");
    double n = spec.dim();
    out.C1_T = std::max(out.C0_T / (1.0 - rho->max_abs_on_inner),
                        std::pow(sup_psi(spec) / rho->lambda_min,
                                 n / (n + 1.0))) *
               rho->sup_grad_on_outer;
  }
  return out;
}

double local_gradient_bound(double C0_prime, double lambda,
                            const ClosedFormSolution& sol,
                            const AnnularDomain& dom) {
  double u_min = sol.u_of_r(dom.r_inner());
  require(lambda > 0.0 && lambda <= -u_min, ErrorCode::LambdaOutOfRange,
          "level must lie in (0, sup|u|]");
  double r_level =
      find_root([&](double r) { return sol.u_of_r(r) + lambda; },
                dom.r_inner(), dom.r_outer(), 1e-13);
  double dist = dom.r_outer() - r_level;
  return C0_prime / dist;
}

double c0_du_bound(double R0, const ProblemSpec& spec) {
  require(spec.gamma0 > 0.0, ErrorCode::GammaZero, "needs gamma0 > 0");
  return (R0 + max_abs_phi_on_inner(spec)) / spec.gamma0 +
         R0 * spec.domain.diameter();
}

}  // namespace malab
