#include "malab/radial_solver.hpp"

#include <algorithm>
#include <cmath>

#include "malab/closed_form.hpp"
#include "malab/numerics.hpp"

namespace malab {

namespace {

constexpr double kDMin = 1e-12;

// Right-hand side of the first-order system for (u, w = u_r):
//   w' = psi^n(r, u, w) (r/w)^{n-1}.
double slope_rate(const ProblemSpec& spec, double r, double z, double w) {
  const int n = spec.dim();
  Vec x = Vec::Zero(n);
  x[0] = r;
  Vec p = Vec::Zero(n);
  p[0] = w;
  double rhs = spec.psi.rhs(x, z, p, n);
  return rhs * std::pow(r / w, n - 1);
}

struct Sweep {
  std::vector<double> u;  // integrated with u(r_inner) = 0
  std::vector<double> w;
};

// One classical 4th-order pass over the uniform grid, with the value
// variable offset by C (so the psi argument is z = u - C).
Sweep rk4_pass(const ProblemSpec& spec, const std::vector<double>& r, double d,
               double C) {
  const std::size_t m = r.size();
  Sweep s;
  s.u.resize(m);
  s.w.resize(m);
  s.u[0] = 0.0;
  s.w[0] = d;
  double h = r[1] - r[0];
  auto guard = [](double w) {
    require(std::isfinite(w), ErrorCode::StepRejected,
            "non-finite slope during integration");
    require(w > kDMin, ErrorCode::SlopeCollapse,
            "slope collapsed toward zero");
  };
  for (std::size_t i = 0; i + 1 < m; ++i) {
    double u0 = s.u[i], w0 = s.w[i], r0 = r[i];
    guard(w0);
    double k1u = w0;
    double k1w = slope_rate(spec, r0, u0 - C, w0);
    double w_half1 = w0 + 0.5 * h * k1w;
    guard(w_half1);
    double k2u = w_half1;
    double k2w = slope_rate(spec, r0 + 0.5 * h, u0 + 0.5 * h * k1u - C, w_half1);
    double w_half2 = w0 + 0.5 * h * k2w;
    guard(w_half2);
    double k3u = w_half2;
    double k3w = slope_rate(spec, r0 + 0.5 * h, u0 + 0.5 * h * k2u - C, w_half2);
    double w_full = w0 + h * k3w;
    guard(w_full);
    double k4u = w_full;
    double k4w = slope_rate(spec, r0 + h, u0 + h * k3u - C, w_full);
    s.u[i + 1] = u0 + h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
    s.w[i + 1] = w0 + h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
  }
  guard(s.w[m - 1]);
  return s;
}

}  // namespace

RadialProfile integrate_outward(const ProblemSpec& spec, double d, int nodes) {
  require(d > kDMin, ErrorCode::SlopeCollapse, "inner slope below the guard");
  require(nodes >= 8, ErrorCode::GridTooCoarse, "need at least 8 nodes");
  const auto& dom = spec.domain;
  require(dom.kind() == AnnularDomain::Kind::Concentric,
          ErrorCode::UnsupportedDomain, "radial solver needs concentric annuli");
  std::vector<double> r(nodes);
  for (int i = 0; i < nodes; ++i)
    r[i] = dom.r_inner() +
           (dom.r_outer() - dom.r_inner()) * i / double(nodes - 1);

  // The slope equation decouples from u unless psi depends on the value; in
  // that case iterate on the outer offset C = U(r_outer) so that z = U - C
  // vanishes on the outer boundary at the fixed point.
  double C = 0.0;
  Sweep s = rk4_pass(spec, r, d, C);
  if (spec.psi.depends_on_z()) {
    for (int sweep = 0; sweep < 50; ++sweep) {
      double C_new = C + 0.5 * (s.u.back() - C);
      if (std::abs(C_new - C) <= 1e-14 * std::max(1.0, std::abs(C_new))) {
        C = C_new;
        break;
      }
      C = C_new;
      s = rk4_pass(spec, r, d, C);
    }
    s = rk4_pass(spec, r, d, s.u.back());
  }

  RadialProfile out;
  out.r_nodes = r;
  out.u.resize(nodes);
  out.u_r = s.w;
  out.u_rr.resize(nodes);
  double offset = s.u.back();
  for (int i = 0; i < nodes; ++i) {
    out.u[i] = s.u[i] - offset;
    out.u_rr[i] = slope_rate(spec, r[i], out.u[i], s.w[i]);
  }
  out.d_star = d;
  return out;
}

double RadialProfile::sup_ode_residual(const ProblemSpec& spec) const {
  const int n = spec.dim();
  double h = r_nodes[1] - r_nodes[0];
  double worst = 0.0;
  for (std::size_t i = 2; i + 2 < r_nodes.size(); ++i) {
    double durdr = (-u_r[i + 2] + 8.0 * u_r[i + 1] - 8.0 * u_r[i - 1] +
                    u_r[i - 2]) /
                   (12.0 * h);
    Vec x = Vec::Zero(n);
    x[0] = r_nodes[i];
    Vec p = Vec::Zero(n);
    p[0] = u_r[i];
    double rhs = spec.psi.rhs(x, u[i], p, n) *
                 std::pow(r_nodes[i] / u_r[i], n - 1);
    worst = std::max(worst, std::abs(durdr - rhs));
  }
  return worst;
}

namespace {

double inner_phi(const ProblemSpec& spec) {
  Vec x = Vec::Zero(spec.dim());
  x[0] = spec.domain.r_inner();
  return spec.phi.value(x);
}

double neumann_gap(const ProblemSpec& spec, double d, int nodes) {
  RadialProfile p = integrate_outward(spec, d, nodes);
  return d - spec.gamma0 * p.u.front() - inner_phi(spec);
}

}  // namespace

RadialProfile shoot(const ProblemSpec& spec, double d_lo, double d_hi,
                    double tol, int nodes, int max_iter) {
  require(d_lo > 0.0 && d_lo < d_hi, ErrorCode::ParameterOutOfRange,
          "need 0 < d_lo < d_hi");
  double g_lo = neumann_gap(spec, d_lo, nodes);
  double g_hi = neumann_gap(spec, d_hi, nodes);
  require(g_lo == 0.0 || g_hi == 0.0 || g_lo * g_hi < 0.0, ErrorCode::NoBracket,
          "Neumann residual does not change sign on the bracket");
  int used = 2;
  double lo = d_lo, hi = d_hi;
  // Bisection narrows the bracket, then a secant-style Newton with a
  // finite-difference derivative polishes the root.
  while (hi - lo > 1e-3 && used < max_iter) {
    double mid = 0.5 * (lo + hi);
    double gm = neumann_gap(spec, mid, nodes);
    ++used;
    if (gm == 0.0) {
      lo = hi = mid;
      break;
    }
    if (g_lo * gm < 0.0) {
      hi = mid;
    } else {
      lo = mid;
      g_lo = gm;
    }
  }
  double d = 0.5 * (lo + hi);
  double g = neumann_gap(spec, d, nodes);
  ++used;
  while (std::abs(g) > tol && used < max_iter) {
    double step = std::max(1e-7 * std::max(1.0, d), 1e-9);
    double g2 = neumann_gap(spec, d + step, nodes);
    double slope = (g2 - g) / step;
    require(std::isfinite(slope) && slope != 0.0, ErrorCode::NoRoot,
            "flat Neumann residual");
    double d_next = d - g / slope;
    if (!(d_next > kDMin)) d_next = 0.5 * (d + kDMin);
    d = d_next;
    g = neumann_gap(spec, d, nodes);
    used += 2;
  }
  require(std::abs(g) <= tol, ErrorCode::MaxIterations,
          "shooting did not reach tolerance");
  RadialProfile out = integrate_outward(spec, d, nodes);
  out.d_star = d;
  out.residual = std::abs(g);
  out.iterations = used;
  return out;
}

std::vector<BlowupRow> blowup_sweep(const ProblemSpec& spec,
                                    const std::vector<double>& d_list,
                                    int nodes) {
  require(spec.psi.kind() == PsiSpec::Kind::Constant,
          ErrorCode::UnsupportedFamily,
          "the sweep pairs each slope with its closed-form Robin data");
  const auto& dom = spec.domain;
  Vec x0 = Vec::Zero(spec.dim());
  x0[0] = dom.r_inner();
  Vec p0 = Vec::Zero(spec.dim());
  double psi = spec.psi.value(x0, 0.0, p0, spec.dim());
  PhiSequence seq{psi, spec.gamma0, dom.r_inner(), dom.r_outer(), {}};
  std::vector<BlowupRow> rows;
  for (double d : d_list) {
    require(d > 0.0, ErrorCode::ParameterOutOfRange, "slopes must be positive");
    ProblemSpec local = spec;
    local.phi = constant_field(seq.phi_of_d(d));
    RadialProfile prof = shoot(local, 0.25 * d, 4.0 * d, 1e-12, nodes);
    BlowupRow row;
    row.d = prof.d_star;
    row.phi_k = seq.phi_of_d(d);
    row.u_nn_inner = spec.dim() == 2
                         ? prof.u_rr.front() + prof.u_r.front() / dom.r_inner()
                         : prof.u_rr.front();
    row.sup_grad = prof.u_r.back();
    rows.push_back(row);
  }
  return rows;
}

std::vector<double> bracket_roots(const ProblemSpec& spec, double d_lo,
                                  double d_hi, int nscan, double tol,
                                  int nodes) {
  require(d_lo > 0.0 && d_lo < d_hi && nscan >= 2, ErrorCode::ParameterOutOfRange,
          "bad scan range");
  std::vector<double> roots;
  double prev_d = d_lo;
  bool prev_ok = true;
  double prev_g = 0.0;
  try {
    prev_g = neumann_gap(spec, d_lo, nodes);
  } catch (const Error&) {
    prev_ok = false;
  }
  for (int k = 1; k <= nscan; ++k) {
    double d = d_lo + (d_hi - d_lo) * k / nscan;
    bool ok = true;
    double g = 0.0;
    try {
      g = neumann_gap(spec, d, nodes);
    } catch (const Error&) {
      ok = false;
    }
    if (ok && prev_ok && (prev_g == 0.0 || prev_g * g < 0.0)) {
      RadialProfile p = shoot(spec, prev_d, d, tol, nodes);
      if (roots.empty() || std::abs(roots.back() - p.d_star) > 1e-9)
        roots.push_back(p.d_star);
    }
    prev_d = d;
    prev_g = g;
    prev_ok = ok;
  }
  return roots;
}

}  // namespace malab
