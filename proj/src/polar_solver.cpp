#include "malab/polar_solver.hpp"

#include <Eigen/Sparse>
#include <cmath>
#include <numbers>

#include "malab/closed_form.hpp"
#include "malab/numerics.hpp"

namespace malab {

namespace {

struct PolarDerivs {
  double ur, urr, ut, utt, urt;
};

PolarDerivs derivs_at(const GridField& f, int i, int j) {
  return {f.d_r(i, j), f.d_rr(i, j), f.d_theta(i, j), f.d_thetatheta(i, j),
          f.d_rtheta(i, j)};
}

// psi^n and its z / p sensitivities at a grid point. The Gauss-curvature
// family gets analytic p-derivatives; everything else is differenced.
struct RhsSensitivity {
  double value;
  double dz;
  Vec dp;
};

RhsSensitivity rhs_sens(const ProblemSpec& spec, const Vec& x, double z,
                        const Vec& p) {
  const int n = 2;
  RhsSensitivity out;
  out.value = spec.psi.rhs(x, z, p, n);
  out.dz = 0.0;
  out.dp = Vec::Zero(2);
  if (spec.psi.kind() == PsiSpec::Kind::GaussCurvature) {
    double K = spec.psi.curvature_profile(x);
    double q = 1.0 + p.squaredNorm();
    out.dp = K * (n + 2) * std::pow(q, 0.5 * n) * p;
    return out;
  }
  if (spec.psi.depends_on_z()) {
    double h = 1e-6 * std::max(1.0, std::abs(z));
    out.dz = (spec.psi.rhs(x, z + h, p, n) - spec.psi.rhs(x, z - h, p, n)) /
             (2.0 * h);
  }
  if (spec.psi.depends_on_p()) {
    for (int d = 0; d < 2; ++d) {
      double h = 1e-6 * std::max(1.0, std::abs(p[d]));
      Vec pp = p, pm = p;
      pp[d] += h;
      pm[d] -= h;
      out.dp[d] =
          (spec.psi.rhs(x, z, pp, n) - spec.psi.rhs(x, z, pm, n)) / (2.0 * h);
    }
  }
  return out;
}

double inner_phi_at(const ProblemSpec& spec, const GridField& f, int j) {
  return spec.phi.value(f.point(0, j));
}

// 2x2 positive definiteness at every node of the reconstructed Hessian.
double min_hess_eig(const GridField& f) {
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < f.nr(); ++i)
    for (int j = 0; j < f.ntheta(); ++j) {
      Mat h = f.cart_hess(i, j);
      double tr = h(0, 0) + h(1, 1);
      double det = h(0, 0) * h(1, 1) - h(0, 1) * h(0, 1);
      double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
      worst = std::min(worst, 0.5 * tr - disc);
    }
  return worst;
}

}  // namespace

GridField discrete_residual(const GridField& field, const ProblemSpec& spec) {
  require(field.nr() >= 16 && field.ntheta() >= 16, ErrorCode::GridTooCoarse,
          "residual needs at least a 16x16 grid");
  GridField res = field;
  const int Nr = field.nr(), Nt = field.ntheta();
  for (int j = 0; j < Nt; ++j) {
    res.at(0, j) =
        field.d_r(0, j) - spec.gamma0 * field.at(0, j) - inner_phi_at(spec, field, j);
    res.at(Nr - 1, j) = field.at(Nr - 1, j);
    for (int i = 1; i + 1 < Nr; ++i) {
      PolarDerivs d = derivs_at(field, i, j);
      double r = field.r_of(i);
      Vec x = field.point(i, j);
      Vec p = field.cart_grad(i, j);
      res.at(i, j) = polar_det(d.ur, d.urr, d.urt, d.ut, d.utt, r) -
                     spec.psi.rhs(x, field.at(i, j), p, 2);
    }
  }
  return res;
}

PolarSolveResult newton_solve(const ProblemSpec& spec, const GridField& init,
                              double tol, int max_iter) {
  require(spec.domain.kind() == AnnularDomain::Kind::Concentric &&
              spec.dim() == 2,
          ErrorCode::UnsupportedDomain, "polar solver needs the planar annulus");
  const int Nr = init.nr(), Nt = init.ntheta();
  require(Nr >= 16 && Nt >= 16, ErrorCode::GridTooCoarse,
          "solver needs at least a 16x16 grid");
  const int N = Nr * Nt;
  const double h = init.dr(), k = init.dtheta();
  auto id = [Nt](int i, int j) { return i * Nt + ((j % Nt) + Nt) % Nt; };

  GridField u = init;
  NewtonReport rep;
  using Trip = Eigen::Triplet<double>;
  std::vector<Trip> trips;
  Eigen::VectorXd F(N);

  auto assemble = [&](const GridField& f) {
    trips.clear();
    for (int j = 0; j < Nt; ++j) {
      // Inner Robin row: one-sided slope minus gamma0 u - phi.
      int row = id(0, j);
      F[row] = f.d_r(0, j) - spec.gamma0 * f.at(0, j) - inner_phi_at(spec, f, j);
      trips.emplace_back(row, id(0, j), -3.0 / (2.0 * h) - spec.gamma0);
      trips.emplace_back(row, id(1, j), 4.0 / (2.0 * h));
      trips.emplace_back(row, id(2, j), -1.0 / (2.0 * h));
      // Outer Dirichlet row.
      row = id(Nr - 1, j);
      F[row] = f.at(Nr - 1, j);
      trips.emplace_back(row, id(Nr - 1, j), 1.0);
    }
    for (int i = 1; i + 1 < Nr; ++i) {
      double r = f.r_of(i);
      for (int j = 0; j < Nt; ++j) {
        int row = id(i, j);
        PolarDerivs d = derivs_at(f, i, j);
        Vec x = f.point(i, j);
        Vec p = f.cart_grad(i, j);
        RhsSensitivity rs = rhs_sens(spec, x, f.at(i, j), p);
        double cross = d.urt - d.ut / r;
        F[row] = polar_det(d.ur, d.urr, d.urt, d.ut, d.utt, r) - rs.value;

        double det_durr = d.ur / r + d.utt / (r * r);
        double det_dur = d.urr / r;
        double det_dutt = d.urr / (r * r);
        double det_durt = -2.0 * cross / (r * r);
        double det_dut = 2.0 * cross / (r * r * r);

        // Gradient reconstruction sensitivities (psi depending on Du).
        double t = f.theta_of(j);
        double c = std::cos(t), s = std::sin(t);
        double rhs_dur = rs.dp[0] * c + rs.dp[1] * s;
        double rhs_dut = (-rs.dp[0] * s + rs.dp[1] * c) / r;

        double w_ur = det_dur - rhs_dur;
        double w_ut = det_dut - rhs_dut;

        // u_{i,j} itself: second-derivative stencil centers plus the z-term.
        trips.emplace_back(row, id(i, j),
                           det_durr * (-2.0 / (h * h)) +
                               det_dutt * (-2.0 / (k * k)) - rs.dz);
        // Radial neighbors.
        trips.emplace_back(row, id(i + 1, j),
                           det_durr / (h * h) + w_ur / (2.0 * h));
        trips.emplace_back(row, id(i - 1, j),
                           det_durr / (h * h) - w_ur / (2.0 * h));
        // Angular neighbors.
        trips.emplace_back(row, id(i, j + 1),
                           det_dutt / (k * k) + w_ut / (2.0 * k));
        trips.emplace_back(row, id(i, j - 1),
                           det_dutt / (k * k) - w_ut / (2.0 * k));
        // Mixed stencil corners.
        double urt_c = det_durt / (4.0 * h * k);
        trips.emplace_back(row, id(i + 1, j + 1), urt_c);
        trips.emplace_back(row, id(i - 1, j - 1), urt_c);
        trips.emplace_back(row, id(i + 1, j - 1), -urt_c);
        trips.emplace_back(row, id(i - 1, j + 1), -urt_c);
      }
    }
  };

  auto sup_residual = [&](const GridField& f) {
    GridField res = discrete_residual(f, spec);
    return res.sup_abs();
  };

  double res_norm = sup_residual(u);
  rep.residual_history.push_back(res_norm);
  Eigen::SparseMatrix<double> J(N, N);
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;

  for (int iter = 0; iter < max_iter; ++iter) {
    if (res_norm <= tol) break;
    assemble(u);
    J.setFromTriplets(trips.begin(), trips.end());
    J.makeCompressed();
    lu.compute(J);
    require(lu.info() == Eigen::Success, ErrorCode::SingularHessian,
            "linearized system is singular");
    Eigen::VectorXd delta = lu.solve(-F);
    require(lu.info() == Eigen::Success, ErrorCode::SingularHessian,
            "linear solve failed");

    double alpha = 1.0;
    GridField trial = u;
    auto apply = [&](double a) {
      for (int i = 0; i < Nr; ++i)
        for (int j = 0; j < Nt; ++j)
          trial.at(i, j) = u.at(i, j) + a * delta[id(i, j)];
    };
    // Convexity safeguard first: back off until the reconstructed Hessian
    // stays positive, then Armijo on the residual sup-norm.
    for (;;) {
      apply(alpha);
      if (min_hess_eig(trial) > 0.0) break;
      alpha *= 0.5;
      require(alpha >= std::pow(2.0, -20), ErrorCode::DivergedNonConvex,
              "convexity lost at the damping floor");
    }
    double trial_res = sup_residual(trial);
    while (trial_res > (1.0 - 0.25 * alpha) * res_norm ||
           min_hess_eig(trial) <= 0.0) {
      alpha *= 0.5;
      require(alpha >= std::pow(2.0, -20), ErrorCode::MaxIterations,
              "line search stalled");
      apply(alpha);
      trial_res = sup_residual(trial);
    }
    u = trial;
    res_norm = trial_res;
    rep.damping_history.push_back(alpha);
    rep.residual_history.push_back(res_norm);
    rep.iterations = iter + 1;
  }
  require(res_norm <= tol, ErrorCode::MaxIterations,
          "Newton iteration did not converge");
  rep.final_residual_sup = res_norm;
  rep.convexity_min_eig = min_hess_eig(u);
  return {u, rep};
}

GridField quadratic_init(const ProblemSpec& spec, int Nr, int Ntheta,
                         double psi_ref) {
  GridField f(spec.domain, Nr, Ntheta);
  double Rp = spec.domain.r_outer();
  for (int i = 0; i < Nr; ++i) {
    double r = f.r_of(i);
    double v = 0.5 * psi_ref * (r * r - Rp * Rp);
    for (int j = 0; j < Ntheta; ++j) f.at(i, j) = v;
  }
  return f;
}

std::vector<ConvergenceRow> convergence_study(
    const ProblemSpec& spec, const std::function<double(const Vec&)>& exact,
    const std::vector<std::pair<int, int>>& grids, double tol) {
  std::vector<ConvergenceRow> rows;
  double prev_err = 0.0, prev_h = 0.0;
  for (auto [Nr, Nt] : grids) {
    GridField init = quadratic_init(spec, Nr, Nt, 1.0);
    PolarSolveResult sol = newton_solve(spec, init, tol, 50);
    double err = 0.0;
    for (int i = 0; i < Nr; ++i)
      for (int j = 0; j < Nt; ++j)
        err = std::max(err, std::abs(sol.field.at(i, j) - exact(sol.field.point(i, j))));
    ConvergenceRow row;
    row.Nr = Nr;
    row.Ntheta = Nt;
    row.sup_error = err;
    double h = sol.field.dr();
    if (!rows.empty() && err > 0.0 && prev_err > 0.0)
      row.observed_order = std::log(prev_err / err) / std::log(prev_h / h);
    rows.push_back(row);
    prev_err = err;
    prev_h = h;
  }
  return rows;
}

double gradient_map_mass(const GridField& field, int n) {
  require(n == 2, ErrorCode::NotImplemented, "image mass implemented in 2-D");
  // One sector per angular column: a finer partition would leave sectors
  // with no samples and undercount the image.
  const int sectors = field.ntheta();
  std::vector<double> pmin(sectors, std::numeric_limits<double>::infinity());
  std::vector<double> pmax(sectors, 0.0);
  for (int i = 0; i < field.nr(); ++i)
    for (int j = 0; j < field.ntheta(); ++j) {
      Vec p = field.cart_grad(i, j);
      double ang = std::atan2(p[1], p[0]);
      if (ang < 0.0) ang += 2.0 * std::numbers::pi;
      // Sectors are centered on the grid angles so a near-radial gradient
      // map never straddles a sector boundary through rounding alone.
      int sec = static_cast<int>(
                    std::lround(ang / (2.0 * std::numbers::pi) * sectors)) %
                sectors;
      double mag = p.norm();
      pmin[sec] = std::min(pmin[sec], mag);
      pmax[sec] = std::max(pmax[sec], mag);
    }
  double mass = 0.0;
  double wedge = 2.0 * std::numbers::pi / sectors;
  for (int s = 0; s < sectors; ++s) {
    if (!(pmax[s] > 0.0) || !std::isfinite(pmin[s])) continue;
    // For the (1+|p|^2)^{-2} density the radial integral is elementary.
    double lo = pmin[s], hi = pmax[s];
    mass += wedge * 0.5 *
            (1.0 / (1.0 + lo * lo) - 1.0 / (1.0 + hi * hi));
  }
  return mass;
}

}  // namespace malab
