#include "malab/problem.hpp"

#include <cmath>

#include "malab/numerics.hpp"

namespace malab {

PsiSpec PsiSpec::constant(double value) {
  require(value > 0.0, ErrorCode::PsiNotPositive, "constant psi must be > 0");
  PsiSpec s;
  s.kind_ = Kind::Constant;
  s.const_value_ = value;
  return s;
}

PsiSpec PsiSpec::of_x(FnX f) {
  PsiSpec s;
  s.kind_ = Kind::OfX;
  s.fx_ = std::move(f);
  return s;
}

PsiSpec PsiSpec::of_xz(FnXZ f) {
  PsiSpec s;
  s.kind_ = Kind::OfXZ;
  s.fxz_ = std::move(f);
  return s;
}

PsiSpec PsiSpec::of_xzp(FnXZP f) {
  PsiSpec s;
  s.kind_ = Kind::OfXZP;
  s.fxzp_ = std::move(f);
  return s;
}

PsiSpec PsiSpec::gauss_curvature(FnX K) {
  PsiSpec s;
  s.kind_ = Kind::GaussCurvature;
  s.gauss_k_ = std::move(K);
  return s;
}

double PsiSpec::value(const Vec& x, double z, const Vec& p, int n) const {
  switch (kind_) {
    case Kind::Constant: return const_value_;
    case Kind::OfX: return fx_(x);
    case Kind::OfXZ: return fxz_(x, z);
    case Kind::OfXZP: return fxzp_(x, z, p);
    case Kind::GaussCurvature:
      return std::pow(rhs(x, z, p, n), 1.0 / n);
  }
  return const_value_;
}

double PsiSpec::rhs(const Vec& x, double z, const Vec& p, int n) const {
  if (kind_ == Kind::GaussCurvature) {
    double q = 1.0 + p.squaredNorm();
    return gauss_k_(x) * std::pow(q, 0.5 * (n + 2));
  }
  return std::pow(value(x, z, p, n), n);
}

double PsiSpec::curvature_profile(const Vec& x) const {
  require(kind_ == Kind::GaussCurvature, ErrorCode::UnsupportedFamily,
          "curvature_profile needs a GaussCurvature psi");
  return gauss_k_(x);
}

void PsiSpec::validate_on(const AnnularDomain& dom, int samples) const {
  if (kind_ == Kind::Constant) return;
  const int n = dom.dim();
  for (int i = 0; i < samples; ++i) {
    Vec h = halton_point(i, n + 2);
    // Map the first n coordinates into the bounding box of the annulus and
    // keep only points that land inside it.
    Vec x(n);
    for (int d = 0; d < n; ++d)
      x[d] = dom.center_outer()[d] + (2.0 * h[d] - 1.0) * dom.r_outer();
    if (!dom.contains(x, 0.0)) continue;
    double z = -3.0 * h[n];
    Vec p = Vec::Constant(n, 4.0 * h[n + 1] - 2.0);
    if (kind_ == Kind::GaussCurvature) {
      require(gauss_k_(x) >= 0.0, ErrorCode::NegativeK,
              "curvature profile must be nonnegative");
      continue;
    }
    require(value(x, z, p, n) > 0.0, ErrorCode::PsiNotPositive,
            "psi must be positive on the sampled box");
    if (depends_on_z()) {
      double lo = value(x, z, p, n), hi = value(x, z + 0.5, p, n);
      require(hi >= lo - 1e-12, ErrorCode::MonotonicityViolated,
              "psi must be nondecreasing in z");
    }
  }
}

void ProblemSpec::validate() const {
  require(gamma0 >= 0.0, ErrorCode::BadSpec, "gamma0 must be nonnegative");
  psi.validate_on(domain);
  if (flow) {
    require(static_cast<bool>(flow->theta) && static_cast<bool>(flow->phi_t),
            ErrorCode::FlowDataInvalid, "flow needs theta and phi");
    require(std::abs(flow->theta(0.0)) <= 1e-12, ErrorCode::FlowDataInvalid,
            "flow outer trace must vanish at t=0");
  }
}

ScalarField constant_field(double value) {
  ScalarField f;
  f.value = [value](const Vec&) { return value; };
  f.grad = [](const Vec& x) { return Vec::Zero(x.size()).eval(); };
  f.hess = [](const Vec& x) { return Mat::Zero(x.size(), x.size()).eval(); };
  return f;
}

}  // namespace malab
