#pragma once

#include <functional>
#include <optional>

#include "malab/geometry.hpp"

namespace malab {

// Right-hand side of the equation det D^2 u = psi^n(x, u, Du).
// Stored as psi itself (the n-th root); rhs() returns psi^n.
class PsiSpec {
 public:
  enum class Kind { Constant, OfX, OfXZ, OfXZP, GaussCurvature };

  using FnX = std::function<double(const Vec&)>;
  using FnXZ = std::function<double(const Vec&, double)>;
  using FnXZP = std::function<double(const Vec&, double, const Vec&)>;

  static PsiSpec constant(double value);
  static PsiSpec of_x(FnX f);
  static PsiSpec of_xz(FnXZ f);                 // must be nondecreasing in z
  static PsiSpec of_xzp(FnXZP f);
  // psi^n = K(x) * (1 + |p|^2)^{(n+2)/2}; K >= 0, may vanish on the outer rim.
  static PsiSpec gauss_curvature(FnX K);

  Kind kind() const { return kind_; }
  bool depends_on_z() const { return kind_ == Kind::OfXZ || kind_ == Kind::OfXZP; }
  bool depends_on_p() const {
    return kind_ == Kind::OfXZP || kind_ == Kind::GaussCurvature;
  }

  // psi(x, z, p) itself (positive); unused arguments ignored.
  double value(const Vec& x, double z, const Vec& p, int n) const;
  // psi^n(x, z, p).
  double rhs(const Vec& x, double z, const Vec& p, int n) const;
  // Gauss-curvature profile K(x); only for Kind::GaussCurvature.
  double curvature_profile(const Vec& x) const;

  // Samples quasi-random points over the closed annulus times value/gradient
  // boxes and raises PsiNotPositive (or MonotonicityViolated for z) if the
  // evaluator misbehaves. GaussCurvature only requires K >= 0.
  void validate_on(const AnnularDomain& dom, int samples = 1000) const;

 private:
  Kind kind_ = Kind::Constant;
  double const_value_ = 1.0;
  FnX fx_;
  FnXZ fxz_;
  FnXZP fxzp_;
  FnX gauss_k_;
};

struct FlowData {
  std::function<double(double)> theta;                  // outer trace, theta(0)=0, theta' < 0
  std::function<double(double)> theta_dot;
  std::function<double(const Vec&, double)> phi_t;      // inner data at time t
  std::function<double(const Vec&, double)> phi_t_rate; // d/dt of the above, > 0
  double horizon = 1.0;
};

// One full problem instance: domain, right-hand side, Robin data.
struct ProblemSpec {
  AnnularDomain domain = AnnularDomain::concentric(2, 1.0, 2.0);
  PsiSpec psi = PsiSpec::constant(1.0);
  double gamma0 = 1.0;
  // Inner boundary data, defined on a neighborhood of the inner circle so
  // derivative sampling makes sense.
  ScalarField phi;
  std::optional<FlowData> flow;

  int dim() const { return domain.dim(); }
  void validate() const;
};

// phi given by a constant (grad/hess filled in as zero).
ScalarField constant_field(double value);

}  // namespace malab
