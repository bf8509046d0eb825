#include "malab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace malab {

const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::BadDomain: return "BadDomain";
    case ErrorCode::BadSpec: return "BadSpec";
    case ErrorCode::PointNotOnBoundary: return "PointNotOnBoundary";
    case ErrorCode::NotTangent: return "NotTangent";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::ValidityViolated: return "ValidityViolated";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::BadMu: return "BadMu";
    case ErrorCode::UnsupportedFamily: return "UnsupportedFamily";
    case ErrorCode::UnsupportedDomain: return "UnsupportedDomain";
    case ErrorCode::ParameterOutOfRange: return "ParameterOutOfRange";
    case ErrorCode::GammaZero: return "GammaZero";
    case ErrorCode::DenominatorSign: return "DenominatorSign";
    case ErrorCode::NegativeK: return "NegativeK";
    case ErrorCode::PsiNotPositive: return "PsiNotPositive";
    case ErrorCode::MonotonicityViolated: return "MonotonicityViolated";
    case ErrorCode::FlowDataInvalid: return "FlowDataInvalid";
    case ErrorCode::MissingFlow: return "MissingFlow";
    case ErrorCode::KOutOfRange: return "KOutOfRange";
    case ErrorCode::BadDefiningFunction: return "BadDefiningFunction";
    case ErrorCode::RhoTooDeep: return "RhoTooDeep";
    case ErrorCode::LambdaOutOfRange: return "LambdaOutOfRange";
    case ErrorCode::GaugeUndefined: return "GaugeUndefined";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::NotImplemented: return "NotImplemented";
    case ErrorCode::NotIntegrable: return "NotIntegrable";
    case ErrorCode::NoRoot: return "NoRoot";
    case ErrorCode::NoBracket: return "NoBracket";
    case ErrorCode::SlopeCollapse: return "SlopeCollapse";
    case ErrorCode::StepRejected: return "StepRejected";
    case ErrorCode::MaxIterations: return "MaxIterations";
    case ErrorCode::SingularHessian: return "SingularHessian";
    case ErrorCode::DivergedNonConvex: return "DivergedNonConvex";
    case ErrorCode::ConvexityLost: return "ConvexityLost";
    case ErrorCode::DeterminantFloor: return "DeterminantFloor";
    case ErrorCode::TimeStepTooLarge: return "TimeStepTooLarge";
  }
  return "UnknownError";
}

bool is_solver_failure(ErrorCode c) {
  switch (c) {
    case ErrorCode::NotIntegrable:
    case ErrorCode::NoRoot:
    case ErrorCode::NoBracket:
    case ErrorCode::SlopeCollapse:
    case ErrorCode::StepRejected:
    case ErrorCode::MaxIterations:
    case ErrorCode::SingularHessian:
    case ErrorCode::DivergedNonConvex:
    case ErrorCode::ConvexityLost:
    case ErrorCode::DeterminantFloor:
    case ErrorCode::TimeStepTooLarge:
      return true;
    default:
      return false;
  }
}

namespace {

struct Gl16 {
  double node[16];
  double weight[16];
};

// Nodes/weights computed once via Newton on the Legendre recurrence; avoids a
// table of 32 hand-typed literals.
const Gl16& gl16() {
  static const Gl16 rule = [] {
    Gl16 r{};
    constexpr int n = 16;
    for (int i = 0; i < n / 2; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      double w = 2.0 / ((1.0 - x * x) * dp * dp);
      r.node[i] = -x;
      r.node[n - 1 - i] = x;
      r.weight[i] = w;
      r.weight[n - 1 - i] = w;
    }
    return r;
  }();
  return rule;
}

double adaptive_rec(const Fn1& f, double a, double b, double whole, double eps,
                    int depth) {
  if (depth > 48) raise(ErrorCode::NotIntegrable, "adaptive bisection depth exceeded");
  double m = 0.5 * (a + b);
  double left = gl16_panel(f, a, m);
  double right = gl16_panel(f, m, b);
  if (std::abs(left + right - whole) <= eps) return left + right;
  return adaptive_rec(f, a, m, left, eps * 0.5, depth + 1) +
         adaptive_rec(f, m, b, right, eps * 0.5, depth + 1);
}

}  // namespace

double gl16_panel(const Fn1& f, double a, double b) {
  const Gl16& r = gl16();
  double mid = 0.5 * (a + b);
  double half = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < 16; ++i) s += r.weight[i] * f(mid + half * r.node[i]);
  return s * half;
}

double integrate(const Fn1& f, double a, double b, double rel_tol) {
  if (a == b) return 0.0;
  // Seed the absolute budget from a 4-panel estimate so the relative
  // tolerance applies to the whole integral, not per subinterval.
  double rough = 0.0;
  for (int k = 0; k < 4; ++k)
    rough += gl16_panel(f, a + (b - a) * k / 4.0, a + (b - a) * (k + 1) / 4.0);
  double eps = rel_tol * std::max(std::abs(rough), 1e-14);
  return adaptive_rec(f, a, b, gl16_panel(f, a, b), eps, 0);
}

double integrate_to_infinity(const Fn1& f, double a, double rel_tol,
                             double shell_cut) {
  double b = std::max(2.0 * std::abs(a), std::max(a + 1.0, 1.0));
  double total = integrate(f, a, b, rel_tol);
  double prev_shell = std::abs(total);
  for (int k = 0; k < 64; ++k) {
    double shell = integrate(f, b, 2.0 * b, rel_tol);
    total += shell;
    if (std::abs(shell) < shell_cut * std::max(std::abs(total), 1e-300)) return total;
    // Ratio test: shells must eventually decay or the integral diverges.
    if (k > 4 && std::abs(shell) > prev_shell)
      raise(ErrorCode::NotIntegrable, "dyadic shells not decaying");
    prev_shell = std::abs(shell);
    b *= 2.0;
  }
  raise(ErrorCode::NotIntegrable, "dyadic shell truncation did not converge");
}

double sphere_integral(const FnV& h, int n, double s, double rel_tol) {
  require(s >= 0.0, ErrorCode::ParameterOutOfRange, "sphere radius < 0");
  if (n == 1) {
    Vec p(1);
    p << s;
    double v = h(p);
    p << -s;
    return v + h(p);
  }
  if (n == 2) {
    return integrate(
        [&](double t) {
          Vec p(2);
          p << s * std::cos(t), s * std::sin(t);
          return h(p);
        },
        0.0, 2.0 * std::numbers::pi, rel_tol) * s;
  }
  if (n == 3) {
    // Product rule: adaptive in the polar angle, periodic trapezoid (64
    // points, spectrally accurate for smooth integrands) in azimuth.
    constexpr int naz = 64;
    auto ring = [&](double polar) {
      double acc = 0.0;
      double sp = std::sin(polar), cp = std::cos(polar);
      for (int j = 0; j < naz; ++j) {
        double az = 2.0 * std::numbers::pi * j / naz;
        Vec p(3);
        p << s * sp * std::cos(az), s * sp * std::sin(az), s * cp;
        acc += h(p);
      }
      return acc * (2.0 * std::numbers::pi / naz) * sp;
    };
    return integrate(ring, 0.0, std::numbers::pi, rel_tol) * s * s;
  }
  raise(ErrorCode::NotImplemented, "sphere_integral supports n <= 3");
}

double integrate_ball(const FnV& h, int n, double R, double rel_tol) {
  if (R <= 0.0) return 0.0;
  return integrate([&](double s) { return sphere_integral(h, n, s, rel_tol); },
                   0.0, R, rel_tol);
}

double integrate_rn(const FnV& h, int n, double rel_tol, double shell_cut) {
  return integrate_to_infinity(
      [&](double s) { return sphere_integral(h, n, s, rel_tol); }, 0.0, rel_tol,
      shell_cut);
}

double find_root(const Fn1& f, double lo, double hi, double tol, int max_iter) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  require(flo * fhi < 0.0, ErrorCode::NoBracket, "no sign change on bracket");
  for (int it = 0; it < max_iter; ++it) {
    double mid = 0.5 * (lo + hi);
    double fm = f(mid);
    if (fm == 0.0 || hi - lo < tol * std::max(1.0, std::abs(mid))) return mid;
    if (flo * fm < 0.0) {
      hi = mid;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  return 0.5 * (lo + hi);
}

double grow_bracket_and_solve(const Fn1& f, double lo, double hi_start,
                              double tol, int max_doublings) {
  double hi = hi_start;
  double flo = f(lo);
  for (int k = 0; k < max_doublings; ++k) {
    if (flo * f(hi) < 0.0) return find_root(f, lo, hi, tol);
    hi *= 2.0;
  }
  raise(ErrorCode::NoRoot, "bracket growth found no sign change");
}

double golden_section_min(const Fn1& f, double a, double b, double tol) {
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol * std::max(1.0, std::abs(a) + std::abs(b))) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

double fd_dir1(const FnV& f, const Vec& x, const Vec& e, double h) {
  auto fs = [&](double s) { return f(x + s * e); };
  return (-fs(2 * h) + 8 * fs(h) - 8 * fs(-h) + fs(-2 * h)) / (12 * h);
}

double fd_dir2(const FnV& f, const Vec& x, const Vec& e, double h) {
  auto fs = [&](double s) { return f(x + s * e); };
  return (-fs(2 * h) + 16 * fs(h) - 30 * fs(0) + 16 * fs(-h) - fs(-2 * h)) /
         (12 * h * h);
}

std::vector<Vec> fibonacci_sphere(int count) {
  std::vector<Vec> pts;
  pts.reserve(count);
  const double ga = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < count; ++i) {
    double z = 1.0 - 2.0 * (i + 0.5) / count;
    double rad = std::sqrt(std::max(0.0, 1.0 - z * z));
    double t = ga * i;
    Vec p(3);
    p << rad * std::cos(t), rad * std::sin(t), z;
    pts.push_back(p);
  }
  return pts;
}

Vec halton_point(int index, int dim) {
  static const int primes[] = {2, 3, 5, 7, 11, 13, 17, 19};
  require(dim <= 8, ErrorCode::ParameterOutOfRange, "halton dim > 8");
  Vec p(dim);
  for (int d = 0; d < dim; ++d) {
    int base = primes[d];
    double f = 1.0, val = 0.0;
    int i = index + 1;
    while (i > 0) {
      f /= base;
      val += f * (i % base);
      i /= base;
    }
    p[d] = val;
  }
  return p;
}

}  // namespace malab
