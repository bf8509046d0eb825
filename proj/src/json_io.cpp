#include "malab/json_io.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "malab/closed_form.hpp"

namespace malab {

namespace {

Vec vec_of(const ordered_json& j) {
  require(j.is_array() && !j.empty(), ErrorCode::BadSpec,
          "expected a coordinate array");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  return v;
}

double num_at(const ordered_json& j, const char* key) {
  require(j.contains(key) && j.at(key).is_number(), ErrorCode::BadSpec,
          std::string("missing numeric field '") + key + "'");
  return j.at(key).get<double>();
}

AnnularDomain parse_domain(const ordered_json& j) {
  std::string kind = j.value("kind", "concentric");
  if (kind == "concentric") {
    int dim = j.value("dim", 2);
    return AnnularDomain::concentric(dim, num_at(j, "r_inner"),
                                     num_at(j, "r_outer"));
  }
  if (kind == "skewed2d") {
    return AnnularDomain::skewed2d(vec_of(j.at("center_inner")),
                                   num_at(j, "r_inner"),
                                   vec_of(j.at("center_outer")),
                                   num_at(j, "r_outer"));
  }
  raise(ErrorCode::BadSpec, "unknown domain kind '" + kind + "'");
}

PsiSpec parse_psi(const ordered_json& j, const AnnularDomain& dom) {
  std::string kind = j.value("kind", "constant");
  if (kind == "constant") return PsiSpec::constant(j.value("value", 1.0));
  if (kind == "poly-r") {
    auto coeffs = j.at("coeffs").get<std::vector<double>>();
    require(!coeffs.empty(), ErrorCode::BadSpec, "poly-r needs coefficients");
    return PsiSpec::of_x([coeffs](const Vec& x) {
      double r = x.norm();
      double acc = 0.0;
      for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * r + coeffs[k];
      return acc;
    });
  }
  if (kind == "gauss-curvature") {
    std::string profile = j.value("profile", "outer-vanishing");
    require(profile == "outer-vanishing", ErrorCode::BadSpec,
            "unknown curvature profile '" + profile + "'");
    double scale = j.value("scale", 1.0);
    require(scale > 0.0, ErrorCode::BadSpec, "curvature scale must be positive");
    double cap = dom.r_outer();
    return PsiSpec::gauss_curvature([scale, cap](const Vec& x) {
      return scale * std::max(cap - x.norm(), 0.0);
    });
  }
  if (kind == "igcf") {
    // Inverse-Gauss-curvature flow right-hand side (1+|p|^2)^{(n+3)/2},
    // stored through its n-th root.
    return PsiSpec::of_xzp([](const Vec& x, double, const Vec& p) {
      double n = static_cast<double>(x.size());
      return std::pow(1.0 + p.squaredNorm(), (n + 3.0) / (2.0 * n));
    });
  }
  raise(ErrorCode::BadSpec, "unknown psi kind '" + kind + "'");
}

ScalarField parse_phi(const ordered_json& j, const AnnularDomain& dom,
                      const PsiSpec& psi, double gamma0) {
  std::string kind = j.value("kind", "constant");
  if (kind == "constant") return constant_field(j.value("value", 0.0));
  if (kind == "from-dk") {
    // Robin data matched to the radial closed form with inner slope d.
    require(psi.kind() == PsiSpec::Kind::Constant, ErrorCode::BadSpec,
            "from-dk needs a constant psi");
    require(dom.kind() == AnnularDomain::Kind::Concentric && dom.dim() == 2,
            ErrorCode::BadSpec, "from-dk needs the 2-D concentric annulus");
    PhiSequence seq;
    seq.psi = psi.value(Vec::Zero(2), 0.0, Vec::Zero(2), 2);
    seq.gamma0 = gamma0;
    seq.r_inner = dom.r_inner();
    seq.r_outer = dom.r_outer();
    return constant_field(seq.phi_of_d(num_at(j, "d")));
  }
  if (kind == "poly2") {
    double c0 = j.value("c0", 0.0);
    Vec c1 = j.contains("c1") ? vec_of(j.at("c1")) : Vec::Zero(dom.dim());
    Mat c2 = Mat::Zero(dom.dim(), dom.dim());
    if (j.contains("c2")) {
      const auto& rows = j.at("c2");
      require(rows.is_array() && static_cast<int>(rows.size()) == dom.dim(),
              ErrorCode::BadSpec, "c2 must be a dim x dim matrix");
      for (int a = 0; a < dom.dim(); ++a) {
        Vec row = vec_of(rows[a]);
        require(row.size() == dom.dim(), ErrorCode::BadSpec,
                "c2 must be a dim x dim matrix");
        c2.row(a) = row.transpose();
      }
    }
    require(c1.size() == dom.dim(), ErrorCode::BadSpec, "c1 has wrong length");
    ScalarField f;
    Mat sym = c2 + c2.transpose();
    f.value = [c0, c1, c2](const Vec& x) {
      return c0 + c1.dot(x) + x.dot(c2 * x);
    };
    f.grad = [c1, sym](const Vec& x) -> Vec { return c1 + sym * x; };
    f.hess = [sym](const Vec&) -> Mat { return sym; };
    return f;
  }
  if (kind == "skewed-quadratic") {
    // Exact Robin trace of the quadratic solution centered at the outer
    // center, extended smoothly off the inner circle.
    require(dom.kind() == AnnularDomain::Kind::Skewed2D, ErrorCode::BadSpec,
            "skewed-quadratic needs a skewed domain");
    double psi0 = j.value("psi", 1.0);
    Vec cin = dom.center_inner();
    Vec cout = dom.center_outer();
    double rout = dom.r_outer();
    ScalarField f;
    f.value = [psi0, gamma0, cin, cout, rout](const Vec& x) {
      Vec w = x - cin;
      double wn = w.norm();
      require(wn > 1e-14, ErrorCode::OutOfDomain, "inner center singularity");
      Vec nu = w / wn;
      double u = 0.5 * psi0 * (x - cout).squaredNorm() - 0.5 * psi0 * rout * rout;
      return psi0 * (x - cout).dot(nu) - gamma0 * u;
    };
    return f;
  }
  raise(ErrorCode::BadSpec, "unknown phi kind '" + kind + "'");
}

FlowData parse_flow(const ordered_json& j, const ScalarField& phi0) {
  FlowData f;
  double th = j.value("theta_rate", 1.0);
  require(th > 0.0, ErrorCode::BadSpec, "theta_rate must be positive");
  f.theta = [th](double t) { return -th * t; };
  f.theta_dot = [th](double) { return -th; };
  double pr = j.value("phit", 1.0);
  require(pr > 0.0, ErrorCode::BadSpec, "phit must be positive");
  auto base = phi0.value;
  require(static_cast<bool>(base), ErrorCode::BadSpec, "flow needs phi data");
  f.phi_t = [base, pr](const Vec& x, double t) { return base(x) + pr * t; };
  f.phi_t_rate = [pr](const Vec&, double) { return pr; };
  f.horizon = j.value("horizon", 1.0);
  require(f.horizon > 0.0, ErrorCode::BadSpec, "horizon must be positive");
  return f;
}

}  // namespace

ProblemSpec parse_problem_spec(const ordered_json& j) {
  require(j.is_object(), ErrorCode::BadSpec, "spec must be a JSON object");
  require(j.contains("domain"), ErrorCode::BadSpec, "missing 'domain'");
  ProblemSpec spec;
  spec.domain = parse_domain(j.at("domain"));
  spec.psi = j.contains("psi") ? parse_psi(j.at("psi"), spec.domain)
                               : PsiSpec::constant(1.0);
  spec.gamma0 = j.value("gamma0", 1.0);
  spec.phi = j.contains("phi")
                 ? parse_phi(j.at("phi"), spec.domain, spec.psi, spec.gamma0)
                 : constant_field(0.0);
  if (j.contains("flow")) spec.flow = parse_flow(j.at("flow"), spec.phi);
  spec.validate();
  return spec;
}

ProblemSpec load_problem_spec(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::BadSpec, "cannot open spec file " + path);
  ordered_json j;
  try {
    j = ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorCode::BadSpec, std::string("spec is not valid JSON: ") + e.what());
  }
  return parse_problem_spec(j);
}

ordered_json report_to_json(const ConditionReport& rep) {
  ordered_json j;
  j["condition"] = condition_id_name(rep.condition_id);
  j["satisfied"] = rep.satisfied;
  j["margin"] = rep.margin;
  ordered_json constants = ordered_json::object();
  for (const auto& [name, value] : rep.constants_used) constants[name] = value;
  j["constants"] = constants;
  j["samples"] = rep.samples;
  return j;
}

std::string content_digest(const std::string& content) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : content) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ordered_json RunManifest::to_json() const {
  ordered_json j;
  j["command"] = command;
  j["spec_digest"] = spec_digest;
  j["tool_version"] = tool_version;
  j["seed"] = seed;
  j["outputs"] = outputs;
  return j;
}

}  // namespace malab
