// malab: command-line laboratory for Monge-Ampere problems on annular
// domains. Subcommands cover closed-form oracles, solvability-condition
// checks, a-priori constants, the radial and 2-D solvers, parabolic flow
// runs, and barrier-field dumps. Every invocation writes a manifest so runs
// can be reproduced byte for byte.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "malab/bounds.hpp"
#include "malab/closed_form.hpp"
#include "malab/conditions.hpp"
#include "malab/flow_solver.hpp"
#include "malab/json_io.hpp"
#include "malab/polar_solver.hpp"
#include "malab/radial_solver.hpp"

namespace {

constexpr const char* kVersion = "1.0.0";

using malab::ordered_json;

// Built-in problem presets keyed by the tokens the docs use.
const std::map<std::string, const char*> kPresets = {
    {"paper-4.2", R"({
      "domain": {"kind": "concentric", "dim": 2, "r_inner": 1.0, "r_outer": 2.0},
      "psi": {"kind": "constant", "value": 1.0},
      "gamma0": 1.0,
      "phi": {"kind": "from-dk", "d": 0.5}
    })"},
    {"paper-4.3", R"({
      "domain": {"kind": "skewed2d", "center_inner": [0.25, 0.0], "r_inner": 0.5,
                 "center_outer": [1.0, 0.0], "r_outer": 2.0},
      "psi": {"kind": "constant", "value": 1.0},
      "gamma0": 0.0,
      "phi": {"kind": "skewed-quadratic", "psi": 1.0}
    })"},
    {"paper-5.2", R"({
      "domain": {"kind": "concentric", "dim": 2, "r_inner": 1.0, "r_outer": 1.5},
      "psi": {"kind": "constant", "value": 1.0},
      "gamma0": 1.0,
      "phi": {"kind": "constant", "value": 0.0}
    })"},
    {"paper-6-omega", R"({
      "domain": {"kind": "concentric", "dim": 2, "r_inner": 1.0, "r_outer": 2.0},
      "psi": {"kind": "gauss-curvature", "profile": "outer-vanishing", "scale": 0.05},
      "gamma0": 1.0,
      "phi": {"kind": "constant", "value": 1.0}
    })"},
    {"paper-7-flow", R"({
      "domain": {"kind": "concentric", "dim": 2, "r_inner": 1.0, "r_outer": 2.0},
      "psi": {"kind": "constant", "value": 1.0},
      "gamma0": 2.0,
      "phi": {"kind": "constant", "value": 4.0},
      "flow": {"theta_rate": 1.0, "phit": 1.0, "horizon": 1.0}
    })"},
};

struct Session {
  std::string out_dir;
  std::string spec_text;   // JSON text the spec digest is taken over
  std::string preset;
  std::string spec_file;
  std::vector<std::string> argv;
  std::vector<std::string> outputs;

  std::string path(const std::string& name) const {
    return out_dir.empty() ? name : out_dir + "/" + name;
  }

  std::ofstream open(const std::string& name) {
    std::string p = path(name);
    std::ofstream f(p);
    malab::require(f.good(), malab::ErrorCode::BadSpec,
                   "cannot open output file " + p);
    outputs.push_back(name);
    return f;
  }

  // Resolves --preset / --spec into a problem spec; falls back to the given
  // default preset when neither was supplied.
  malab::ProblemSpec resolve(const std::string& fallback) {
    if (!spec_file.empty()) {
      std::ifstream in(spec_file);
      malab::require(in.good(), malab::ErrorCode::BadSpec,
                     "cannot open spec file " + spec_file);
      std::ostringstream ss;
      ss << in.rdbuf();
      spec_text = ss.str();
    } else {
      std::string key = preset.empty() ? fallback : preset;
      auto it = kPresets.find(key);
      malab::require(it != kPresets.end(), malab::ErrorCode::BadSpec,
                     "unknown preset '" + key + "'");
      spec_text = it->second;
    }
    return malab::parse_problem_spec(ordered_json::parse(spec_text));
  }

  void finish() {
    malab::RunManifest m;
    std::string cmd;
    for (const auto& a : argv) {
      if (!cmd.empty()) cmd += ' ';
      cmd += a;
    }
    m.command = cmd;
    m.spec_digest = malab::content_digest(spec_text);
    m.tool_version = kVersion;
    m.seed = 0;
    m.outputs = outputs;
    std::ofstream f(path("manifest.json"));
    f << m.to_json().dump(2) << "\n";
  }
};

void add_spec_flags(CLI::App* cmd, Session& s) {
  cmd->add_option("--preset", s.preset, "built-in problem preset");
  cmd->add_option("--spec", s.spec_file, "problem spec JSON file");
}

void write_json(Session& s, const std::string& name, const ordered_json& j) {
  auto f = s.open(name);
  f << j.dump(2) << "\n";
}

// ---------------------------------------------------------------- oracle --

struct OracleArgs {
  std::string family = "radial2d";
  double psi = 1.0;
  double dk = 0.0;
  bool dk_given = false;
  int n = 2;
  double r_inner = 1.0, r_outer = 2.0;
  double gamma0 = 1.0;
  int samples = 64;
  std::vector<double> sweep;
};

void cmd_oracle(Session& s, const OracleArgs& a) {
  using malab::ClosedFormSolution;
  const bool needs_dk = a.family != "skewed-quadratic";
  if (needs_dk && !a.dk_given) throw CLI::RequiredError("--dk");

  // Record the effective parameters as the digested spec.
  ordered_json eff;
  eff["family"] = a.family;
  eff["psi"] = a.psi;
  eff["n"] = a.n;
  eff["r_inner"] = a.r_inner;
  eff["r_outer"] = a.r_outer;
  eff["gamma0"] = a.gamma0;
  if (a.dk_given) eff["dk"] = a.dk;
  s.spec_text = eff.dump();

  if (a.family == "skewed-quadratic") {
    auto spec = s.resolve("paper-4.3");
    s.spec_text = eff.dump() + s.spec_text;
    malab::require(spec.domain.kind() == malab::AnnularDomain::Kind::Skewed2D,
                   malab::ErrorCode::BadSpec,
                   "skewed-quadratic oracle needs a skewed domain");
    auto sol = ClosedFormSolution::skewed_quadratic(
        a.psi, spec.domain.center_outer(), spec.domain.r_outer());
    auto f = s.open("oracle_fields.csv");
    f << "x,y,u,u_nu\n";
    for (int k = 0; k < a.samples; ++k) {
      double t = 2.0 * M_PI * k / a.samples;
      malab::Vec x = spec.domain.inner_point(t);
      double unu = malab::skewed_inner_neumann(sol, spec.domain, x);
      f << malab::fmt17(x[0]) << ',' << malab::fmt17(x[1]) << ','
        << malab::fmt17(sol.eval(x).u) << ',' << malab::fmt17(unu) << '\n';
    }
    s.finish();
    return;
  }

  ClosedFormSolution sol = [&] {
    if (a.family == "radial2d")
      return ClosedFormSolution::radial2d(a.psi, a.r_inner, a.r_outer, a.dk);
    if (a.family == "radial-nd")
      return ClosedFormSolution::radial_nd(a.n, a.psi, a.r_inner, a.r_outer,
                                           a.dk);
    if (a.family == "gradient-blowup")
      return ClosedFormSolution::gradient_blowup(a.r_inner, a.r_outer, a.dk);
    malab::raise(malab::ErrorCode::BadSpec,
                 "unknown family '" + a.family + "'");
  }();

  {
    auto f = s.open("oracle_fields.csv");
    f << "r,theta,u,u_r,u_rr,det\n";
    int nth = 8;
    for (int i = 0; i < a.samples; ++i) {
      double r =
          a.r_inner + (a.r_outer - a.r_inner) * i / double(a.samples - 1);
      double ur = sol.ur_of_r(r);
      double urr = sol.urr_of_r(r);
      double det = urr * std::pow(ur / r, sol.dim() - 1);
      for (int j = 0; j < nth; ++j) {
        double th = 2.0 * M_PI * j / nth;
        f << malab::fmt17(r) << ',' << malab::fmt17(th) << ','
          << malab::fmt17(sol.u_of_r(r)) << ',' << malab::fmt17(ur) << ','
          << malab::fmt17(urr) << ',' << malab::fmt17(det) << '\n';
      }
    }
  }

  // Blow-up table: inner double normal derivative against the slope.
  std::vector<double> ds = a.sweep;
  if (ds.empty()) ds.push_back(a.dk);
  auto f = s.open("oracle_blowup.csv");
  f << "d,phi_k,u_nn_inner,sup_grad\n";
  if (a.family == "gradient-blowup") {
    for (double d : ds) {
      auto fam = ClosedFormSolution::gradient_blowup(a.r_inner, a.r_outer, d);
      f << malab::fmt17(d) << ',' << malab::fmt17(fam.robin_phi(a.gamma0))
        << ',' << malab::fmt17(fam.inner_dnn()) << ','
        << malab::fmt17(fam.sup_grad()) << '\n';
    }
  } else {
    malab::ProblemSpec spec;
    spec.domain = malab::AnnularDomain::concentric(a.n, a.r_inner, a.r_outer);
    spec.psi = malab::PsiSpec::constant(a.psi);
    spec.gamma0 = a.gamma0;
    spec.phi = malab::constant_field(0.0);
    for (const auto& row : malab::blowup_sweep(spec, ds)) {
      f << malab::fmt17(row.d) << ',' << malab::fmt17(row.phi_k) << ','
        << malab::fmt17(row.u_nn_inner) << ',' << malab::fmt17(row.sup_grad)
        << '\n';
    }
  }
  s.finish();
}

// ----------------------------------------------------------------- check --

struct CheckArgs {
  std::string condition;
  double width = 0.5;
  double M = 10.0;
  double M_tilde = 10.0;
  double N = 1.2;
  double C_tilde = 0.1;
  double dk = 0.5;
  double dk_sub = 0.25;
  double Z = 2.0;
  double beta = 1.0;
  double band = 0.25;
  double z_min = -1.0;
  double tau_floor = 1e-3;
};

void cmd_check(Session& s, const CheckArgs& a) {
  using malab::ClosedFormSolution;
  malab::ConditionReport rep;
  if (a.condition == "structure") {
    // Mass-comparison counterexample family: g = 1/|x| over an annulus of
    // the given width against h = e^{-|p|}/|p|.
    auto spec = s.resolve("paper-5.2");
    malab::require(a.width > 0.0 && a.width < 1.0,
                   malab::ErrorCode::ParameterOutOfRange,
                   "--width must lie in (0,1)");
    spec.domain = malab::AnnularDomain::concentric(
        2, spec.domain.r_inner(), spec.domain.r_inner() + a.width);
    rep = malab::check_structure(
        spec, [](const malab::Vec& x) { return 1.0 / x.norm(); },
        [](const malab::Vec& p) {
          double q = p.norm();
          return std::exp(-q) / q;
        });
  } else if (a.condition == "curvature" || a.condition == "curvature-du") {
    auto spec = s.resolve("paper-4.2");
    auto sol = ClosedFormSolution::radial2d(
        1.0, spec.domain.r_inner(), spec.domain.r_outer(), a.dk);
    spec.phi = malab::constant_field(sol.robin_phi(spec.gamma0));
    auto u_inner = [sol](const malab::Vec& x) {
      return sol.u_of_r(x.norm());
    };
    rep = a.condition == "curvature"
              ? malab::check_curvature(spec, u_inner, a.M)
              : malab::check_curvature_du(spec, u_inner, a.M_tilde, a.N,
                                          a.C_tilde);
  } else if (a.condition == "structure-gradient") {
    auto spec = s.resolve("paper-6-omega");
    double Z0 = a.Z;
    rep = malab::check_structure_gradient(
        spec, [Z0](double) { return Z0; }, a.beta, a.band, a.z_min);
  } else if (a.condition == "subsolution") {
    auto spec = s.resolve("paper-4.2");
    auto sol = ClosedFormSolution::radial2d(
        1.0, spec.domain.r_inner(), spec.domain.r_outer(), a.dk);
    auto sub = ClosedFormSolution::radial2d(
        1.0, spec.domain.r_inner(), spec.domain.r_outer(), a.dk_sub);
    spec.phi = malab::constant_field(sol.robin_phi(spec.gamma0));
    auto field = [](const ClosedFormSolution& c) {
      malab::ScalarField f;
      f.value = [c](const malab::Vec& x) { return c.eval(x).u; };
      f.grad = [c](const malab::Vec& x) { return c.eval(x).grad; };
      f.hess = [c](const malab::Vec& x) { return c.eval(x).hess; };
      return f;
    };
    malab::SubsolutionProbe probe;
    probe.u = field(sol);
    probe.usub = field(sub);
    probe.x0 = spec.domain.inner_point(0.0);
    probe.xi = malab::Vec(2);
    probe.xi << 0.0, 1.0;
    rep = malab::check_subsolution(probe, spec, a.tau_floor);
  } else if (a.condition == "gauss") {
    rep = malab::check_prescribed_gauss(s.resolve("paper-6-omega"));
  } else {
    malab::raise(malab::ErrorCode::BadSpec,
                 "unknown condition '" + a.condition + "'");
  }
  ordered_json j = malab::report_to_json(rep);
  write_json(s, "check_" + a.condition + ".json", j);
  std::cout << j.dump(2) << "\n";
  s.finish();
}

// ------------------------------------------------------------- constants --

struct ConstantsArgs {
  std::string formula = "all";
  std::string K = "auto";
  double dk = 1.0;
  int grid = 96;
};

void cmd_constants(Session& s, const ConstantsArgs& a) {
  auto spec = s.resolve("paper-4.2");
  malab::BoundConstants out;

  double K_best = 0.0;
  bool want = a.formula == "all";
  auto wants = [&](const char* f) { return want || a.formula == f; };

  double C0 = 0.0;
  if (wants("C0") || wants("C1") || wants("C3") || wants("M")) {
    if (a.K == "auto") {
      C0 = malab::c0_bound_auto(spec, &K_best);
      out.set("C0", C0, "sup-bound, K minimized on a log grid");
    } else {
      K_best = std::stod(a.K);
      C0 = malab::c0_bound(spec, K_best);
      out.set("C0", C0, "sup-bound at fixed K");
    }
  }
  auto rho = malab::default_defining_function(spec.domain);
  double C1 = 0.0;
  if (wants("C1") || wants("C3") || wants("M")) {
    C1 = malab::c1_bound(spec, rho, C0);
    out.set("C1", C1, "global gradient bound");
  }
  if (wants("C3")) {
    out.set("C3", malab::c3_bound(spec, C1), "inner mixed-derivative bound");
  }
  if (wants("M")) {
    malab::Vec xi(spec.dim());
    xi.setZero();
    xi[0] = 1.0;
    malab::PsiNorms pn;
    auto norms = malab::sample_barrier_norms(spec, xi, C1, pn, a.grid);
    out.set("ell1", norms.ell1, "barrier coefficient bound");
    out.set("ell2", norms.ell2, "barrier coefficient bound");
    out.set("ell3", norms.ell3, "barrier coefficient bound");
    out.set("M", malab::m_bound(norms, pn, C1, spec.dim()),
            "barrier maximum-principle constant");
  }
  if (a.formula == "flow")
    malab::require(spec.flow.has_value(), malab::ErrorCode::MissingFlow,
                   "constants --formula flow needs a flow preset");
  if (wants("flow") && spec.flow.has_value()) {
    auto sol = malab::ClosedFormSolution::radial2d(
        1.0, spec.domain.r_inner(), spec.domain.r_outer(), a.dk);
    double sup_u0 = std::abs(sol.u_of_r(spec.domain.r_inner()));
    auto fc = malab::flow_constants(spec, sup_u0, &rho);
    out.set("CT_upper", fc.CT_upper, "parabolic speed bound");
    out.set("C0_T", fc.C0_T, "parabolic sup bound");
    out.set("C1_T", fc.C1_T, "parabolic gradient bound");
  }

  ordered_json j;
  auto put = [&](const char* name, const std::optional<double>& v) {
    if (!v) return;
    ordered_json e;
    e["value"] = *v;
    e["formula"] = out.formula_id.at(name);
    j[name] = e;
  };
  put("C0", out.C0);
  put("C1", out.C1);
  put("C3", out.C3);
  put("ell1", out.ell1);
  put("ell2", out.ell2);
  put("ell3", out.ell3);
  put("M", out.M);
  put("CT_upper", out.CT_upper);
  put("C0_T", out.C0_T);
  put("C1_T", out.C1_T);
  if (a.K == "auto" && out.C0) j["K_best"] = K_best;
  write_json(s, "constants.json", j);
  std::cout << j.dump(2) << "\n";
  s.finish();
}

// ---------------------------------------------------------- solve-radial --

struct SolveRadialArgs {
  int n = 2;
  double psi = 1.0;
  double gamma0 = 1.0;
  double r_inner = 1.0, r_outer = 2.0;
  double phi = 0.0;
  bool phi_given = false;
  double phi_from_dk = 0.0;
  bool dk_given = false;
  std::vector<double> d_bracket = {1e-3, 10.0};
  int nodes = 1024;
  double tol = 1e-10;
};

void cmd_solve_radial(Session& s, const SolveRadialArgs& a) {
  malab::ProblemSpec spec;
  spec.domain = malab::AnnularDomain::concentric(a.n, a.r_inner, a.r_outer);
  spec.psi = malab::PsiSpec::constant(a.psi);
  spec.gamma0 = a.gamma0;
  double phi = a.phi;
  if (a.dk_given) {
    auto sol = a.n == 2
                   ? malab::ClosedFormSolution::radial2d(a.psi, a.r_inner,
                                                         a.r_outer, a.phi_from_dk)
                   : malab::ClosedFormSolution::radial_nd(
                         a.n, a.psi, a.r_inner, a.r_outer, a.phi_from_dk);
    phi = sol.robin_phi(a.gamma0);
  } else {
    malab::require(a.phi_given, malab::ErrorCode::BadSpec,
                   "need --phi or --phi-from-dk");
  }
  spec.phi = malab::constant_field(phi);
  malab::require(a.d_bracket.size() == 2, malab::ErrorCode::BadSpec,
                 "--d-bracket needs two values");
  ordered_json eff;
  eff["n"] = a.n;
  eff["psi"] = a.psi;
  eff["gamma0"] = a.gamma0;
  eff["phi"] = phi;
  s.spec_text = eff.dump();

  auto prof = malab::shoot(spec, a.d_bracket[0], a.d_bracket[1], a.tol,
                           a.nodes);
  {
    auto f = s.open("radial_profile.csv");
    f << "r,u,u_r,u_rr\n";
    for (std::size_t i = 0; i < prof.r_nodes.size(); ++i)
      f << malab::fmt17(prof.r_nodes[i]) << ',' << malab::fmt17(prof.u[i])
        << ',' << malab::fmt17(prof.u_r[i]) << ','
        << malab::fmt17(prof.u_rr[i]) << '\n';
  }
  ordered_json j;
  j["d_star"] = prof.d_star;
  j["residual"] = prof.residual;
  j["iterations"] = prof.iterations;
  j["u_inner"] = prof.u_inner();
  j["sup_ode_residual"] = prof.sup_ode_residual(spec);
  write_json(s, "radial_summary.json", j);
  std::cout << j.dump(2) << "\n";
  s.finish();
}

// -------------------------------------------------------------- solve-2d --

struct Solve2dArgs {
  int nr = 64, ntheta = 64;
  double tol = 1e-10;
  int max_iter = 50;
  std::string init = "quadratic";
  std::string init_file;
  double dk = 0.5;
};

malab::GridField read_grid_csv(const malab::AnnularDomain& dom, int Nr,
                               int Ntheta, const std::string& path) {
  std::ifstream in(path);
  malab::require(in.good(), malab::ErrorCode::BadSpec,
                 "cannot open init file " + path);
  std::string line;
  std::getline(in, line);  // header
  malab::GridField f(dom, Nr, Ntheta);
  for (int i = 0; i < Nr; ++i)
    for (int j = 0; j < Ntheta; ++j) {
      malab::require(static_cast<bool>(std::getline(in, line)),
                     malab::ErrorCode::BadSpec, "init file too short");
      std::istringstream row(line);
      double r, th, u;
      char c;
      row >> r >> c >> th >> c >> u;
      malab::require(!row.fail(), malab::ErrorCode::BadSpec,
                     "bad init file row");
      f.at(i, j) = u;
    }
  return f;
}

void cmd_solve_2d(Session& s, const Solve2dArgs& a) {
  auto spec = s.resolve("paper-4.2");
  if (!s.preset.empty() || s.spec_file.empty()) {
    // Default preset carries from-dk Robin data; let --dk retune it.
    auto sol = malab::ClosedFormSolution::radial2d(
        1.0, spec.domain.r_inner(), spec.domain.r_outer(), a.dk);
    spec.phi = malab::constant_field(sol.robin_phi(spec.gamma0));
  }
  malab::GridField init =
      a.init == "file"
          ? read_grid_csv(spec.domain, a.nr, a.ntheta, a.init_file)
          : malab::quadratic_init(spec, a.nr, a.ntheta, 1.0);
  auto res = malab::newton_solve(spec, init, a.tol, a.max_iter);
  {
    std::string name = "solve2d_u.csv";
    malab::write_grid_csv(res.field, s.path(name));
    s.outputs.push_back(name);
  }
  ordered_json j;
  j["iterations"] = res.report.iterations;
  j["final_residual_sup"] = res.report.final_residual_sup;
  j["convexity_min_eig"] = res.report.convexity_min_eig;
  j["residual_history"] = res.report.residual_history;
  j["gradient_map_mass"] = malab::gradient_map_mass(res.field, spec.dim());
  write_json(s, "solve2d_report.json", j);
  std::cout << j.dump(2) << "\n";
  s.finish();
}

// ------------------------------------------------------------------ flow --

struct FlowArgs {
  double T = 1.0;
  double dt = 1.0;  // clamped by the stability cap each step
  double theta = 1.0;
  double phi0 = 4.0;
  double phit = 1.0;
  double gamma0 = 2.0;
  int nodes = 201;
  double dk = 1.0;
  int stride = 0;  // 0: choose so the CSV stays near 2000 rows
};

void cmd_flow(Session& s, const FlowArgs& a) {
  malab::ProblemSpec spec = s.resolve("paper-7-flow");
  if (s.spec_file.empty()) {
    // Flag overrides on top of the preset.
    spec.gamma0 = a.gamma0;
    spec.phi = malab::constant_field(a.phi0);
    malab::FlowData fd;
    double th = a.theta, pr = a.phit;
    fd.theta = [th](double t) { return -th * t; };
    fd.theta_dot = [th](double) { return -th; };
    fd.phi_t = [pr, a2 = a.phi0](const malab::Vec&, double t) {
      return a2 + pr * t;
    };
    fd.phi_t_rate = [pr](const malab::Vec&, double) { return pr; };
    fd.horizon = a.T;
    spec.flow = fd;
  }

  auto sol = malab::ClosedFormSolution::radial2d(
      1.0, spec.domain.r_inner(), spec.domain.r_outer(), a.dk);
  std::vector<double> r(a.nodes), u0(a.nodes);
  for (int i = 0; i < a.nodes; ++i) {
    r[i] = spec.domain.r_inner() + (spec.domain.r_outer() - spec.domain.r_inner()) *
                                       i / double(a.nodes - 1);
    u0[i] = sol.u_of_r(r[i]);
  }
  auto run = malab::flow_run(spec, r, u0, a.T, a.dt);

  std::size_t m = run.series.t.size();
  int stride = a.stride > 0 ? a.stride
                            : std::max<int>(1, static_cast<int>(m / 2000));
  {
    auto f = s.open("flow_series.csv");
    f << "t,sup_u,sup_ut,inner_trace,outer_trace\n";
    for (std::size_t i = 0; i < m; i += stride)
      f << malab::fmt17(run.series.t[i]) << ','
        << malab::fmt17(run.series.sup_u[i]) << ','
        << malab::fmt17(run.series.sup_ut[i]) << ','
        << malab::fmt17(run.series.inner_trace[i]) << ','
        << malab::fmt17(run.series.outer_trace[i]) << '\n';
  }
  ordered_json j;
  j["steps"] = m - 1;
  j["final_t"] = run.final_state.t;
  j["max_sup_ut"] = run.max_sup_ut;
  j["min_min_ut"] = run.min_min_ut;
  j["sup_u_final"] = run.final_state.sup_abs_u;
  j["max_igcf_residual"] = run.max_igcf_residual;
  write_json(s, "flow_summary.json", j);
  std::cout << j.dump(2) << "\n";
  s.finish();
}

// --------------------------------------------------------------- barrier --

struct BarrierArgs {
  double dk = 0.5;
  std::string M = "auto";
  std::string gauge = "reciprocal";
  double N = 1.2;
  bool weighted = false;
  int nr = 128, ntheta = 128;
  int grid = 96;
};

void cmd_barrier(Session& s, const BarrierArgs& a) {
  auto spec = s.resolve("paper-4.2");
  auto sol = malab::ClosedFormSolution::radial2d(
      1.0, spec.domain.r_inner(), spec.domain.r_outer(), a.dk);
  spec.phi = malab::constant_field(sol.robin_phi(spec.gamma0));

  malab::BarrierSpec b;
  b.xi = malab::Vec(2);
  b.xi << 1.0, 0.0;
  b.weighted = a.weighted;
  b.N = a.N;
  if (a.gauge == "power") b.gauge = malab::BarrierSpec::Gauge::PowerLaw;
  double Mval;
  if (a.M == "auto") {
    double K_best = 0.0;
    double C0 = malab::c0_bound_auto(spec, &K_best);
    double C1 = malab::c1_bound(spec, malab::default_defining_function(spec.domain), C0);
    malab::PsiNorms pn;
    auto norms = malab::sample_barrier_norms(spec, b.xi, C1, pn, a.grid);
    Mval = malab::m_bound(norms, pn, C1, spec.dim()) + 1.0;
  } else {
    Mval = std::stod(a.M);
  }
  b.M = Mval;
  b.M_tilde = Mval;

  auto w = malab::barrier_field(sol, spec, b, a.nr, a.ntheta);
  {
    std::string name = "barrier_w.csv";
    malab::write_grid_csv(w, s.path(name));
    s.outputs.push_back(name);
  }
  int bi = 0, bj = 0;
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < w.nr(); ++i)
    for (int jx = 0; jx < w.ntheta(); ++jx)
      if (w.at(i, jx) > best) {
        best = w.at(i, jx);
        bi = i;
        bj = jx;
      }
  ordered_json j;
  j["M"] = Mval;
  j["max_w"] = best;
  j["argmax_i"] = bi;
  j["argmax_j"] = bj;
  j["argmax_r"] = w.r_of(bi);
  j["on_boundary_cell"] = (bi <= 1 || bi >= w.nr() - 2);
  write_json(s, "barrier_summary.json", j);
  std::cout << j.dump(2) << "\n";
  s.finish();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for Monge-Ampere problems on annuli"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  Session session;
  for (int i = 0; i < argc; ++i) session.argv.push_back(argv[i]);
  if (const char* env = std::getenv("MALAB_OUT_DIR")) session.out_dir = env;
  app.add_option("--out-dir", session.out_dir, "output directory");

  OracleArgs oa;
  auto* oracle = app.add_subcommand("oracle", "dump closed-form solution samples");
  oracle->add_option("--family", oa.family,
                     "radial2d | radial-nd | skewed-quadratic | gradient-blowup");
  oracle->add_option("--psi", oa.psi, "constant psi value");
  oracle->add_option("--dk", oa.dk, "inner slope")->each([&oa](const std::string&) {
    oa.dk_given = true;
  });
  oracle->add_option("--n", oa.n, "dimension for radial-nd");
  oracle->add_option("--r-inner", oa.r_inner, "inner radius");
  oracle->add_option("--r-outer", oa.r_outer, "outer radius");
  oracle->add_option("--gamma0", oa.gamma0, "Robin coefficient");
  oracle->add_option("--samples", oa.samples, "radial sample count");
  oracle->add_option("--sweep", oa.sweep, "slopes for the blow-up table");
  add_spec_flags(oracle, session);
  oracle->callback([&] { cmd_oracle(session, oa); });

  CheckArgs ca;
  auto* check = app.add_subcommand("check", "evaluate a solvability condition");
  check->add_option("condition", ca.condition,
                    "curvature | curvature-du | structure | structure-gradient "
                    "| subsolution | gauss")
      ->required();
  add_spec_flags(check, session);
  check->add_option("--width", ca.width, "annulus width for structure");
  check->add_option("--M", ca.M, "curvature constant M");
  check->add_option("--M-tilde", ca.M_tilde, "gradient-variant constant");
  check->add_option("--N", ca.N, "gradient-variant exponent parameter");
  check->add_option("--C-tilde", ca.C_tilde, "gradient-variant curvature term");
  check->add_option("--dk", ca.dk, "closed-form slope for trace data");
  check->add_option("--dk-sub", ca.dk_sub, "subsolution slope");
  check->add_option("--Z", ca.Z, "constant Z bound");
  check->add_option("--beta", ca.beta, "decay exponent");
  check->add_option("--band", ca.band, "outer strip width");
  check->add_option("--z-min", ca.z_min, "lowest z sample");
  check->add_option("--tau-floor", ca.tau_floor, "subsolution margin floor");
  check->callback([&] { cmd_check(session, ca); });

  ConstantsArgs na;
  auto* constants = app.add_subcommand("constants", "compute a-priori constants");
  constants->add_option("--formula", na.formula, "C0 | C1 | C3 | M | flow | all");
  constants->add_option("--K", na.K, "barrier parameter or 'auto'");
  constants->add_option("--dk", na.dk, "closed-form slope for flow data");
  constants->add_option("--grid", na.grid, "norm sampling grid");
  add_spec_flags(constants, session);
  constants->callback([&] { cmd_constants(session, na); });

  SolveRadialArgs ra;
  auto* radial = app.add_subcommand("solve-radial", "shooting solver");
  radial->add_option("--n", ra.n, "dimension");
  radial->add_option("--psi", ra.psi, "constant psi value");
  radial->add_option("--gamma0", ra.gamma0, "Robin coefficient");
  radial->add_option("--r-inner", ra.r_inner, "inner radius");
  radial->add_option("--r-outer", ra.r_outer, "outer radius");
  radial->add_option("--phi", ra.phi, "Robin data value")
      ->each([&ra](const std::string&) { ra.phi_given = true; });
  radial->add_option("--phi-from-dk", ra.phi_from_dk, "derive phi from a slope")
      ->each([&ra](const std::string&) { ra.dk_given = true; });
  radial->add_option("--d-bracket", ra.d_bracket, "shooting bracket")
      ->expected(2);
  radial->add_option("--nodes", ra.nodes, "grid nodes");
  radial->add_option("--tol", ra.tol, "Neumann residual tolerance");
  radial->callback([&] { cmd_solve_radial(session, ra); });

  Solve2dArgs ta;
  auto* solve2d = app.add_subcommand("solve-2d", "polar Newton solver");
  solve2d->add_option("--nr", ta.nr, "radial nodes");
  solve2d->add_option("--ntheta", ta.ntheta, "angular nodes");
  solve2d->add_option("--tol", ta.tol, "residual tolerance");
  solve2d->add_option("--max-iter", ta.max_iter, "Newton iteration cap");
  solve2d->add_option("--init", ta.init, "quadratic | file");
  solve2d->add_option("--init-file", ta.init_file, "CSV initial iterate");
  solve2d->add_option("--dk", ta.dk, "benchmark slope for the Robin data");
  add_spec_flags(solve2d, session);
  solve2d->callback([&] { cmd_solve_2d(session, ta); });

  FlowArgs fa;
  auto* flow = app.add_subcommand("flow", "explicit parabolic flow run");
  flow->add_option("--T", fa.T, "final time");
  flow->add_option("--dt", fa.dt, "requested step (stability-clamped)");
  flow->add_option("--theta", fa.theta, "outer trace decay rate");
  flow->add_option("--phi0", fa.phi0, "inner data at t=0");
  flow->add_option("--phit", fa.phit, "inner data growth rate");
  flow->add_option("--gamma0", fa.gamma0, "Robin coefficient");
  flow->add_option("--nodes", fa.nodes, "radial nodes");
  flow->add_option("--dk", fa.dk, "slope of the initial elliptic solution");
  flow->add_option("--stride", fa.stride, "CSV row stride (0 = auto)");
  add_spec_flags(flow, session);
  flow->callback([&] { cmd_flow(session, fa); });

  BarrierArgs ba;
  auto* barrier = app.add_subcommand("barrier", "dump a barrier field");
  barrier->add_option("--dk", ba.dk, "closed-form slope");
  barrier->add_option("--M", ba.M, "gauge constant or 'auto'");
  barrier->add_option("--gauge", ba.gauge, "reciprocal | power");
  barrier->add_option("--N", ba.N, "power-gauge parameter");
  barrier->add_flag("--weighted", ba.weighted, "multiply by e^{N|Du|^2}");
  barrier->add_option("--nr", ba.nr, "radial nodes");
  barrier->add_option("--ntheta", ba.ntheta, "angular nodes");
  barrier->add_option("--grid", ba.grid, "norm sampling grid");
  add_spec_flags(barrier, session);
  barrier->callback([&] { cmd_barrier(session, ba); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const malab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return malab::is_solver_failure(e.code()) ? 3 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
