// Command-line front end: problem setup, solving, verification and export.
//
// Exit codes: 0 success / all checks pass, 1 input or configuration error,
// 2 a verification check failed, 3 solver failure.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <random>

#include "horocm/apriori.hpp"
#include "horocm/assumptions.hpp"
#include "horocm/conformal.hpp"
#include "horocm/families.hpp"
#include "horocm/io.hpp"
#include "horocm/solver.hpp"
#include "horocm/symfunc.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace horocm;

namespace {

struct RunConfig {
  int n = 2, k = 1;
  double p = 0.0;
  int resolution = 32;
  std::string f_spec = "constant:2.0";
  std::string out = "out";
  std::string phi_path;
  std::string format = "both";
  unsigned seed = 0;
  solver::HomotopyConfig homotopy;
};

void apply_json_config(RunConfig& cfg, const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open config " + path);
  json j = json::parse(is);
  cfg.n = j.value("n", cfg.n);
  cfg.k = j.value("k", cfg.k);
  cfg.p = j.value("p", cfg.p);
  cfg.resolution = j.value("resolution", cfg.resolution);
  cfg.f_spec = j.value("f", cfg.f_spec);
  cfg.out = j.value("out", cfg.out);
  cfg.phi_path = j.value("phi", cfg.phi_path);
  if (j.contains("homotopy")) {
    const json& h = j["homotopy"];
    auto& hc = cfg.homotopy;
    hc.t_init = h.value("t_init", hc.t_init);
    hc.t_min = h.value("t_min", hc.t_min);
    hc.t_max = h.value("t_max", hc.t_max);
    hc.newton_tol = h.value("newton_tol", hc.newton_tol);
    hc.newton_max_iter = h.value("newton_max_iter", hc.newton_max_iter);
    hc.delta_A = h.value("delta_A", hc.delta_A);
    hc.delta_phi = h.value("delta_phi", hc.delta_phi);
  }
}

std::vector<double> parse_params(const std::string& s) {
  std::vector<double> out;
  size_t pos = 0;
  while (pos < s.size()) {
    size_t next = s.find(',', pos);
    if (next == std::string::npos) next = s.size();
    out.push_back(std::stod(s.substr(pos, next - pos)));
    pos = next + 1;
  }
  return out;
}

// f specs: constant:<gamma> | admissible:<base>,<amp>,<C> |
// manufactured:<c>,<eps> | file:<path>
ScalarField build_f(const SphereGrid& grid, const RunConfig& cfg) {
  const std::string& spec = cfg.f_spec;
  const size_t colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string rest =
      colon == std::string::npos ? std::string() : spec.substr(colon + 1);
  if (kind == "constant") {
    return grid.make_field(std::stod(rest));
  }
  if (kind == "admissible") {
    const auto q = parse_params(rest);
    if (q.size() != 3)
      throw std::runtime_error("admissible spec needs base,amp,C");
    return families::admissible(grid, q[0], q[1], cfg.k, q[2]);
  }
  if (kind == "manufactured") {
    const auto q = parse_params(rest);
    if (q.size() != 2) throw std::runtime_error("manufactured spec needs c,eps");
    return families::manufactured_zonal(grid, q[0], q[1], cfg.k, cfg.p, false).f;
  }
  if (kind == "file") {
    io::FieldFile ff = io::read_field(rest);
    if (ff.n != grid.dim() || ff.resolution != grid.resolution())
      throw std::runtime_error("f file grid metadata mismatch");
    return ScalarField{&grid, ff.values};
  }
  throw std::runtime_error("unknown f spec kind '" + kind + "'");
}

int cmd_check_f(const RunConfig& cfg) {
  SphereGrid grid(cfg.n, cfg.resolution);
  ScalarField f = build_f(grid, cfg);
  assumptions::AssumptionReport rep =
      assumptions::check_assumption(f, cfg.p, cfg.k);
  fs::create_directories(cfg.out);
  io::write_text(cfg.out + "/assumption.json", io::to_json(rep).dump(2) + "\n");
  std::cout << io::to_json(rep).dump(2) << std::endl;
  return rep.pass ? 0 : 2;
}

int cmd_solve(const RunConfig& cfg) {
  SphereGrid grid(cfg.n, cfg.resolution);
  ScalarField f = build_f(grid, cfg);
  solver::ProblemSpec spec = solver::make_problem(grid, cfg.k, cfg.p, f);
  solver::SolveReport rep = solver::continuation_solve(spec, cfg.homotopy);
  fs::create_directories(cfg.out);
  io::write_text(cfg.out + "/report.json", io::to_json(rep).dump(2) + "\n");
  io::write_text(cfg.out + "/certificate.json",
                 io::to_json(rep.certificate).dump(2) + "\n");
  if (rep.converged) {
    io::write_field(cfg.out + "/phi.bin", grid, rep.phi.phi.v);
  } else if (rep.phi.phi.grid != nullptr) {
    io::write_field(cfg.out + "/last_phi.bin", grid, rep.phi.phi.v);
  }
  std::cout << io::to_json(rep).dump(2) << std::endl;
  return (rep.converged && rep.margin > 0.0) ? 0 : 3;
}

int cmd_verify(const RunConfig& cfg) {
  if (cfg.phi_path.empty()) {
    std::cerr << "verify: --phi <path> required" << std::endl;
    return 1;
  }
  io::FieldFile ff = io::read_field(cfg.phi_path);
  if (ff.n != cfg.n || ff.resolution != cfg.resolution) {
    std::cerr << "verify: grid metadata mismatch (file has n=" << ff.n
              << " resolution=" << ff.resolution << ")" << std::endl;
    return 1;
  }
  SphereGrid grid(ff.n, ff.resolution);
  if ((grid.nodes() - ff.coords).cwiseAbs().maxCoeff() > 1e-12) {
    std::cerr << "verify: node coordinates do not match the declared grid"
              << std::endl;
    return 1;
  }
  SupportFunction phi = make_support(ScalarField{&grid, ff.values});
  ScalarField f = build_f(grid, cfg);
  apriori::BoundsCertificate cert =
      apriori::certify(phi, f, cfg.p, cfg.k, 1e-7 * (1.0 + f.v.maxCoeff()));

  // seeded dual-route spot check of the sigma_k evaluation at random nodes
  std::mt19937 rng(cfg.seed);
  std::uniform_int_distribution<Eigen::Index> pick(0, grid.node_count() - 1);
  const TensorField A = tensor_A(phi);
  double route_gap = 0.0;
  for (int s = 0; s < 256; ++s) {
    const Eigen::Index i = pick(rng);
    route_gap = std::max(
        route_gap, std::abs(sigma_k_of_tensor(A, i, cfg.k) -
                            symfunc::sigma_k_matrix_eig(A.node(i), cfg.k)));
  }
  const bool routes_ok = route_gap <= 1e-10 * (1.0 + f.v.maxCoeff());

  json out = io::to_json(cert);
  out["sigma_route_gap"] = route_gap;
  out["sigma_routes_pass"] = routes_ok;
  fs::create_directories(cfg.out);
  io::write_text(cfg.out + "/verification.json", out.dump(2) + "\n");
  std::cout << out.dump(2) << std::endl;
  return (cert.pass && routes_ok) ? 0 : 2;
}

int cmd_export(const RunConfig& cfg) {
  if (cfg.phi_path.empty()) {
    std::cerr << "export: --phi <path> required" << std::endl;
    return 1;
  }
  if (cfg.format != "obj" && cfg.format != "csv" && cfg.format != "both") {
    std::cerr << "export: unsupported format '" << cfg.format << "'"
              << std::endl;
    return 1;
  }
  io::FieldFile ff = io::read_field(cfg.phi_path);
  SphereGrid grid(ff.n, ff.resolution);
  SupportFunction phi = make_support(ScalarField{&grid, ff.values});
  fs::create_directories(cfg.out);

  if (cfg.format != "csv") {
    if (grid.dim() != 2) {
      std::cerr << "export: obj output supports n = 2 only" << std::endl;
      return 1;
    }
    io::write_obj(cfg.out + "/solution.obj",
                  grid, to_poincare_ball(embed(phi)));
  }
  if (cfg.format != "obj") {
    ScalarField f = build_f(grid, cfg);
    const Eigen::MatrixXd radii = curvature_radii(phi);
    const ScalarField res = equation_residual(phi, f, cfg.p, cfg.k);
    std::ofstream os(cfg.out + "/solution.csv");
    os << "index,phi";
    for (int a = 0; a < grid.dim(); ++a) os << ",R" << a + 1;
    os << ",residual\n";
    char buf[32];
    for (Eigen::Index i = 0; i < grid.node_count(); ++i) {
      os << i;
      std::snprintf(buf, sizeof(buf), "%.17g", phi.phi.v[i]);
      os << ',' << buf;
      for (int a = 0; a < grid.dim(); ++a) {
        std::snprintf(buf, sizeof(buf), "%.17g", radii(i, a));
        os << ',' << buf;
      }
      std::snprintf(buf, sizeof(buf), "%.17g", res.v[i]);
      os << ',' << buf << '\n';
    }
    // conformal dictionary per node: radii, Schouten eigenvalues, identity gap
    const Eigen::MatrixXd lam = conformal::radii_to_schouten(radii);
    std::ofstream cs(cfg.out + "/conformal.csv");
    cs << "index";
    for (int a = 0; a < grid.dim(); ++a) cs << ",R" << a + 1;
    for (int a = 0; a < grid.dim(); ++a) cs << ",lambda" << a + 1;
    cs << ",identity_gap\n";
    for (Eigen::Index i = 0; i < grid.node_count(); ++i) {
      cs << i;
      for (int a = 0; a < grid.dim(); ++a) {
        std::snprintf(buf, sizeof(buf), "%.17g", radii(i, a));
        cs << ',' << buf;
      }
      for (int a = 0; a < grid.dim(); ++a) {
        std::snprintf(buf, sizeof(buf), "%.17g", lam(i, a));
        cs << ',' << buf;
      }
      const auto chk =
          conformal::check_combination_identity(radii.row(i), cfg.k);
      std::snprintf(buf, sizeof(buf), "%.17g", chk.gap);
      cs << ',' << buf << '\n';
    }
  }
  return 0;
}

int cmd_constant(double gamma, double p, int k, int n) {
  const double c = solver::constant_solution(gamma, p, k, n);
  const apriori::C0Bounds b = apriori::c0_bounds(gamma, gamma, p, k, n);
  json out = {{"c", c}, {"c0_lower", b.lower}, {"c0_upper", b.upper}};
  std::cout << out.dump(2) << std::endl;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"horospherical Christoffel-Minkowski solver and verifier"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string config_path;
  double gamma = 1.0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file");
    sub->add_option("--n", cfg.n, "sphere dimension (2 or 3)");
    sub->add_option("--k", cfg.k, "equation order k");
    sub->add_option("--p", cfg.p, "exponent p >= 0");
    sub->add_option("--resolution", cfg.resolution, "nodes per angle");
    sub->add_option("--f", cfg.f_spec,
                    "data spec: constant:g | admissible:base,amp,C | "
                    "manufactured:c,eps | file:path");
    sub->add_option("--out", cfg.out, "output directory");
    sub->add_option("--seed", cfg.seed, "seed for randomized verification");
  };

  CLI::App* check = app.add_subcommand("check-f", "verify admissibility of f");
  add_common(check);
  CLI::App* solve = app.add_subcommand("solve", "run the continuation solver");
  add_common(solve);
  solve->add_option("--newton-tol", cfg.homotopy.newton_tol, "Newton tolerance");
  CLI::App* verify = app.add_subcommand("verify", "re-check a stored solution");
  add_common(verify);
  verify->add_option("--phi", cfg.phi_path, "solution field file");
  CLI::App* exp = app.add_subcommand("export", "mesh/CSV export of a solution");
  add_common(exp);
  exp->add_option("--phi", cfg.phi_path, "solution field file");
  exp->add_option("--format", cfg.format, "obj | csv | both");
  CLI::App* konst =
      app.add_subcommand("constant", "print the constant solution and bounds");
  konst->add_option("--gamma", gamma, "constant datum")->required();
  konst->add_option("--p", cfg.p, "exponent p");
  konst->add_option("--k", cfg.k, "equation order k");
  konst->add_option("--n", cfg.n, "sphere dimension");

  CLI11_PARSE(app, argc, argv);

  try {
    if (!config_path.empty()) {
      // config supplies defaults; explicitly passed flags win
      const RunConfig cli = cfg;
      apply_json_config(cfg, config_path);
      CLI::App* active = app.get_subcommands().front();
      auto keep = [&](const char* flag) {
        return active->get_option_no_throw(flag) != nullptr &&
               active->count(flag) > 0;
      };
      if (keep("--n")) cfg.n = cli.n;
      if (keep("--k")) cfg.k = cli.k;
      if (keep("--p")) cfg.p = cli.p;
      if (keep("--resolution")) cfg.resolution = cli.resolution;
      if (keep("--f")) cfg.f_spec = cli.f_spec;
      if (keep("--out")) cfg.out = cli.out;
      if (keep("--phi")) cfg.phi_path = cli.phi_path;
      if (keep("--newton-tol")) cfg.homotopy.newton_tol = cli.homotopy.newton_tol;
    }
    if (check->parsed()) return cmd_check_f(cfg);
    if (solve->parsed()) return cmd_solve(cfg);
    if (verify->parsed()) return cmd_verify(cfg);
    if (exp->parsed()) return cmd_export(cfg);
    if (konst->parsed()) return cmd_constant(gamma, cfg.p, cfg.k, cfg.n);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
  return 1;
}
