#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>

#include "horocm/families.hpp"
#include "horocm/io.hpp"
#include "horocm/solver.hpp"

using namespace horocm;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("horocm_io_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("binary field container round trip") {
  TempDir tmp;
  SphereGrid g(2, 16);
  std::mt19937 rng(9);
  std::normal_distribution<double> gauss;
  Eigen::VectorXd vals(g.node_count());
  for (Eigen::Index i = 0; i < g.node_count(); ++i) vals[i] = gauss(rng);

  const std::string path = (tmp.path / "field.bin").string();
  io::write_field(path, g, vals);
  io::FieldFile ff = io::read_field(path);
  CHECK(ff.n == 2);
  CHECK(ff.resolution == 16);
  CHECK((ff.values - vals).cwiseAbs().maxCoeff() == 0.0);
  CHECK((ff.coords - g.nodes()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((ff.weights - g.weights()).cwiseAbs().maxCoeff() == 0.0);

  // corrupt magic -> error
  {
    std::ofstream os(path, std::ios::binary);
    os << "JUNKJUNKJUNK";
  }
  CHECK_THROWS(io::read_field(path));
  CHECK_THROWS(io::read_field((tmp.path / "missing.bin").string()));
}

TEST_CASE("csv export shape") {
  TempDir tmp;
  SphereGrid g(2, 16);
  const std::string path = (tmp.path / "field.csv").string();
  io::write_field_csv(path, g, g.weights());
  std::ifstream is(path);
  std::string line;
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == g.node_count() + 1);  // header + one row per node
}

TEST_CASE("obj export: vertices inside the ball, geodesic sphere radius") {
  TempDir tmp;
  SphereGrid g(2, 16);
  const double r = 0.9;
  SupportFunction sph = make_support(g.make_field(std::exp(r)));
  Eigen::MatrixXd ball = to_poincare_ball(embed(sph));
  const std::string path = (tmp.path / "mesh.obj").string();
  io::write_obj(path, g, ball);

  std::ifstream is(path);
  std::string tok;
  int nv = 0, nf = 0;
  double maxnorm = 0.0;
  while (is >> tok) {
    if (tok == "v") {
      double x, y, z;
      is >> x >> y >> z;
      maxnorm = std::max(maxnorm, std::sqrt(x * x + y * y + z * z));
      ++nv;
    } else if (tok == "f") {
      int a, b, c;
      is >> a >> b >> c;
      CHECK(a >= 1);
      CHECK(a <= g.node_count() + 2);
      ++nf;
    }
  }
  CHECK(nv == g.node_count() + 2);
  // closed surface built from quads + two cap fans
  const int nt = g.resolution(), np = 2 * g.resolution();
  CHECK(nf == 2 * (nt - 1) * np + 2 * np);
  CHECK(maxnorm < 1.0);
  CHECK(maxnorm == doctest::Approx(std::tanh(r / 2.0)).epsilon(1e-6));
}

TEST_CASE("json reports are deterministic") {
  SphereGrid g(2, 16);
  ScalarField f = families::admissible(g, 2.0, 0.3, 1, 8.0);
  solver::ProblemSpec spec = solver::make_problem(g, 1, 0.0, f);
  solver::HomotopyConfig cfg;
  solver::SolveReport rep1 = solver::continuation_solve(spec, cfg);
  solver::SolveReport rep2 = solver::continuation_solve(spec, cfg);
  CHECK(io::to_json(rep1).dump() == io::to_json(rep2).dump());

  assumptions::AssumptionReport ar = assumptions::check_assumption(f, 0.0, 1);
  CHECK(io::to_json(ar).dump() == io::to_json(ar).dump());
  CHECK(io::to_json(ar)["pass"].get<bool>());
}
