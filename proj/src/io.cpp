#include "horocm/io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "horocm/solver.hpp"

namespace horocm::io {

namespace {

constexpr char kMagic[4] = {'H', 'S', 'P', 'H'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ofstream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw std::runtime_error("field file: truncated");
  return v;
}

}  // namespace

void write_field(const std::string& path, const SphereGrid& grid,
                 const Eigen::VectorXd& values) {
  if (values.size() != grid.node_count())
    throw std::invalid_argument("write_field: value count mismatch");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("write_field: cannot open " + path);
  os.write(kMagic, 4);
  put<std::uint32_t>(os, kVersion);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(grid.dim()));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(grid.resolution()));
  put<std::uint64_t>(os, static_cast<std::uint64_t>(grid.node_count()));
  const Eigen::Index N = grid.node_count();
  for (Eigen::Index i = 0; i < N; ++i)
    for (int c = 0; c <= grid.dim(); ++c) put<double>(os, grid.nodes()(i, c));
  for (Eigen::Index i = 0; i < N; ++i) put<double>(os, grid.weights()[i]);
  for (Eigen::Index i = 0; i < N; ++i) put<double>(os, values[i]);
  if (!os) throw std::runtime_error("write_field: write failure on " + path);
}

FieldFile read_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("read_field: cannot open " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("read_field: bad magic in " + path);
  const auto version = get<std::uint32_t>(is);
  if (version != kVersion)
    throw std::runtime_error("read_field: unsupported version");
  FieldFile out;
  out.n = static_cast<int>(get<std::uint32_t>(is));
  out.resolution = static_cast<int>(get<std::uint32_t>(is));
  const auto N = static_cast<Eigen::Index>(get<std::uint64_t>(is));
  out.coords.resize(N, out.n + 1);
  out.weights.resize(N);
  out.values.resize(N);
  for (Eigen::Index i = 0; i < N; ++i)
    for (int c = 0; c <= out.n; ++c) out.coords(i, c) = get<double>(is);
  for (Eigen::Index i = 0; i < N; ++i) out.weights[i] = get<double>(is);
  for (Eigen::Index i = 0; i < N; ++i) out.values[i] = get<double>(is);
  return out;
}

void write_field_csv(const std::string& path, const SphereGrid& grid,
                     const Eigen::VectorXd& values) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_field_csv: cannot open " + path);
  os << "index";
  for (int c = 0; c <= grid.dim(); ++c) os << ",x" << c;
  os << ",value\n";
  char buf[32];
  for (Eigen::Index i = 0; i < grid.node_count(); ++i) {
    os << i;
    for (int c = 0; c <= grid.dim(); ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g", grid.nodes()(i, c));
      os << ',' << buf;
    }
    std::snprintf(buf, sizeof(buf), "%.17g", values[i]);
    os << ',' << buf << '\n';
  }
}

void write_obj(const std::string& path, const SphereGrid& grid,
               const Eigen::MatrixXd& ball_coords) {
  if (grid.dim() != 2)
    throw std::invalid_argument("write_obj: mesh export supports n = 2 only");
  if (ball_coords.rows() != grid.node_count() || ball_coords.cols() != 3)
    throw std::invalid_argument("write_obj: coordinate shape mismatch");
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_obj: cannot open " + path);
  const int nt = grid.resolution(), np = 2 * grid.resolution();
  char buf[128];
  for (Eigen::Index i = 0; i < grid.node_count(); ++i) {
    std::snprintf(buf, sizeof(buf), "v %.17g %.17g %.17g\n", ball_coords(i, 0),
                  ball_coords(i, 1), ball_coords(i, 2));
    os << buf;
  }
  // two cap vertices at the ring centroids
  Eigen::RowVector3d north = Eigen::RowVector3d::Zero(),
                     south = Eigen::RowVector3d::Zero();
  for (int j = 0; j < np; ++j) {
    north += ball_coords.row(j);
    south += ball_coords.row(static_cast<Eigen::Index>(nt - 1) * np + j);
  }
  north /= np;
  south /= np;
  std::snprintf(buf, sizeof(buf), "v %.17g %.17g %.17g\n", north[0], north[1],
                north[2]);
  os << buf;
  std::snprintf(buf, sizeof(buf), "v %.17g %.17g %.17g\n", south[0], south[1],
                south[2]);
  os << buf;

  auto vid = [np](int i, int j) { return i * np + (j % np) + 1; };  // 1-based
  for (int i = 0; i + 1 < nt; ++i)
    for (int j = 0; j < np; ++j) {
      os << "f " << vid(i, j) << ' ' << vid(i + 1, j) << ' ' << vid(i + 1, j + 1)
         << '\n';
      os << "f " << vid(i, j) << ' ' << vid(i + 1, j + 1) << ' ' << vid(i, j + 1)
         << '\n';
    }
  const int north_id = static_cast<int>(grid.node_count()) + 1;
  const int south_id = north_id + 1;
  for (int j = 0; j < np; ++j) {
    os << "f " << north_id << ' ' << vid(0, j) << ' ' << vid(0, j + 1) << '\n';
    os << "f " << south_id << ' ' << vid(nt - 1, j + 1) << ' ' << vid(nt - 1, j)
       << '\n';
  }
}

nlohmann::json to_json(const assumptions::AssumptionReport& rep) {
  nlohmann::json aux = nlohmann::json::array();
  for (const auto& a : rep.aux)
    aux.push_back({{"name", a.name},
                   {"value", a.value},
                   {"bound", a.bound},
                   {"pass", a.pass}});
  return {{"case", rep.case_id},
          {"margin", rep.margin},
          {"tol", rep.tol},
          {"aux", aux},
          {"pass", rep.pass}};
}

nlohmann::json to_json(const apriori::BoundsCertificate& cert) {
  return {{"c0_lower", cert.c0_lower},
          {"c0_upper", cert.c0_upper},
          {"phi_min", cert.phi_min},
          {"phi_max", cert.phi_max},
          {"gradient_bound_violation", cert.gradient_bound_violation},
          {"trace_H_max", cert.trace_H_max},
          {"residual_sup", cert.residual_sup},
          {"hconvexity_margin", cert.hconvexity_margin},
          {"tol_bounds", cert.tol_bounds},
          {"tol_gradient", cert.tol_gradient},
          {"tol_residual", cert.tol_residual},
          {"bounds_pass", cert.bounds_pass},
          {"gradient_pass", cert.gradient_pass},
          {"residual_pass", cert.residual_pass},
          {"margin_pass", cert.margin_pass},
          {"pass", cert.pass}};
}

nlohmann::json to_json(const solver::SolveReport& rep) {
  return {{"converged", rep.converged},
          {"status", rep.status},
          {"residual_sup", rep.residual_sup},
          {"hconvexity_margin", rep.margin},
          {"t_schedule", rep.t_schedule},
          {"residual_history", rep.residual_history},
          {"margin_history", rep.margin_history},
          {"assumption_pass", rep.assumption_pass},
          {"assumption_case", rep.assumption_case},
          {"certificate", to_json(rep.certificate)}};
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_text: cannot open " + path);
  os << text;
}

}  // namespace horocm::io
