#pragma once

#include <json.hpp>
#include <string>

#include "horocm/apriori.hpp"
#include "horocm/assumptions.hpp"
#include "horocm/sphere_grid.hpp"

// File formats.
//
// Binary field container (little-endian):
//   magic "HSPH" | u32 version = 1 | u32 n | u32 resolution | u64 node_count
//   f64 coords[node_count][n+1] | f64 weights[node_count] | f64 values[node_count]
//
// CSV exports carry one row per node. JSON reports are emitted with
// nlohmann::json's shortest-round-trip number formatting, so identical inputs
// produce byte-identical files.

namespace horocm::solver {
struct SolveReport;
}

namespace horocm::io {

struct FieldFile {
  int n = 0;
  int resolution = 0;
  Eigen::MatrixXd coords;
  Eigen::VectorXd weights;
  Eigen::VectorXd values;
};

void write_field(const std::string& path, const SphereGrid& grid,
                 const Eigen::VectorXd& values);
FieldFile read_field(const std::string& path);

// node index, ambient coordinates, value
void write_field_csv(const std::string& path, const SphereGrid& grid,
                     const Eigen::VectorXd& values);

// Triangulated mesh of the structured chart (n = 2 only), with polar cap
// fans; vertices are Poincare-ball coordinates.
void write_obj(const std::string& path, const SphereGrid& grid,
               const Eigen::MatrixXd& ball_coords);

nlohmann::json to_json(const assumptions::AssumptionReport& rep);
nlohmann::json to_json(const apriori::BoundsCertificate& cert);
nlohmann::json to_json(const solver::SolveReport& rep);

void write_text(const std::string& path, const std::string& text);

}  // namespace horocm::io
