#pragma once

// Config-driven runs: geometry/data files, gallery lookup by name, and the
// CSV/JSON outputs written by the CLI.

#include <optional>
#include <string>

#include <json.hpp>

#include "laplacerf/basis.hpp"
#include "laplacerf/cluster.hpp"
#include "laplacerf/geometry.hpp"
#include "laplacerf/solver.hpp"

namespace laprf::io {

using json = nlohmann::json;

// Geometry file: {"contours": [ {"points": [[x,y],...], "smoothness": "cubic"}
// | {"sections": [{"num": [...], "den": [...], "interval": [a,b]}, ...]} ]}.
// Section coefficients are monomial in the local variable t in [-1,1]; entries
// are scalars or [re, im] pairs.
geom::Boundary read_geometry_file(const std::string& path);
geom::Boundary boundary_from_json(const json& j);

// Node table: CSV lines "s,value" on [0,1); piecewise-linear periodic in s.
solver::BoundaryData read_node_table(const std::string& path);

geom::Boundary gallery_boundary(const std::string& name, const json& params);
solver::BoundaryData gallery_data(const std::string& name, const json& params);

struct RunConfig {
  solver::Kind kind = solver::Kind::InteriorDirichlet;
  json geometry;         // {"gallery": name, "params": {...}} or {"file": path}
  json data;             // same shape
  int n_poles = 8;
  double tol = 1e-12;
  int max_iter = 100;
  solver::AdaptiveOptions adaptive;
  std::uint64_t seed = 0;
  std::string method = "rational"; // rational | nystrom | both
  int nystrom_points = 200;
  std::vector<int> comparison_n;   // pole counts for method=both ladders
  std::optional<cluster::LargeOptions> cluster_opts;

  std::string out_report;
  std::string out_poles;
  std::string out_comparison;
  struct FieldGrid {
    std::string path;
    double x0, x1, y0, y1;
    int nx = 0, ny = 0;
  };
  std::optional<FieldGrid> field;
};

RunConfig parse_config(const json& j);

void write_model_csv(const basis::PotentialModel& m, const std::string& path);
void write_field_csv(const solver::FieldValues& f, const RunConfig::FieldGrid& g,
                     const std::string& path);

// Full run per the config; returns the process exit code.
int run(const RunConfig& cfg);

} // namespace laprf::io
