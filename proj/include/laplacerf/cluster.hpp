#pragma once

// Large-scale driver: partition many closed curves into clusters with
// buffer regions, optimize poles and testing points per cluster, then run
// one global least-squares solve with the merged pole set.

#include <cstdint>
#include <vector>

#include "laplacerf/solver.hpp"
#include "laplacerf/types.hpp"

namespace laprf::cluster {

struct ClusterPlan {
  int k = 0;
  std::vector<int> assignment;            // cluster id per curve
  std::vector<cplx> centroids;            // per cluster
  std::vector<std::vector<int>> members;  // curve ids per cluster
  std::vector<std::vector<int>> buffers;  // buffer curve ids per cluster
  std::vector<double> buffer_radius;      // per curve
};

// Lloyd iterations with k-means++ style seeding; deterministic for a seed.
std::vector<int> kmeans(const std::vector<cplx>& points, int k, std::uint64_t seed,
                        int max_iter = 100);

ClusterPlan plan_with_buffers(const std::vector<cplx>& curve_centroids, int k, std::uint64_t seed);

struct LargeOptions {
  int k = 10;
  int poles_per_curve = 3;
  double local_tol = 1e-2;
  int local_max_iter = 100;
  std::uint64_t seed = 0;
  int threads = 0; // 0: hardware choice or LAPLACE_RF_THREADS
};

struct LargeReport {
  double global_delta_e = 0.0;
  std::vector<double> local_delta_e;
  int rows = 0, cols = 0;
  double wall_seconds = 0.0;
  ClusterPlan plan;
  std::vector<double> recovered_A; // exterior Neumann log strengths
};

struct LargeSolution {
  basis::PotentialModel model;
  LargeReport report;
};

// Exterior problems over many closed curves. The boundary must hold one
// contour per curve.
LargeSolution solve_large(solver::Kind kind, const geom::Boundary& b,
                          const solver::BoundaryData& data, const LargeOptions& opts);

void dump_plan_csv(const ClusterPlan& plan, const std::string& path);

} // namespace laprf::cluster
