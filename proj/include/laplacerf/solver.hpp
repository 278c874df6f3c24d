#pragma once

// Outer iteration for the three BVP types: build the testing rule for the
// current poles, solve the weighted least-squares residue problem, rebuild
// the boundary estimate of the complex potential, refit the poles, repeat.
// Keeps the best iterate seen; supports adaptive pole addition.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "laplacerf/basis.hpp"
#include "laplacerf/geometry.hpp"
#include "laplacerf/quadrature.hpp"
#include "laplacerf/types.hpp"

namespace laprf::solver {

enum class Kind { InteriorDirichlet, ExteriorDirichlet, ExteriorNeumann };

// Boundary data callback: parameter s, z on the boundary, unit outward
// normal (pointing away from the enclosed region) and the contour index.
// Dirichlet data is U, Neumann data is dU/dn with that normal.
using BoundaryData = std::function<double(double s, cplx z, cplx normal, int contour)>;

struct AdaptiveOptions {
  bool enabled = false;
  int window = 5;          // K of the stall detector
  double epsilon = 0.5e-2; // relative std-dev threshold
  int max_poles = 256;
};

struct ProblemSpec {
  Kind kind = Kind::InteriorDirichlet;
  geom::Boundary boundary;
  BoundaryData data;
  int n_poles = 8;
  double tol = 1e-12;
  int max_iter = 100;
  AdaptiveOptions adaptive;
  std::uint64_t seed = 0;

  // quadrature knobs
  int min_n_infinite = 4;
  int extra_n_infinite = 0;
  int prune_degree_budget = 64;
  bool prune = true;

  std::optional<std::vector<cplx>> log_centers_override;
  std::optional<std::vector<cplx>> initial_poles_override;

  // Observation hook, called once per iteration with the current model.
  std::function<void(const struct IterationStat&, const basis::PotentialModel&)> on_iteration;
};

struct IterationStat {
  int iteration = 0;
  double delta_e = 0.0;
  int n_out = 0, n_in = 0;
  int testing_points = 0;
  char basis = '?';
  bool accepted = false; // became the best model so far
};

struct SolveReport {
  std::vector<IterationStat> iterations;
  std::string stop_reason;
  double wall_seconds = 0.0;
  double delta_e = 0.0; // of the returned model
  int best_iteration = 0;
  bool delta_e_absolute = false; // ||f||_w was zero
  double neumann_compat_residual = 0.0;
};

struct Solution {
  basis::PotentialModel model;
  basis::PoleSet poles; // final pole set with classification
  SolveReport report;
};

Solution solve(const ProblemSpec& p);

// Side of z relative to the solution domain of the given problem kind.
geom::DomainSide classify_for_problem(Kind kind, const geom::Boundary& b, cplx z);

struct NeumannPreprocess {
  // A_j = -(1/2pi) * contour flux of f_j; the model's logarithm strengths
  // are -A_j with the outward-normal data convention used here.
  std::vector<double> A;
  double compat_residual = 0.0; // |sum_j flux_j| relative
  // F(s): cumulative integral of the log-corrected data along each contour,
  // stored as per-section Chebyshev antiderivatives in the local variable.
  std::vector<std::vector<cplx>> F_sections;
  std::vector<cplx> log_centers;
  double F_at(const geom::Boundary& b, int section, double t) const;
};

NeumannPreprocess neumann_preprocess(const geom::Boundary& b, const BoundaryData& data,
                                     std::span<const cplx> log_centers);

// Quadrature-weighted relative boundary error of the model against samples.
double delta_e(const basis::PotentialModel& m, const quad::Rule& rule,
               std::span<const double> f_samples, bool* absolute_flag = nullptr);

// Normalized maximum boundary error on a dense uniform-in-s sample.
double delta_e_max(const basis::PotentialModel& m, const geom::Boundary& b,
                   const BoundaryData& data, int n_dense = 20000);

struct FieldValues {
  std::vector<double> u, v;
  std::vector<bool> masked; // outside the solution domain
};

FieldValues eval_field(const basis::PotentialModel& m, Kind kind, const geom::Boundary& b,
                       std::span<const cplx> grid);

// Unit outward normal (away from the enclosed region) at parameter s.
cplx outward_normal(const geom::Boundary& b, double s);

// Interior points of the obstacles/domain used as logarithm centers.
std::vector<cplx> default_log_centers(const geom::Boundary& b);

} // namespace laprf::solver
