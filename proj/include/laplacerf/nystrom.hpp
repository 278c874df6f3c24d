#pragma once

// Trapezoidal Nystrom discretization of the double-layer equation on
// smooth closed curves; comparison baseline only. Interior Dirichlet on a
// single contour, plus an exterior two-conductor variant completed with
// one log source per conductor.

#include <span>
#include <vector>

#include "laplacerf/geometry.hpp"
#include "laplacerf/solver.hpp"
#include "laplacerf/types.hpp"

namespace laprf::nystrom {

struct NystromSolution {
  geom::Boundary boundary;
  std::vector<double> s;       // uniform nodes in [0,1)
  std::vector<double> h;       // trapezoid spacing per node
  std::vector<double> density; // mu at nodes
  std::vector<cplx> z, dz;
  std::vector<int> contour_of;
  std::vector<double> log_strengths; // exterior case, one per contour
  std::vector<cplx> log_centers;
  bool exterior = false;
};

// Interior Dirichlet on one smooth contour; n even nodes uniform in s.
NystromSolution interior_dirichlet(const geom::Boundary& b, const solver::BoundaryData& f, int n);

// Exterior Dirichlet on J smooth contours with log completion.
NystromSolution exterior_dirichlet(const geom::Boundary& b, const solver::BoundaryData& f, int n);

// Off-boundary potential; density upsampled trigonometrically per contour.
std::vector<double> offboundary_eval(const NystromSolution& sol, std::span<const cplx> points,
                                     int refine = 8);

double delta_e_max(const NystromSolution& sol, const geom::Boundary& b,
                   const solver::BoundaryData& f, int n_dense = 2000);

} // namespace laprf::nystrom
