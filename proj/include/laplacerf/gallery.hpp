#pragma once

// Built-in problem geometries and boundary data used by the experiments
// and the CLI.

#include <cstdint>
#include <string>
#include <vector>

#include "laplacerf/geometry.hpp"
#include "laplacerf/solver.hpp"
#include "laplacerf/types.hpp"

namespace laprf::gallery {

// Single Chebyshev-fitted section per closed analytic curve.
geom::Boundary ellipse(double rx, double ry);
// z(s) = [1/gamma + (1/gamma - 1) cos(2 pi nu s)] e^{2 pi i s}.
geom::Boundary trigpoly(double gamma, int nu);
// L-shaped hexagon with the reentrant corner at 0.5+0.5i; the origin is
// interior, so a unit monopole at 0 excites it.
geom::Boundary lshape();
// Circle as two exact degree-2 rational sections.
geom::Boundary circle(cplx center, double radius);
// Two radius-R circles on the imaginary axis separated by gap = (d/R)*R;
// contour 0 is the upper circle.
geom::Boundary two_circles(double d_over_R, double R = 1.0);

struct EllipseParams {
  cplx center;
  double a, b, angle;
};

struct Scene {
  geom::Boundary boundary;
  std::vector<EllipseParams> ellipses;
};

// Random non-overlapping ellipses, four Chebyshev sections each.
Scene random_ellipses(int n, std::uint64_t seed, double r0 = 1.0, double min_gap = 0.05);

// Boundary data.
solver::BoundaryData poles_data(int n0, double R);      // Re sum (k/n0)/(z'_k - z)
solver::BoundaryData monopole(cplx source = 0.0);       // log|z - source|
solver::BoundaryData essential(double x0);              // Re exp(1/(z - x0))
solver::BoundaryData uniform_flow();                    // dU/dn = -Re(normal)
solver::BoundaryData plusminus();                       // +1 / -1 by contour parity

std::vector<std::string> list();

} // namespace laprf::gallery
