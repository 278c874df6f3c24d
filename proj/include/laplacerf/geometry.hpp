#pragma once

// Boundaries as piecewise-rational parametrizations z(s) on [0,1].
// Each section is a rational function p(t)/q(t) in a local Chebyshev
// variable t in [-1,1], mapped affinely onto its breakpoint interval
// [s0,s1]. Contours are closed and oriented counterclockwise after
// construction; remapping breakpoints changes s, never the curve.

#include <span>
#include <vector>

#include "laplacerf/types.hpp"

namespace laprf::geom {

enum class DomainSide { Inside, Outside, OnBoundary };
enum class Smoothness { cubic, quintic };

struct RationalSection {
  std::vector<cplx> num;       // Chebyshev coefficients of p(t)
  std::vector<cplx> den{1.0};  // Chebyshev coefficients of q(t); {1} = polynomial
  double s0 = 0.0, s1 = 1.0;

  int degree() const; // L_m = max(deg p, deg q)
  bool is_polynomial() const;
  cplx eval_local(double t) const;
  cplx deriv_local(double t) const;        // dz/dt
  cplx second_deriv_local(double t) const; // d2z/dt2
  void flip();                             // reverse direction: t -> -t
};

struct Boundary {
  std::vector<RationalSection> sections; // contour sections contiguous, in order
  std::vector<int> contour_of;           // contour index per section
  int num_contours = 0;
  double closure_tol = 0.0; // absolute, set by make_boundary

  // cached by make_boundary
  std::vector<double> section_length;
  double total_length = 0.0;
  double diam = 0.0;
  std::vector<cplx> contour_centroids;

  cplx eval(double s) const;
  cplx deriv(double s) const; // dz/ds
  int section_of(double s) const;
  double diameter() const { return diam; }
  cplx centroid(int contour) const { return contour_centroids.at(contour); }
  std::pair<int, int> contour_range(int contour) const; // [first, last] section index
  double local_of_global(int m, double s) const;        // s -> t within section m
};

// Validates sections, normalizes orientation to counterclockwise per
// contour, assigns arclength-proportional breakpoints and fills caches.
Boundary make_boundary(std::vector<RationalSection> sections, std::vector<int> contour_of,
                       double closure_rel_tol = 1e-10);

// Periodic spline interpolation of sampled contours (first point not
// repeated). Sections come out polynomial (denominator 1).
Boundary ingest_samples(const std::vector<std::vector<cplx>>& points_per_contour,
                        Smoothness smoothness = Smoothness::cubic);

// Breakpoints h_0..h_M with widths proportional to section arc length.
std::vector<double> breakpoints_by_arclength(std::span<const RationalSection> sections);

// All finite zeros of zp*q_m(t) - p_m(t) in the local t-plane (the
// parameter-plane poles of 1/(zp - z(t)) on this section). Degenerate
// leading coefficients reduce the count; missing roots are at infinity.
std::vector<cplx> section_shifted_roots(const RationalSection& sec, cplx zp);

// Winding-number test via the analytic Cauchy integral (partial-fraction
// antiderivative per section). Inside means enclosed by some contour.
DomainSide point_in_domain(const Boundary& b, cplx zp, double tol = 1e-6);

// Per-contour winding numbers; sets on_boundary when the integral is not
// close to an integer multiple of 2*pi*i.
std::vector<double> winding_numbers(const Boundary& b, cplx zp, bool* on_boundary,
                                    double tol = 1e-6);

} // namespace laprf::geom
