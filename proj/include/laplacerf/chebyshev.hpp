#pragma once

// Chebyshev series utilities on the reference interval t in [-1,1].
// Series are stored as ascending coefficient vectors c[0..n] of
// sum c_k T_k(t). Complex coefficients throughout; boundary sections
// and antiderivatives of boundary data both live in this basis.

#include <functional>
#include <span>
#include <vector>

#include "laplacerf/types.hpp"

namespace laprf::cheb {

// Clenshaw evaluation (the complex-argument form is used for root
// polishing and winding integrals off the interval).
cplx eval(std::span<const cplx> c, double t);
cplx eval(std::span<const cplx> c, cplx t);
double eval_real(std::span<const cplx> c, double t);

// Coefficients of the degree-n interpolant at Chebyshev points of the
// second kind, t_j = cos(j*pi/n).
std::vector<cplx> interp_coeffs(const std::function<cplx(double)>& f, int n);

// Interpolate adaptively until the coefficient tail drops below tol
// relative to the largest coefficient. Degree doubles up to max_degree.
std::vector<cplx> fit(const std::function<cplx(double)>& f, double tol, int max_degree = 4096);

// d/dt of the series.
std::vector<cplx> derivative(std::span<const cplx> c);

// Antiderivative with value 0 at t = -1.
std::vector<cplx> antiderivative(std::span<const cplx> c);

// Drop trailing coefficients below tol * max|c|.
std::vector<cplx> trim(std::vector<cplx> c, double tol = 0.0);

// Conversion helpers (small degrees only; monomial coefficients ascending).
std::vector<cplx> from_monomial(std::span<const cplx> mono);
std::vector<cplx> to_monomial(std::span<const cplx> c);

} // namespace laprf::cheb
