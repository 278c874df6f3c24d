#pragma once

// Adaptive Gauss-Kronrod 7-15 integration used internally for arc lengths,
// line-integral norms and flux integrals. Test oracles use their own
// independent integrators.

#include <cmath>
#include <functional>

namespace laprf::detail {

struct GK715 {
  // Kronrod nodes on [0,1] by symmetry (abscissae >= 0) and weights.
  static constexpr double xk[8] = {
      0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
      0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
  static constexpr double wk[8] = {
      0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
      0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
  static constexpr double wg[4] = {
      0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};
};

template <class F>
static double gk15(const F& f, double a, double b, double* err) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double resk = 0.0, resg = 0.0;
  for (int i = 0; i < 8; ++i) {
    const double dx = h * GK715::xk[i];
    const double fv = (i == 7) ? f(c) : f(c - dx) + f(c + dx);
    resk += GK715::wk[i] * fv;
    if (i % 2 == 1) resg += GK715::wg[i / 2] * fv;
  }
  resk *= h;
  resg *= h;
  *err = std::abs(resk - resg);
  return resk;
}

template <class F>
static double adaptive_gk_rec(const F& f, double a, double b, double tol, int depth) {
  double err = 0.0;
  const double v = gk15(f, a, b, &err);
  // The relative floor stops refinement once the local error sits at
  // rounding level; without it the tolerance halving recurses forever.
  if (err <= tol || err <= 1e-15 * std::abs(v) || depth >= 40) return v;
  const double c = 0.5 * (a + b);
  return adaptive_gk_rec(f, a, c, 0.5 * tol, depth + 1) +
         adaptive_gk_rec(f, c, b, 0.5 * tol, depth + 1);
}

// Absolute-tolerance adaptive integration of a real integrand.
template <class F>
double integrate(const F& f, double a, double b, double abs_tol = 1e-12) {
  return adaptive_gk_rec(f, a, b, abs_tol, 0);
}

} // namespace laprf::detail
