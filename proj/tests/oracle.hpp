#pragma once

// Test-side oracles, independent of the library's integration utilities:
// adaptive Simpson quadrature and a trapezoid-based winding check.

#include <cmath>
#include <complex>
#include <functional>

namespace oracle {

inline double simpson(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  return (b - a) / 6.0 * (f(a) + 4.0 * f(c) + f(b));
}

inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double b,
                                   double whole, double tol, int depth) {
  const double c = 0.5 * (a + b);
  const double left = simpson(f, a, c), right = simpson(f, c, b);
  const double err = std::abs(left + right - whole);
  // Relative floor: once the Richardson estimate reaches rounding level
  // further splits cannot help and would recurse without bound.
  if (depth > 44 || err < 15.0 * tol || err < 4e-16 * (std::abs(left) + std::abs(right)))
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson_rec(f, a, c, left, 0.5 * tol, depth + 1) +
         adaptive_simpson_rec(f, c, b, right, 0.5 * tol, depth + 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-13) {
  return adaptive_simpson_rec(f, a, b, simpson(f, a, b), tol, 0);
}

// Chebyshev-weight integral on [-1,1] through the cos substitution.
inline double chebyshev_weighted(const std::function<double(double)>& f, double tol = 1e-13) {
  return integrate([&](double th) { return f(std::cos(th)); }, 0.0,
                   3.141592653589793238462643383279, tol);
}

// Dense winding-number sampling around a closed parametrized curve.
inline int winding_number(const std::function<std::complex<double>(double)>& z,
                          std::complex<double> p, int n = 200000) {
  double total = 0.0;
  std::complex<double> prev = z(0.0) - p;
  for (int i = 1; i <= n; ++i) {
    const std::complex<double> cur = z(static_cast<double>(i) / n) - p;
    total += std::arg(cur / prev);
    prev = cur;
  }
  return static_cast<int>(std::lround(total / (2.0 * 3.141592653589793238462643383279)));
}

} // namespace oracle
