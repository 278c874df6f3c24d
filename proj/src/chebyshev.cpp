#include "laplacerf/chebyshev.hpp"

#include <cmath>
#include <stdexcept>

namespace laprf::cheb {

cplx eval(std::span<const cplx> c, double t) {
  if (c.empty()) return 0.0;
  // Clenshaw recurrence, backwards.
  cplx b1 = 0.0, b2 = 0.0;
  for (size_t k = c.size(); k-- > 1;) {
    cplx b0 = 2.0 * t * b1 - b2 + c[k];
    b2 = b1;
    b1 = b0;
  }
  return t * b1 - b2 + c[0];
}

cplx eval(std::span<const cplx> c, cplx t) {
  if (c.empty()) return 0.0;
  cplx b1 = 0.0, b2 = 0.0;
  for (size_t k = c.size(); k-- > 1;) {
    cplx b0 = 2.0 * t * b1 - b2 + c[k];
    b2 = b1;
    b1 = b0;
  }
  return t * b1 - b2 + c[0];
}

double eval_real(std::span<const cplx> c, double t) { return eval(c, t).real(); }

std::vector<cplx> interp_coeffs(const std::function<cplx(double)>& f, int n) {
  if (n < 1) throw std::invalid_argument("interp_coeffs: degree must be >= 1");
  std::vector<cplx> fv(n + 1);
  for (int j = 0; j <= n; ++j) fv[j] = f(std::cos(kPi * j / n));
  // Discrete cosine transform of type I, direct O(n^2) summation.
  std::vector<cplx> c(n + 1);
  for (int k = 0; k <= n; ++k) {
    cplx acc = 0.5 * (fv[0] + (k % 2 == 0 ? fv[n] : -fv[n]));
    for (int j = 1; j < n; ++j) acc += fv[j] * std::cos(kPi * j * k / n);
    c[k] = acc * (2.0 / n);
  }
  c[0] *= 0.5;
  c[n] *= 0.5;
  return c;
}

std::vector<cplx> fit(const std::function<cplx(double)>& f, double tol, int max_degree) {
  int n = 16;
  while (true) {
    std::vector<cplx> c = interp_coeffs(f, n);
    double cmax = 0.0;
    for (const cplx& v : c) cmax = std::max(cmax, std::abs(v));
    if (cmax == 0.0) return {cplx(0.0)};
    // Require the last eighth of the coefficients to sit below tol.
    double tail = 0.0;
    for (size_t k = c.size() - std::max<size_t>(2, c.size() / 8); k < c.size(); ++k)
      tail = std::max(tail, std::abs(c[k]));
    if (tail <= tol * cmax) return trim(std::move(c), 0.5 * tol);
    if (n >= max_degree)
      return trim(std::move(c), 0.5 * tol); // best effort at the cap
    n *= 2;
  }
}

std::vector<cplx> derivative(std::span<const cplx> c) {
  const int n = static_cast<int>(c.size()) - 1;
  if (n <= 0) return {cplx(0.0)};
  std::vector<cplx> d(n, 0.0);
  // d_{k-1} = d_{k+1} + 2k c_k, downward recurrence.
  cplx dkp1 = 0.0, dkp2 = 0.0;
  for (int k = n; k >= 1; --k) {
    cplx dk = dkp2 + 2.0 * k * c[k];
    d[k - 1] = dk;
    dkp2 = dkp1;
    dkp1 = dk;
  }
  d[0] *= 0.5;
  return d;
}

std::vector<cplx> antiderivative(std::span<const cplx> c) {
  const int n = static_cast<int>(c.size()) - 1;
  std::vector<cplx> a(n + 2, 0.0);
  auto coef = [&](int k) -> cplx { return k <= n ? c[k] : cplx(0.0); };
  for (int k = 2; k <= n + 1; ++k)
    a[k] = (coef(k - 1) - coef(k + 1)) / (2.0 * k);
  a[1] = coef(0) - 0.5 * coef(2);
  // Constant so that the antiderivative vanishes at t = -1.
  cplx at_minus1 = 0.0;
  double sgn = -1.0; // T_k(-1) = (-1)^k
  for (int k = 1; k < static_cast<int>(a.size()); ++k) {
    at_minus1 += a[k] * sgn;
    sgn = -sgn;
  }
  a[0] = -at_minus1;
  return a;
}

std::vector<cplx> trim(std::vector<cplx> c, double tol) {
  double cmax = 0.0;
  for (const cplx& v : c) cmax = std::max(cmax, std::abs(v));
  size_t n = c.size();
  while (n > 1 && std::abs(c[n - 1]) <= tol * cmax) --n;
  c.resize(n);
  return c;
}

std::vector<cplx> from_monomial(std::span<const cplx> mono) {
  // Build up by Horner in the Chebyshev basis: c <- c*t + a_k, using
  // t*T_k = (T_{k+1}+T_{|k-1|})/2.
  std::vector<cplx> c{cplx(0.0)};
  for (size_t i = mono.size(); i-- > 0;) {
    std::vector<cplx> next(c.size() + 1, 0.0);
    for (size_t k = 0; k < c.size(); ++k) {
      if (k == 0) {
        next[1] += c[0];
      } else {
        next[k + 1] += 0.5 * c[k];
        next[k - 1] += 0.5 * c[k];
      }
    }
    next[0] += mono[i];
    c = trim(std::move(next), 0.0);
  }
  return c;
}

std::vector<cplx> to_monomial(std::span<const cplx> c) {
  // T_{k+1} = 2 t T_k - T_{k-1}, accumulate monomial forms.
  std::vector<cplx> acc(1, 0.0);
  std::vector<cplx> tkm1{cplx(1.0)};      // T_0
  std::vector<cplx> tk{cplx(0.0), cplx(1.0)}; // T_1
  auto add_scaled = [&](const std::vector<cplx>& p, cplx s) {
    if (acc.size() < p.size()) acc.resize(p.size(), 0.0);
    for (size_t i = 0; i < p.size(); ++i) acc[i] += s * p[i];
  };
  if (!c.empty()) add_scaled(tkm1, c[0]);
  if (c.size() > 1) add_scaled(tk, c[1]);
  for (size_t k = 2; k < c.size(); ++k) {
    std::vector<cplx> tkp1(tk.size() + 1, 0.0);
    for (size_t i = 0; i < tk.size(); ++i) tkp1[i + 1] += 2.0 * tk[i];
    for (size_t i = 0; i < tkm1.size(); ++i) tkp1[i] -= tkm1[i];
    add_scaled(tkp1, c[k]);
    tkm1 = std::move(tk);
    tk = std::move(tkp1);
  }
  return acc;
}

} // namespace laprf::cheb
