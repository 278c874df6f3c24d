// AVX2+FMA variants of the inner loops. This translation unit is the only
// one compiled with -mavx2 -mfma; callers reach it through the runtime
// dispatch in kernels.cpp.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include "laplacerf/kernels.hpp"

namespace laprf::kernels::avx2 {

void dipole_parts(const double* zx, const double* zy, std::size_t n, cplx zp,
                  double* phiR, double* phiI) {
  const __m256d px = _mm256_set1_pd(zp.real());
  const __m256d py = _mm256_set1_pd(zp.imag());
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d dx = _mm256_sub_pd(px, _mm256_loadu_pd(zx + i));
    const __m256d dy = _mm256_sub_pd(py, _mm256_loadu_pd(zy + i));
    const __m256d r2 = _mm256_fmadd_pd(dx, dx, _mm256_mul_pd(dy, dy));
    const __m256d inv = _mm256_div_pd(one, r2);
    _mm256_storeu_pd(phiR + i, _mm256_mul_pd(dx, inv));
    _mm256_storeu_pd(phiI + i, _mm256_mul_pd(_mm256_sub_pd(_mm256_setzero_pd(), dy), inv));
  }
  for (; i < n; ++i) {
    const double dx = zp.real() - zx[i];
    const double dy = zp.imag() - zy[i];
    const double inv = 1.0 / (dx * dx + dy * dy);
    phiR[i] = dx * inv;
    phiI[i] = -dy * inv;
  }
}

void potential_sum(const double* zx, const double* zy, std::size_t n,
                   const cplx* poles, const cplx* residues, std::size_t npoles,
                   double* wRe, double* wIm) {
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(zx + i);
    const __m256d y = _mm256_loadu_pd(zy + i);
    __m256d ar = _mm256_setzero_pd();
    __m256d ai = _mm256_setzero_pd();
    for (std::size_t p = 0; p < npoles; ++p) {
      const __m256d dx = _mm256_sub_pd(_mm256_set1_pd(poles[p].real()), x);
      const __m256d dy = _mm256_sub_pd(_mm256_set1_pd(poles[p].imag()), y);
      const __m256d inv = _mm256_div_pd(one, _mm256_fmadd_pd(dx, dx, _mm256_mul_pd(dy, dy)));
      const __m256d gr = _mm256_mul_pd(dx, inv);
      const __m256d gi = _mm256_mul_pd(_mm256_sub_pd(_mm256_setzero_pd(), dy), inv);
      const __m256d rr = _mm256_set1_pd(residues[p].real());
      const __m256d ri = _mm256_set1_pd(residues[p].imag());
      ar = _mm256_fmadd_pd(rr, gr, ar);
      ar = _mm256_fnmadd_pd(ri, gi, ar);
      ai = _mm256_fmadd_pd(rr, gi, ai);
      ai = _mm256_fmadd_pd(ri, gr, ai);
    }
    _mm256_storeu_pd(wRe + i, _mm256_add_pd(_mm256_loadu_pd(wRe + i), ar));
    _mm256_storeu_pd(wIm + i, _mm256_add_pd(_mm256_loadu_pd(wIm + i), ai));
  }
  if (i < n) scalar::potential_sum(zx + i, zy + i, n - i, poles, residues, npoles, wRe + i, wIm + i);
}

void weighted_sq_norms(const double* u, const double* f, const double* w,
                       std::size_t n, double* num, double* den) {
  __m256d a = _mm256_setzero_pd();
  __m256d b = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d ui = _mm256_loadu_pd(u + i);
    const __m256d fi = _mm256_loadu_pd(f + i);
    const __m256d wi = _mm256_loadu_pd(w + i);
    const __m256d d = _mm256_sub_pd(ui, fi);
    a = _mm256_fmadd_pd(wi, _mm256_mul_pd(d, d), a);
    b = _mm256_fmadd_pd(wi, _mm256_mul_pd(fi, fi), b);
  }
  alignas(32) double la[4], lb[4];
  _mm256_store_pd(la, a);
  _mm256_store_pd(lb, b);
  double sa = la[0] + la[1] + la[2] + la[3];
  double sb = lb[0] + lb[1] + lb[2] + lb[3];
  for (; i < n; ++i) {
    const double d = u[i] - f[i];
    sa += w[i] * d * d;
    sb += w[i] * f[i] * f[i];
  }
  *num = sa;
  *den = sb;
}

} // namespace laprf::kernels::avx2

#endif
