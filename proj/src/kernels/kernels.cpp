#include "laplacerf/kernels.hpp"

#include <atomic>
#include <cstdlib>

namespace laprf::kernels {

namespace scalar {

void dipole_parts(const double* zx, const double* zy, std::size_t n, cplx zp,
                  double* phiR, double* phiI) {
  const double px = zp.real(), py = zp.imag();
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = px - zx[i];
    const double dy = py - zy[i];
    const double inv = 1.0 / (dx * dx + dy * dy);
    phiR[i] = dx * inv;
    phiI[i] = -dy * inv;
  }
}

void potential_sum(const double* zx, const double* zy, std::size_t n,
                   const cplx* poles, const cplx* residues, std::size_t npoles,
                   double* wRe, double* wIm) {
  for (std::size_t i = 0; i < n; ++i) {
    double ar = 0.0, ai = 0.0;
    for (std::size_t p = 0; p < npoles; ++p) {
      const double dx = poles[p].real() - zx[i];
      const double dy = poles[p].imag() - zy[i];
      const double inv = 1.0 / (dx * dx + dy * dy);
      const double gr = dx * inv, gi = -dy * inv;
      ar += residues[p].real() * gr - residues[p].imag() * gi;
      ai += residues[p].real() * gi + residues[p].imag() * gr;
    }
    wRe[i] += ar;
    wIm[i] += ai;
  }
}

void weighted_sq_norms(const double* u, const double* f, const double* w,
                       std::size_t n, double* num, double* den) {
  double a = 0.0, b = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = u[i] - f[i];
    a += w[i] * d * d;
    b += w[i] * f[i] * f[i];
  }
  *num = a;
  *den = b;
}

} // namespace scalar

namespace {

Isa pick_default() {
  if (const char* env = std::getenv("LAPLACE_RF_SIMD")) {
    const std::string v(env);
    if (v == "scalar") return Isa::scalar;
    if (v == "avx2" && avx2_supported()) return Isa::avx2;
    // "auto" or anything else falls through
  }
  return avx2_supported() ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa> g_active{pick_default()};

} // namespace

bool avx2_supported() {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa active() { return g_active.load(std::memory_order_relaxed); }

void set_active(Isa isa) {
  if (isa == Isa::avx2 && !avx2_supported()) isa = Isa::scalar;
  g_active.store(isa, std::memory_order_relaxed);
}

std::string isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

void dipole_parts(const double* zx, const double* zy, std::size_t n, cplx zp,
                  double* phiR, double* phiI) {
#if defined(__x86_64__) || defined(_M_X64)
  if (active() == Isa::avx2) return avx2::dipole_parts(zx, zy, n, zp, phiR, phiI);
#endif
  scalar::dipole_parts(zx, zy, n, zp, phiR, phiI);
}

void potential_sum(const double* zx, const double* zy, std::size_t n,
                   const cplx* poles, const cplx* residues, std::size_t npoles,
                   double* wRe, double* wIm) {
#if defined(__x86_64__) || defined(_M_X64)
  if (active() == Isa::avx2) return avx2::potential_sum(zx, zy, n, poles, residues, npoles, wRe, wIm);
#endif
  scalar::potential_sum(zx, zy, n, poles, residues, npoles, wRe, wIm);
}

void weighted_sq_norms(const double* u, const double* f, const double* w,
                       std::size_t n, double* num, double* den) {
#if defined(__x86_64__) || defined(_M_X64)
  if (active() == Isa::avx2) return avx2::weighted_sq_norms(u, f, w, n, num, den);
#endif
  scalar::weighted_sq_norms(u, f, w, n, num, den);
}

} // namespace laprf::kernels
