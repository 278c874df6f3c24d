#pragma once

// Data-parallel inner loops shared by assembly, error metrics and field
// evaluation: dipole basis columns, partial-fraction potential sums and
// weighted residual norms. A scalar reference implementation is always
// available; an AVX2+FMA variant is selected at runtime on x86-64 when
// the CPU supports it. The LAPLACE_RF_SIMD environment variable
// ("scalar", "avx2", "auto") overrides the choice; the two variants are
// equivalence-tested against each other.

#include <cstddef>
#include <string>

#include "laplacerf/types.hpp"

namespace laprf::kernels {

enum class Isa { scalar, avx2 };

Isa active();
void set_active(Isa isa); // test hook
bool avx2_supported();
std::string isa_name(Isa isa);

// phiR[i] + i*phiI[i] = 1 / (zp - z_i), boundary points in SoA layout.
void dipole_parts(const double* zx, const double* zy, std::size_t n, cplx zp,
                  double* phiR, double* phiI);

// wRe/wIm += sum_p res[p] / (pole[p] - z_i) for every point i.
void potential_sum(const double* zx, const double* zy, std::size_t n,
                   const cplx* poles, const cplx* residues, std::size_t npoles,
                   double* wRe, double* wIm);

// num = sum_i w_i (u_i - f_i)^2, den = sum_i w_i f_i^2.
void weighted_sq_norms(const double* u, const double* f, const double* w,
                       std::size_t n, double* num, double* den);

namespace scalar {
void dipole_parts(const double* zx, const double* zy, std::size_t n, cplx zp,
                  double* phiR, double* phiI);
void potential_sum(const double* zx, const double* zy, std::size_t n,
                   const cplx* poles, const cplx* residues, std::size_t npoles,
                   double* wRe, double* wIm);
void weighted_sq_norms(const double* u, const double* f, const double* w,
                       std::size_t n, double* num, double* den);
} // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
void dipole_parts(const double* zx, const double* zy, std::size_t n, cplx zp,
                  double* phiR, double* phiI);
void potential_sum(const double* zx, const double* zy, std::size_t n,
                   const cplx* poles, const cplx* residues, std::size_t npoles,
                   double* wRe, double* wIm);
void weighted_sq_norms(const double* u, const double* f, const double* w,
                       std::size_t n, double* num, double* den);
} // namespace avx2
#endif

} // namespace laprf::kernels
