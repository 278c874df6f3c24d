#include <doctest.h>

#include <random>
#include <vector>

#include "laplacerf/kernels.hpp"

using namespace laprf;

namespace {

struct RandomArrays {
  std::vector<double> x, y, u, f, w;
  std::vector<cplx> poles, residues;
};

RandomArrays make(size_t n, size_t npoles, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-2.0, 2.0);
  RandomArrays a;
  a.x.resize(n);
  a.y.resize(n);
  a.u.resize(n);
  a.f.resize(n);
  a.w.resize(n);
  for (size_t i = 0; i < n; ++i) {
    a.x[i] = uni(rng);
    a.y[i] = uni(rng);
    a.u[i] = uni(rng);
    a.f[i] = uni(rng);
    a.w[i] = 0.1 + std::abs(uni(rng));
  }
  for (size_t p = 0; p < npoles; ++p) {
    a.poles.emplace_back(uni(rng) + 5.0, uni(rng)); // keep away from the points
    a.residues.emplace_back(uni(rng), uni(rng));
  }
  return a;
}

} // namespace

TEST_CASE("scalar and avx2 kernels agree") {
  if (!kernels::avx2_supported()) {
    MESSAGE("avx2 not available; dispatch check only");
    CHECK(kernels::active() == kernels::Isa::scalar);
    return;
  }
  for (size_t n : {1, 3, 4, 7, 64, 1001}) {
    RandomArrays a = make(n, 9, 42 + n);
    std::vector<double> r1(n), i1(n), r2(n), i2(n);
    kernels::scalar::dipole_parts(a.x.data(), a.y.data(), n, cplx(1.5, -0.25), r1.data(), i1.data());
    kernels::avx2::dipole_parts(a.x.data(), a.y.data(), n, cplx(1.5, -0.25), r2.data(), i2.data());
    for (size_t i = 0; i < n; ++i) {
      CHECK(r1[i] == doctest::Approx(r2[i]).epsilon(1e-14));
      CHECK(i1[i] == doctest::Approx(i2[i]).epsilon(1e-14));
    }

    std::vector<double> u1(n, 0.0), v1(n, 0.0), u2(n, 0.0), v2(n, 0.0);
    kernels::scalar::potential_sum(a.x.data(), a.y.data(), n, a.poles.data(), a.residues.data(),
                                   a.poles.size(), u1.data(), v1.data());
    kernels::avx2::potential_sum(a.x.data(), a.y.data(), n, a.poles.data(), a.residues.data(),
                                 a.poles.size(), u2.data(), v2.data());
    for (size_t i = 0; i < n; ++i) {
      CHECK(u1[i] == doctest::Approx(u2[i]).epsilon(1e-12));
      CHECK(v1[i] == doctest::Approx(v2[i]).epsilon(1e-12));
    }

    double n1, d1, n2, d2;
    kernels::scalar::weighted_sq_norms(a.u.data(), a.f.data(), a.w.data(), n, &n1, &d1);
    kernels::avx2::weighted_sq_norms(a.u.data(), a.f.data(), a.w.data(), n, &n2, &d2);
    CHECK(n1 == doctest::Approx(n2).epsilon(1e-13));
    CHECK(d1 == doctest::Approx(d2).epsilon(1e-13));
  }
}

TEST_CASE("dispatch honors the test override") {
  const kernels::Isa before = kernels::active();
  kernels::set_active(kernels::Isa::scalar);
  CHECK(kernels::active() == kernels::Isa::scalar);
  kernels::set_active(before);
}

TEST_CASE("dipole parts match the complex formula") {
  const double zx = 0.25, zy = -1.5;
  double pr = 0.0, pi = 0.0;
  kernels::dipole_parts(&zx, &zy, 1, cplx(2.0, 0.5), &pr, &pi);
  const cplx want = 1.0 / (cplx(2.0, 0.5) - cplx(zx, zy));
  CHECK(pr == doctest::Approx(want.real()).epsilon(1e-15));
  CHECK(pi == doctest::Approx(want.imag()).epsilon(1e-15));
}
