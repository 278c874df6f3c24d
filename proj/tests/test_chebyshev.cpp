#include <doctest.h>

#include <cmath>

#include "laplacerf/chebyshev.hpp"

using namespace laprf;

TEST_CASE("interpolation reproduces an entire function") {
  auto f = [](double t) { return cplx(std::exp(t) * std::cos(3.0 * t), std::sin(t)); };
  std::vector<cplx> c = cheb::fit(f, 1e-14);
  for (double t = -1.0; t <= 1.0; t += 0.083) CHECK(std::abs(cheb::eval(c, t) - f(t)) < 1e-12);
}

TEST_CASE("derivative and antiderivative invert each other") {
  std::vector<cplx> c = cheb::fit([](double t) { return cplx(std::sin(2.0 * t), t * t); }, 1e-14);
  std::vector<cplx> a = cheb::antiderivative(cheb::derivative(c));
  // Same function up to the value at -1.
  const cplx offset = cheb::eval(c, -1.0);
  for (double t = -1.0; t <= 1.0; t += 0.1)
    CHECK(std::abs(cheb::eval(a, t) + offset - cheb::eval(c, t)) < 1e-12);
  CHECK(std::abs(cheb::eval(a, -1.0)) < 1e-13);
}

TEST_CASE("monomial round trip") {
  std::vector<cplx> mono = {cplx(1, 2), cplx(0, -1), cplx(3, 0), cplx(-2, 0.5)};
  std::vector<cplx> back = cheb::to_monomial(cheb::from_monomial(mono));
  REQUIRE(back.size() == mono.size());
  for (size_t i = 0; i < mono.size(); ++i) CHECK(std::abs(back[i] - mono[i]) < 1e-13);
}

TEST_CASE("complex-argument evaluation extends the series") {
  std::vector<cplx> c = cheb::from_monomial(std::vector<cplx>{1.0, 0.0, 1.0}); // 1 + t^2
  const cplx t(0.3, 0.7);
  CHECK(std::abs(cheb::eval(c, t) - (1.0 + t * t)) < 1e-13);
}
