#include <doctest.h>

#include <cmath>
#include <random>

#include "laplacerf/gallery.hpp"
#include "laplacerf/quadrature.hpp"
#include "oracle.hpp"

using namespace laprf;

namespace {

double apply(const quad::Rule1D& r, const std::function<double(double)>& f) {
  double acc = 0.0;
  for (size_t k = 0; k < r.x.size(); ++k) acc += r.w[k] * f(r.x[k]);
  return acc;
}

} // namespace

TEST_CASE("classical limit: no finite poles") {
  const int K = 7;
  quad::Rule1D r = quad::rational_chebyshev_rule({}, K - 1);
  REQUIRE(r.x.size() == static_cast<size_t>(K));
  for (int k = 1; k <= K; ++k) {
    CHECK(r.x[K - k] == doctest::Approx(std::cos((2.0 * k - 1.0) * kPi / (2 * K))).epsilon(1e-14));
    CHECK(r.w[K - k] == doctest::Approx(kPi / K).epsilon(1e-14));
  }
  CHECK(apply(r, [](double) { return 1.0; }) == doctest::Approx(kPi).epsilon(1e-14));
}

TEST_CASE("double real pole at 2: closed form") {
  std::vector<cplx> poles = {2.0, 2.0};
  quad::Rule1D r = quad::rational_chebyshev_rule(poles, 0);
  REQUIRE(r.x.size() == 2);
  for (double w : r.w) CHECK(w > 0.0);
  const double got = apply(r, [](double s) { return 1.0 / ((2.0 - s) * (2.0 - s)); });
  CHECK(got == doctest::Approx(2.0 * kPi / std::pow(3.0, 1.5)).epsilon(1e-13));
  // First-order member of the same space and the pure weight integral.
  CHECK(apply(r, [](double s) { return 1.0 / (2.0 - s); }) ==
        doctest::Approx(kPi / std::sqrt(3.0)).epsilon(1e-13));
  CHECK(apply(r, [](double) { return 1.0; }) == doctest::Approx(kPi).epsilon(1e-13));
}

TEST_CASE("pole on the interval is rejected") {
  std::vector<cplx> poles = {0.5, 0.5};
  CHECK_THROWS_AS(quad::rational_chebyshev_rule(poles, 0), std::domain_error);
  CHECK_THROWS_AS(quad::rational_chebyshev_rule({}, -1), std::invalid_argument);
}

TEST_CASE("exactness on random conjugate-closed pole sets") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<cplx> poles;
    const int pairs = 1 + static_cast<int>(uni(rng) * 4);
    for (int i = 0; i < pairs; ++i) {
      const double rho = 1.05 + 6.0 * uni(rng);
      const double phi = kPi * uni(rng);
      const cplx beta = std::exp(cplx(0, phi)) / rho;
      const cplx a = 0.5 * (beta + 1.0 / beta);
      poles.push_back(a);
      poles.push_back(std::conj(a));
    }
    const int n_inf = static_cast<int>(uni(rng) * 3);
    quad::Rule1D r = quad::rational_chebyshev_rule(poles, n_inf);
    REQUIRE(r.x.size() == poles.size() / 2 + n_inf + 1);
    for (double w : r.w) CHECK(w > 0.0);

    std::vector<cplx> coef(poles.size());
    for (auto& c : coef) c = cplx(2.0 * uni(rng) - 1.0, 2.0 * uni(rng) - 1.0);
    std::vector<double> pcoef(2 * n_inf + 2);
    for (auto& c : pcoef) c = 2.0 * uni(rng) - 1.0;
    auto f = [&](double x) {
      cplx acc = 0.0;
      for (size_t i = 0; i < poles.size(); ++i) acc += coef[i] / (x - poles[i]);
      double v = acc.real();
      double xn = 1.0;
      for (double c : pcoef) {
        v += c * xn;
        xn *= x;
      }
      return v;
    };
    const double got = apply(r, f);
    const double want = oracle::chebyshev_weighted(f);
    CHECK(std::abs(got - want) <= 1e-12 * std::max(1.0, std::abs(want)));
  }
}

TEST_CASE("near-interval pole: rule still integrates its own space") {
  // rho - 1 ~ 1e-6, the Froissart regime.
  const double rho = 1.0 + 1e-6;
  const cplx beta = std::exp(cplx(0, 1.1)) / rho;
  const cplx a = 0.5 * (beta + 1.0 / beta);
  std::vector<cplx> poles = {a, std::conj(a), a, std::conj(a)};
  quad::Rule1D r = quad::rational_chebyshev_rule(poles, 2);
  for (double w : r.w) CHECK(w > 0.0);
  auto f = [&](double x) { return (1.0 / ((x - a) * (x - std::conj(a)))).real(); };
  const double got = apply(r, f);
  const double want = oracle::chebyshev_weighted(f, 1e-15);
  CHECK(std::abs(got - want) <= 1e-11 * std::abs(want));
}

TEST_CASE("prune table shape and monotonicity") {
  const quad::PruneTable& t = quad::PruneTable::builtin();
  // rho ~ 10 at eps 1e-14 needs degree < 20.
  CHECK(t.required_degree(10.0, 1e-14) < 20);
  CHECK(t.required_degree(10.0, 1e-14) > 2);
  // Larger eps never needs a larger degree.
  for (double rho : {1.3, 2.0, 10.0, 100.0})
    CHECK(t.required_degree(rho, 1e-4) <= t.required_degree(rho, 1e-14));
  // Near-interval poles must be kept.
  CHECK(t.required_degree(1.0005, 1e-10) == quad::PruneTable::kKeep);
}

TEST_CASE("prune drops far poles and sizes the polynomial correction") {
  std::vector<cplx> alphas = {cplx(0.0, 1e-2), cplx(1e6, 0.0), cplx(0.0, 300.0)};
  std::vector<int> mult = {3, 3, 3};
  quad::PruneResult pr = quad::prune(alphas, mult, 1e-6, quad::PruneTable::builtin());
  REQUIRE(pr.kept.size() == 1); // only the near pole survives
  CHECK(std::abs(pr.kept[0] - alphas[0]) < 1e-12);
  CHECK(pr.n_infinite >= 4);
  CHECK(pr.n_infinite <= 32);
}

TEST_CASE("pruned and unpruned boundary rules integrate a test integrand alike") {
  geom::Boundary b = gallery::circle(0.0, 1.0);
  std::vector<quad::WeightedPole> wp = {{cplx(1.4, 0.2), 3}, {cplx(-90.0, 40.0), 3}};
  quad::RuleOptions opt;
  opt.epsilon = 1e-10;
  opt.prune = false;
  quad::Rule full = quad::build_boundary_rule(b, wp, {}, opt);
  opt.prune = true;
  quad::Rule pruned = quad::build_boundary_rule(b, wp, {}, opt);
  CHECK(pruned.size() < full.size());
  auto g = [&](const quad::Rule& r) {
    double acc = 0.0;
    for (size_t k = 0; k < r.size(); ++k) {
      const cplx phi = 1.0 / (wp[0].z - r.z[k]);
      const cplx psi = 1.0 / (wp[1].z - r.z[k]);
      acc += r.w[k] * (phi.real() * psi.real() + 0.3 * phi.imag() * phi.real());
    }
    return acc;
  };
  CHECK(std::abs(g(full) - g(pruned)) <= 10.0 * opt.epsilon * std::max(1.0, std::abs(g(full))));
}

TEST_CASE("testing-point count matches the closed-form tally") {
  // Single polynomial section of degree L with N poles of multiplicity 3
  // and n_infinite from the no-prune default: K = q + n_inf + 1.
  geom::Boundary b = gallery::ellipse(1.0, 0.5);
  REQUIRE(b.sections.size() == 1);
  const int L = b.sections[0].degree();
  std::vector<quad::WeightedPole> wp;
  for (int n = 0; n < 3; ++n) wp.push_back({cplx(1.5 + 0.1 * n, 0.3), 3});
  quad::RuleOptions opt;
  opt.prune = false;
  opt.min_n_infinite = 9;
  quad::Rule r = quad::build_boundary_rule(b, wp, {}, opt);
  CHECK(static_cast<int>(r.size()) == 3 * 3 * L + 9 + 1);
}

TEST_CASE("boundary rule weights reproduce section mass") {
  geom::Boundary b = gallery::two_circles(0.5);
  quad::Rule r = quad::chebyshev_boundary_rule(b, 6);
  std::vector<double> per_section(b.sections.size(), 0.0);
  for (size_t k = 0; k < r.size(); ++k) per_section[r.section_of[k]] += r.w[k];
  for (size_t m = 0; m < b.sections.size(); ++m) {
    const double width = b.sections[m].s1 - b.sections[m].s0;
    CHECK(per_section[m] == doctest::Approx(kPi * width / 2.0).epsilon(1e-12));
  }
}

TEST_CASE("log-term integrands are absorbed by poles at infinity") {
  geom::Boundary b = gallery::circle(0.0, 1.0);
  const cplx center(0.05, -0.1); // deep inside, >= 0.2 diameter from the curve
  std::vector<quad::WeightedPole> wp = {{cplx(1.6, 0.4), 3}};
  quad::RuleOptions opt;
  opt.epsilon = 1e-10;
  std::vector<cplx> centers = {center};
  quad::Rule r = quad::build_boundary_rule(b, wp, centers, opt);
  auto f = [&](double s, const geom::Boundary& bb) {
    const cplx z = bb.eval(s);
    const cplx phi = 1.0 / (wp[0].z - z);
    return std::log(std::abs(z - center)) * phi.real();
  };
  double got = 0.0;
  for (size_t k = 0; k < r.size(); ++k) got += r.w[k] * f(r.s[k], b);
  // Oracle in s with the section weight function lambda(s).
  double want = 0.0;
  for (const auto& sec : b.sections) {
    const double c = 0.5 * (sec.s0 + sec.s1), half = 0.5 * (sec.s1 - sec.s0);
    want += half * oracle::chebyshev_weighted([&](double t) { return f(c + half * t, b); }, 1e-15);
  }
  CHECK(std::abs(got - want) <= 1e-9 * std::max(1.0, std::abs(want)));
}
