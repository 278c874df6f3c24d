#include <doctest.h>

#include <random>

#include "laplacerf/numerics.hpp"

using namespace laprf;

TEST_CASE("lsq identity stack returns the data") {
  Eigen::MatrixXd A(6, 3);
  A << Eigen::MatrixXd::Identity(3, 3), Eigen::MatrixXd::Identity(3, 3);
  Eigen::VectorXd b(6);
  b << 1, 2, 3, 1, 2, 3;
  num::LsqResult r = num::lsq_colpivot(A, b);
  CHECK(r.rank == 3);
  CHECK((r.x - Eigen::Vector3d(1, 2, 3)).norm() < 1e-12);
}

TEST_CASE("lsq duplicated column is rank deficient but finite") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  Eigen::MatrixXd A(20, 4);
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 3; ++j) A(i, j) = g(rng);
  A.col(3) = A.col(1);
  Eigen::VectorXd b(20);
  for (int i = 0; i < 20; ++i) b(i) = g(rng);
  num::LsqResult r = num::lsq_colpivot(A, b);
  CHECK(r.rank == 3);
  CHECK(r.x.allFinite());
}

TEST_CASE("lsq matches extended-precision normal equations on a random system") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  Eigen::MatrixXd A(200, 50);
  Eigen::VectorXd b(200);
  for (int i = 0; i < 200; ++i) {
    for (int j = 0; j < 50; ++j) A(i, j) = g(rng);
    b(i) = g(rng);
  }
  num::LsqResult r = num::lsq_colpivot(A, b);
  // Normal equations in long double as the independent route.
  using LD = long double;
  Eigen::Matrix<LD, Eigen::Dynamic, Eigen::Dynamic> Al = A.cast<LD>();
  Eigen::Matrix<LD, Eigen::Dynamic, 1> xl =
      (Al.transpose() * Al).ldlt().solve(Al.transpose() * b.cast<LD>());
  CHECK((r.x.cast<LD>() - xl).norm() < 1e-10);
  // Residual orthogonality.
  CHECK((A.transpose() * (A * r.x - b)).norm() < 1e-10 * A.norm() * b.norm());
}

TEST_CASE("poly_roots basics") {
  std::vector<cplx> c = {-1.0, 0.0, 1.0}; // s^2 - 1
  std::vector<cplx> r = num::poly_roots(c);
  REQUIRE(r.size() == 2);
  CHECK(std::abs(r[0] + 1.0) < 1e-12);
  CHECK(std::abs(r[1] - 1.0) < 1e-12);

  // (s-3)^3: clustered roots within the usual sensitivity.
  std::vector<cplx> c3 = {-27.0, 27.0, -9.0, 1.0};
  for (const cplx& root : num::poly_roots(c3)) CHECK(std::abs(root - 3.0) < 1e-4);
}

TEST_CASE("poly_roots round-trips a random monic degree-12 polynomial") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<cplx> roots(12);
  for (auto& r : roots) r = cplx(u(rng), u(rng));
  std::vector<cplx> coeffs = {1.0};
  for (const cplx& r : roots) {
    std::vector<cplx> next(coeffs.size() + 1, 0.0);
    for (size_t i = 0; i < coeffs.size(); ++i) {
      next[i + 1] += coeffs[i];
      next[i] -= r * coeffs[i];
    }
    coeffs = next;
  }
  std::vector<cplx> got = num::poly_roots(coeffs);
  num::sort_roots(roots);
  REQUIRE(got.size() == roots.size());
  for (size_t i = 0; i < roots.size(); ++i) CHECK(std::abs(got[i] - roots[i]) < 1e-7);
}

TEST_CASE("conjugate-symmetric polynomials give conjugate-closed root sets") {
  std::vector<cplx> c = {2.0, -1.0, 0.5, 1.0}; // real coefficients
  std::vector<cplx> r = num::poly_roots(c);
  CHECK(num::enforce_conjugate_closure(r, 1e-10));
}

TEST_CASE("hessenberg_eigs") {
  Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(3, 3);
  D(0, 0) = cplx(1, 0);
  D(1, 1) = cplx(2, 1);
  D(2, 2) = cplx(-1, 0);
  std::vector<cplx> e = num::hessenberg_eigs(D);
  REQUIRE(e.size() == 3);
  CHECK(std::abs(e[0] - cplx(-1, 0)) < 1e-12);

  // Companion of s^2 - 1 in (rectangular) Hessenberg form with a zero update.
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(3, 2);
  H(0, 1) = 1.0;
  H(1, 0) = 1.0;
  H(2, 1) = 1.0; // subdiagonal entry H(N, N-1)
  Eigen::VectorXcd upd = Eigen::VectorXcd::Zero(2);
  std::vector<cplx> r = num::hessenberg_eigs(H, upd);
  REQUIRE(r.size() == 2);
  CHECK(std::abs(r[0] + 1.0) < 1e-12);
  CHECK(std::abs(r[1] - 1.0) < 1e-12);
}

TEST_CASE("cheb_roots spots interval zeros") {
  // T_3 has zeros at cos(pi/6), 0, -cos(pi/6).
  std::vector<cplx> c = {0.0, 0.0, 0.0, 1.0};
  std::vector<cplx> r = num::cheb_roots(c);
  REQUIRE(r.size() == 3);
  CHECK(std::abs(r[1]) < 1e-12);
  CHECK(std::abs(std::abs(r[0].real()) - std::sqrt(3.0) / 2.0) < 1e-12);
}
