#include "laplacerf/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace laprf::num {

namespace {

template <class Mat, class Vec, class Res>
Res lsq_impl(const Mat& A, const Vec& b, double rtol) {
  if (A.rows() == 0 || A.cols() == 0) throw std::invalid_argument("lsq_colpivot: empty matrix");
  if (A.rows() < A.cols()) throw std::invalid_argument("lsq_colpivot: need rows >= cols");
  if (rtol < 0) rtol = std::numeric_limits<double>::epsilon() * std::max(A.rows(), A.cols());
  Eigen::ColPivHouseholderQR<Mat> qr(A);
  qr.setThreshold(rtol);
  Res r;
  r.x = qr.solve(b);
  r.rank = qr.rank();
  const auto& R = qr.matrixR();
  const double r00 = std::abs(R(0, 0));
  double rkk = r00;
  for (Eigen::Index k = 1; k < std::min(R.rows(), R.cols()); ++k) {
    const double d = std::abs(R(k, k));
    if (d <= rtol * r00) break;
    rkk = d;
  }
  r.rcond = r00 > 0 ? rkk / r00 : 0.0;
  r.residual_norm = (A * r.x - b).norm();
  return r;
}

Eigen::MatrixXcd companion(std::span<const cplx> c) {
  // c ascending, leading coefficient c.back() nonzero.
  const int n = static_cast<int>(c.size()) - 1;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 1; i < n; ++i) m(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) m(i, n - 1) = -c[i] / c[n];
  return m;
}

std::vector<cplx> eigs_of(Eigen::MatrixXcd m) {
  balance_in_place(m);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigenvalue iteration failed");
  std::vector<cplx> out(es.eigenvalues().data(), es.eigenvalues().data() + m.rows());
  sort_roots(out);
  return out;
}

size_t trim_leading(std::span<const cplx> c) {
  double cmax = 0.0;
  for (const cplx& v : c) cmax = std::max(cmax, std::abs(v));
  if (cmax == 0.0) throw std::invalid_argument("poly_roots: zero polynomial");
  size_t n = c.size();
  while (n > 1 && std::abs(c[n - 1]) <= 1e-14 * cmax) --n;
  return n;
}

} // namespace

LsqResult lsq_colpivot(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, double rtol) {
  return lsq_impl<Eigen::MatrixXd, Eigen::VectorXd, LsqResult>(A, b, rtol);
}

LsqResultC lsq_colpivot(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& b, double rtol) {
  return lsq_impl<Eigen::MatrixXcd, Eigen::VectorXcd, LsqResultC>(A, b, rtol);
}

void balance_in_place(Eigen::MatrixXcd& m) {
  // Parlett-Reinsch: scale row/column pairs by powers of two until the
  // 1-norms are roughly balanced.
  const Eigen::Index n = m.rows();
  bool converged = false;
  while (!converged) {
    converged = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double c = 0, r = 0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(m(j, i));
        r += std::abs(m(i, j));
      }
      if (c == 0 || r == 0) continue;
      double f = 1.0;
      const double s = c + r;
      while (c < r / 2.0) {
        c *= 2.0;
        r /= 2.0;
        f *= 2.0;
      }
      while (c >= r * 2.0) {
        c /= 2.0;
        r *= 2.0;
        f /= 2.0;
      }
      if (c + r < 0.95 * s) {
        converged = false;
        m.col(i) *= f;
        m.row(i) /= f;
      }
    }
  }
}

std::vector<cplx> poly_roots(std::span<const cplx> c) {
  const size_t n = trim_leading(c);
  if (n == 1) throw std::invalid_argument("poly_roots: degree must be >= 1");
  return eigs_of(companion(c.subspan(0, n)));
}

std::vector<cplx> cheb_roots(std::span<const cplx> cin) {
  const size_t n = trim_leading(cin);
  if (n == 1) throw std::invalid_argument("cheb_roots: degree must be >= 1");
  std::span<const cplx> c = cin.subspan(0, n);
  const int deg = static_cast<int>(n) - 1;
  if (deg == 1) return {-c[0] / c[1]};
  // Colleague matrix: the multiply-by-t recurrence of T_k with T_deg
  // eliminated through the polynomial, perturbing the last row.
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(deg, deg);
  m(0, 1) = 1.0;
  for (int k = 1; k < deg - 1; ++k) {
    m(k, k - 1) = 0.5;
    m(k, k + 1) = 0.5;
  }
  for (int j = 0; j < deg; ++j) m(deg - 1, j) = -0.5 * c[j] / c[deg];
  m(deg - 1, deg - 2) += 0.5;
  return eigs_of(std::move(m));
}

std::vector<cplx> hessenberg_eigs(const Eigen::MatrixXcd& H,
                                  const std::optional<Eigen::VectorXcd>& rank_one_update) {
  if (!rank_one_update) {
    if (H.rows() != H.cols()) throw std::invalid_argument("hessenberg_eigs: square matrix required");
    return eigs_of(H);
  }
  const Eigen::Index n = H.cols();
  if (H.rows() != n + 1) throw std::invalid_argument("hessenberg_eigs: expected (N+1) x N Hessenberg");
  if (rank_one_update->size() != n) throw std::invalid_argument("hessenberg_eigs: update size mismatch");
  Eigen::MatrixXcd C = H.topRows(n);
  C.col(n - 1) -= H(n, n - 1) * (*rank_one_update);
  return eigs_of(std::move(C));
}

void sort_roots(std::vector<cplx>& roots) {
  std::sort(roots.begin(), roots.end(), [](const cplx& a, const cplx& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
}

bool enforce_conjugate_closure(std::vector<cplx>& roots, double tol) {
  std::vector<cplx> out = roots;
  std::vector<bool> used(out.size(), false);
  for (size_t i = 0; i < out.size(); ++i) {
    if (used[i]) continue;
    if (std::abs(out[i].imag()) <= tol) {
      out[i] = cplx(out[i].real(), 0.0);
      used[i] = true;
      continue;
    }
    size_t best = out.size();
    double bestd = tol;
    for (size_t j = i + 1; j < out.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(out[j] - std::conj(out[i]));
      if (d <= bestd) {
        bestd = d;
        best = j;
      }
    }
    if (best == out.size()) return false;
    const cplx z = 0.5 * (out[i] + std::conj(out[best]));
    out[i] = z;
    out[best] = std::conj(z);
    used[i] = used[best] = true;
  }
  roots = std::move(out);
  return true;
}

} // namespace laprf::num
