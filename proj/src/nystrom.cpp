#include "laplacerf/nystrom.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "laplacerf/detail/adaptive.hpp"
#include "laplacerf/numerics.hpp"

namespace laprf::nystrom {

namespace {

// Double-layer kernel in parameter form, smooth on smooth curves:
//   k(sigma, tau) = Re[ (1/2 pi i) z'(sigma) / (z(sigma) - z(tau)) ],
// with the curvature limit on the diagonal.
double dl_kernel(const cplx& zs, const cplx& dzs, const cplx& zt, bool diagonal,
                 const cplx& ddzs) {
  if (!diagonal) {
    const cplx v = dzs / (zs - zt);
    return (v / cplx(0, 2.0 * kPi)).real();
  }
  const cplx v = ddzs / (2.0 * dzs);
  return (v / cplx(0, 2.0 * kPi)).real();
}

void check_smooth(const geom::Boundary& b) {
  for (int j = 0; j < b.num_contours; ++j) {
    auto [first, last] = b.contour_range(j);
    for (int m = first; m <= last; ++m) {
      const int next = m == last ? first : m + 1;
      const cplx d0 = b.sections[m].deriv_local(1.0) * (2.0 / (b.sections[m].s1 - b.sections[m].s0));
      const cplx d1 =
          b.sections[next].deriv_local(-1.0) * (2.0 / (b.sections[next].s1 - b.sections[next].s0));
      if (std::abs(d0 - d1) > 1e-6 * std::max(std::abs(d0), std::abs(d1)))
        throw std::invalid_argument("nystrom: contour parametrization is not smooth");
    }
  }
}

cplx second_deriv(const geom::Boundary& b, double s) {
  const int m = b.section_of(s);
  const auto& sec = b.sections[m];
  const double t = b.local_of_global(m, s);
  const double dtds = 2.0 / (sec.s1 - sec.s0);
  return sec.second_deriv_local(t) * dtds * dtds;
}

struct Nodes {
  std::vector<double> s, h; // node parameter and trapezoid weight (in s)
  std::vector<cplx> z, dz, ddz;
  std::vector<int> contour;
};

Nodes make_nodes(const geom::Boundary& b, int n) {
  // Distribute nodes per contour proportionally to parameter span (which is
  // arc length by construction), keeping counts even.
  Nodes nd;
  for (int j = 0; j < b.num_contours; ++j) {
    auto [first, last] = b.contour_range(j);
    const double s0 = b.sections[first].s0, s1 = b.sections[last].s1;
    int nj = b.num_contours == 1
                 ? n
                 : std::max(8, 2 * static_cast<int>(std::lround(n * (s1 - s0) / 2.0)));
    const double h = (s1 - s0) / nj;
    for (int i = 0; i < nj; ++i) {
      const double s = s0 + i * h;
      nd.s.push_back(s);
      nd.h.push_back(h);
      nd.z.push_back(b.eval(s));
      nd.dz.push_back(b.deriv(s));
      nd.ddz.push_back(second_deriv(b, s));
      nd.contour.push_back(j);
    }
  }
  return nd;
}

std::vector<double> sample_f(const geom::Boundary& b, const solver::BoundaryData& f,
                             const Nodes& nd) {
  std::vector<double> out(nd.s.size());
  for (size_t i = 0; i < nd.s.size(); ++i) {
    const cplx nrm = cplx(0, -1) * nd.dz[i] / std::abs(nd.dz[i]);
    out[i] = f(nd.s[i], nd.z[i], nrm, nd.contour[i]);
  }
  return out;
}

// Trigonometric upsampling of one contour's density.
std::vector<double> trig_upsample(std::span<const double> mu, int refine) {
  const int n = static_cast<int>(mu.size());
  const int nf = n * refine;
  std::vector<cplx> coef(n);
  for (int k = 0; k < n; ++k) {
    cplx acc = 0.0;
    for (int m = 0; m < n; ++m) acc += mu[m] * std::exp(cplx(0, -2.0 * kPi * k * m / n));
    coef[k] = acc / static_cast<double>(n);
  }
  std::vector<double> out(nf);
  for (int i = 0; i < nf; ++i) {
    const double x = static_cast<double>(i) / nf;
    cplx acc = coef[0];
    for (int k = 1; k <= n / 2; ++k) {
      const cplx ck = coef[k % n];
      const cplx cmk = coef[(n - k) % n];
      const double w = (2 * k == n) ? 0.5 : 1.0;
      acc += w * (ck * std::exp(cplx(0, 2.0 * kPi * k * x)) +
                  cmk * std::exp(cplx(0, -2.0 * kPi * k * x)));
    }
    out[i] = acc.real();
  }
  return out;
}

} // namespace

NystromSolution interior_dirichlet(const geom::Boundary& b, const solver::BoundaryData& f, int n) {
  if (b.num_contours != 1) throw std::invalid_argument("nystrom: single contour expected");
  if (n % 2 != 0) throw std::invalid_argument("nystrom: even node count expected");
  check_smooth(b);
  const Nodes nd = make_nodes(b, n);
  const int K = static_cast<int>(nd.s.size());
  Eigen::MatrixXd A(K, K);
  for (int i = 0; i < K; ++i)
    for (int j = 0; j < K; ++j)
      A(i, j) = (i == j ? 0.5 : 0.0) +
                nd.h[j] * dl_kernel(nd.z[j], nd.dz[j], nd.z[i], i == j, nd.ddz[j]);
  const std::vector<double> fv = sample_f(b, f, nd);
  Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(fv.data(), K);
  Eigen::VectorXd mu = A.partialPivLu().solve(rhs);

  NystromSolution sol;
  sol.boundary = b;
  sol.s = nd.s;
  sol.h = nd.h;
  sol.density.assign(mu.data(), mu.data() + K);
  sol.z = nd.z;
  sol.dz = nd.dz;
  sol.contour_of = nd.contour;
  return sol;
}

NystromSolution exterior_dirichlet(const geom::Boundary& b, const solver::BoundaryData& f, int n) {
  check_smooth(b);
  const Nodes nd = make_nodes(b, n);
  const int K = static_cast<int>(nd.s.size());
  const int J = b.num_contours;
  std::vector<cplx> centers(J);
  for (int j = 0; j < J; ++j) centers[j] = b.centroid(j);

  // Rows: exterior limit -mu/2 + K mu + sum a_j log|z-c_j| = f, then the
  // J zero-mean constraints and the bounded-at-infinity constraint.
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(K + J + 1, K + J);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(K + J + 1);
  const std::vector<double> fv = sample_f(b, f, nd);
  for (int i = 0; i < K; ++i) {
    for (int j = 0; j < K; ++j)
      A(i, j) = (i == j ? -0.5 : 0.0) +
                nd.h[j] * dl_kernel(nd.z[j], nd.dz[j], nd.z[i], i == j, nd.ddz[j]);
    for (int j = 0; j < J; ++j) A(i, K + j) = std::log(std::abs(nd.z[i] - centers[j]));
    rhs(i) = fv[i];
  }
  const double scale = 1.0;
  for (int j = 0; j < K; ++j) A(K + nd.contour[j], j) = scale * nd.h[j] * std::abs(nd.dz[j]);
  for (int j = 0; j < J; ++j) A(K + J, K + j) = scale;
  Eigen::VectorXd x = num::lsq_colpivot(A, rhs).x;

  NystromSolution sol;
  sol.boundary = b;
  sol.exterior = true;
  sol.s = nd.s;
  sol.h = nd.h;
  sol.density.assign(x.data(), x.data() + K);
  sol.z = nd.z;
  sol.dz = nd.dz;
  sol.contour_of = nd.contour;
  sol.log_centers = centers;
  sol.log_strengths.assign(x.data() + K, x.data() + K + J);
  return sol;
}

namespace {

struct FineGrid {
  std::vector<double> s, h, mu;
  std::vector<cplx> z, dz, ddz;
  std::vector<int> contour;
};

FineGrid upsample_all(const NystromSolution& sol, int refine) {
  FineGrid fg;
  const int K = static_cast<int>(sol.s.size());
  int start = 0;
  while (start < K) {
    int end = start;
    while (end < K && sol.contour_of[end] == sol.contour_of[start]) ++end;
    const int nj = end - start;
    const std::vector<double> fine =
        refine > 1 ? trig_upsample(std::span<const double>(sol.density).subspan(start, nj), refine)
                   : std::vector<double>(sol.density.begin() + start, sol.density.begin() + end);
    const double hf = sol.h[start] / refine;
    for (size_t i = 0; i < fine.size(); ++i) {
      const double s = sol.s[start] + hf * static_cast<double>(i);
      fg.s.push_back(s);
      fg.h.push_back(hf);
      fg.mu.push_back(fine[i]);
      fg.z.push_back(sol.boundary.eval(s));
      fg.dz.push_back(sol.boundary.deriv(s));
      fg.ddz.push_back(second_deriv(sol.boundary, s));
      fg.contour.push_back(sol.contour_of[start]);
    }
    start = end;
  }
  return fg;
}

double log_part(const NystromSolution& sol, cplx z) {
  double v = 0.0;
  for (size_t j = 0; j < sol.log_strengths.size(); ++j)
    v += sol.log_strengths[j] * std::log(std::abs(z - sol.log_centers[j]));
  return v;
}

} // namespace

std::vector<double> offboundary_eval(const NystromSolution& sol, std::span<const cplx> points,
                                     int refine) {
  const FineGrid fg = upsample_all(sol, refine);
  std::vector<double> out(points.size(), 0.0);
  for (size_t p = 0; p < points.size(); ++p) {
    double acc = 0.0;
    for (size_t i = 0; i < fg.s.size(); ++i)
      acc += fg.h[i] * fg.mu[i] * dl_kernel(fg.z[i], fg.dz[i], points[p], false, fg.ddz[i]);
    out[p] = acc + log_part(sol, points[p]);
  }
  return out;
}

double delta_e_max(const NystromSolution& sol, const geom::Boundary& b,
                   const solver::BoundaryData& f, int n_dense) {
  // On-boundary values through the refined collocation operator applied to
  // the trigonometrically upsampled density.
  const int K = static_cast<int>(sol.s.size());
  const int refine = std::max(1, n_dense / std::max(K, 1));
  const FineGrid fg = upsample_all(sol, refine);
  const double jump = sol.exterior ? -0.5 : 0.5;
  double max_err = 0.0;
  for (size_t i = 0; i < fg.s.size(); ++i) {
    double u = jump * fg.mu[i] + log_part(sol, fg.z[i]);
    for (size_t j = 0; j < fg.s.size(); ++j)
      u += fg.h[j] * fg.mu[j] * dl_kernel(fg.z[j], fg.dz[j], fg.z[i], i == j, fg.ddz[j]);
    const cplx nrm = cplx(0, -1) * fg.dz[i] / std::abs(fg.dz[i]);
    max_err = std::max(max_err, std::abs(u - f(fg.s[i], fg.z[i], nrm, fg.contour[i])));
  }
  double f2 = 0.0;
  for (int m = 0; m < static_cast<int>(b.sections.size()); ++m) {
    const auto& sec = b.sections[m];
    const int j = b.contour_of[m];
    f2 += detail::integrate(
        [&](double t) {
          const cplx dz = sec.deriv_local(t);
          const cplx nrm = cplx(0, -1) * dz / std::abs(dz);
          const double s = 0.5 * ((sec.s1 - sec.s0) * t + sec.s0 + sec.s1);
          const double fv = f(s, sec.eval_local(t), nrm, j);
          return fv * fv * std::abs(dz);
        },
        -1.0, 1.0, 1e-10);
  }
  const double denom = std::sqrt(f2 / b.total_length);
  return denom > 0 ? max_err / denom : max_err;
}

} // namespace laprf::nystrom
