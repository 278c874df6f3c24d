#include "laplacerf/ratfit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "laplacerf/numerics.hpp"

namespace laprf::ratfit {

namespace {

constexpr double kAtInfinityFactor = 1e6;

// Entrywise sqrt(lambda_k)/Qhat(z_k) with a common scale removed; products
// over many poles can overflow, so accumulate log-magnitude and phase.
Eigen::VectorXcd weighted_inverse_qhat(const quad::Rule& rule, std::span<const cplx> poles) {
  const size_t K = rule.size();
  Eigen::VectorXd logmag(K);
  Eigen::VectorXd phase(K);
  for (size_t k = 0; k < K; ++k) {
    double lm = 0.0, ph = 0.0;
    for (const cplx& p : poles) {
      const cplx d = p - rule.z[k];
      lm += std::log(std::abs(d));
      ph += std::arg(d);
    }
    logmag(k) = lm;
    phase(k) = ph;
  }
  const double lmin = poles.empty() ? 0.0 : logmag.minCoeff();
  Eigen::VectorXcd d(K);
  for (size_t k = 0; k < K; ++k)
    d(k) = std::sqrt(rule.w[k]) * std::exp(cplx(-(logmag(k) - lmin), -phase(k)));
  return d;
}

// Arnoldi on the diagonal node matrix: orthonormal basis for
// span{d, Z d, ..., Z^order d} with the rectangular Hessenberg H.
struct ArnoldiResult {
  Eigen::MatrixXcd V; // K x (steps+1)
  Eigen::MatrixXcd H; // (steps+1) x steps
  int steps = 0;      // may stop early on breakdown
};

ArnoldiResult arnoldi(const Eigen::VectorXcd& nodes, const Eigen::VectorXcd& d, int order) {
  const Eigen::Index K = d.size();
  ArnoldiResult r;
  r.V.resize(K, order + 1);
  r.H = Eigen::MatrixXcd::Zero(order + 1, order);
  const double d0 = d.norm();
  if (d0 == 0.0) {
    r.steps = 0;
    r.V.col(0).setZero();
    return r;
  }
  r.V.col(0) = d / d0;
  for (int j = 0; j < order; ++j) {
    Eigen::VectorXcd w = nodes.cwiseProduct(r.V.col(j));
    const double wnorm0 = w.norm();
    for (int pass = 0; pass < 2; ++pass) { // MGS with one reorthogonalization
      for (int i = 0; i <= j; ++i) {
        const cplx h = r.V.col(i).dot(w); // conjugated dot
        w -= h * r.V.col(i);
        r.H(i, j) += h;
      }
    }
    const double hn = w.norm();
    if (hn <= 1e-14 * std::max(1.0, wnorm0)) {
      r.steps = j;
      r.V.conservativeResize(K, j + 1);
      r.H.conservativeResize(j + 1, j);
      return r;
    }
    r.H(j + 1, j) = hn;
    r.V.col(j + 1) = w / hn;
  }
  r.steps = order;
  return r;
}

void clean_roots(std::vector<cplx>& roots, double scale, int* dropped) {
  int drop = 0;
  std::vector<cplx> out;
  for (const cplx& r : roots) {
    if (!std::isfinite(r.real()) || !std::isfinite(r.imag()) ||
        std::abs(r) > kAtInfinityFactor * std::max(scale, 1e-300)) {
      ++drop;
      continue;
    }
    out.push_back(r);
  }
  num::enforce_conjugate_closure(out, 1e-9 * std::max(scale, 1e-300));
  num::sort_roots(out);
  roots = std::move(out);
  if (dropped) *dropped = drop;
}

} // namespace

FitResult vf_step(const FitInput& in) {
  FitResult res;
  res.basis_used = 'V';
  const int M = static_cast<int>(in.poles.size());
  res.effective_order = M;
  if (M == 0) {
    res.switch_to_irf = true;
    return res;
  }
  // Lagrange basis needs pairwise-distinct poles.
  for (int i = 0; i < M; ++i)
    for (int j = i + 1; j < M; ++j)
      if (std::abs(in.poles[i] - in.poles[j]) <= 1e-12 * in.scale) {
        res.switch_to_irf = true;
        return res;
      }

  const quad::Rule& rule = *in.rule;
  const size_t K = rule.size();
  if (K < 2 * static_cast<size_t>(M) + 2) throw std::invalid_argument("vf_step: K < 2N+2");

  // Columns: p_0..p_M over [1, 1/(z'_n - z)], q_1..q_M over -What/(z'_n - z);
  // the fixed monic q_0 = 1 term moves to the right-hand side.
  Eigen::MatrixXcd A(K, 2 * M + 1);
  Eigen::VectorXcd b(K);
  for (size_t k = 0; k < K; ++k) {
    const double sw = std::sqrt(rule.w[k]);
    A(k, 0) = sw;
    for (int n = 0; n < M; ++n) {
      const cplx g = 1.0 / (in.poles[n] - rule.z[k]);
      A(k, 1 + n) = sw * g;
      A(k, 1 + M + n) = -sw * in.samples[k] * g;
    }
    b(k) = sw * in.samples[k];
  }
  num::LsqResultC sol = num::lsq_colpivot(A, b);
  res.rcond = sol.rcond;
  res.residual_norm = sol.residual_norm;
  if (sol.rcond < 1e-15) {
    res.switch_to_irf = true;
    return res;
  }
  Eigen::VectorXcd q = sol.x.tail(M);
  const double qn = q.norm();
  if (qn <= 1e-13 * (1.0 + sol.x.head(M + 1).norm())) {
    res.degenerate = true; // Q/Qhat == 1, no finite zeros
    return res;
  }
  // Zeros of 1 + sum q_n/(z'_n - z): diagonal plus rank one.
  Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(M, M);
  for (int n = 0; n < M; ++n) C(n, n) = in.poles[n];
  C += Eigen::VectorXcd::Ones(M) * q.transpose();
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C, false);
  res.new_poles.assign(es.eigenvalues().data(), es.eigenvalues().data() + M);
  clean_roots(res.new_poles, in.scale, &res.dropped_at_infinity);
  return res;
}

FitResult irf_step(const FitInput& in) {
  FitResult res;
  res.basis_used = 'I';
  const quad::Rule& rule = *in.rule;
  const size_t K = rule.size();
  const int N = in.order;
  if (K < 2 * static_cast<size_t>(N) + 2) throw std::invalid_argument("irf_step: K < 2N+2");

  Eigen::VectorXcd nodes(K);
  for (size_t k = 0; k < K; ++k) nodes(k) = rule.z[k];
  const Eigen::VectorXcd d = weighted_inverse_qhat(rule, in.poles);
  Eigen::VectorXcd dw(K);
  for (size_t k = 0; k < K; ++k) dw(k) = d(k) * in.samples[k];

  ArnoldiResult ap = arnoldi(nodes, d, N);
  ArnoldiResult aq = arnoldi(nodes, dw, N);
  const int n_eff = std::min(ap.steps, aq.steps);
  res.effective_order = n_eff;
  if (n_eff < 1) {
    res.degenerate = true;
    return res;
  }
  if (n_eff < N) { // breakdown: refit at the reduced order
    ap = arnoldi(nodes, d, n_eff);
    aq = arnoldi(nodes, dw, n_eff);
  }

  // [P, -Q_{0..n-1}] c = Q_n, monic top-degree Q coefficient.
  Eigen::MatrixXcd A(K, 2 * n_eff + 1);
  A.leftCols(n_eff + 1) = ap.V;
  A.rightCols(n_eff) = -aq.V.leftCols(n_eff);
  num::LsqResultC sol = num::lsq_colpivot(A, aq.V.col(n_eff));
  res.rcond = sol.rcond;
  res.residual_norm = sol.residual_norm;
  const Eigen::VectorXcd cq = sol.x.tail(n_eff);
  res.new_poles = num::hessenberg_eigs(aq.H, cq);
  clean_roots(res.new_poles, in.scale, &res.dropped_at_infinity);
  return res;
}

FitResult relocate(const FitInput& in, double switch_rcond_threshold) {
  FitResult res;
  const bool order_matches = static_cast<int>(in.poles.size()) == in.order;
  if (order_matches) {
    res = vf_step(in);
    if (!res.switch_to_irf && res.rcond >= switch_rcond_threshold &&
        (!res.new_poles.empty() || res.degenerate))
      return res;
  }
  FitResult ires = irf_step(in);
  if (ires.new_poles.empty() && !ires.degenerate) {
    // Both paths failed: keep the previous poles and flag the stall.
    res = std::move(ires);
    res.new_poles = in.poles;
    res.degenerate = true;
    return res;
  }
  return ires;
}

InitialPoles initial_poles(const geom::Boundary& b, const quad::Rule& rule,
                           std::span<const cplx> f_samples, int N,
                           const std::function<geom::DomainSide(cplx)>& classify) {
  if (N < 1) throw std::invalid_argument("initial_poles: N must be >= 1");
  FitInput fin;
  fin.rule = &rule;
  fin.samples.assign(f_samples.begin(), f_samples.end());
  fin.order = 2 * N;
  fin.scale = b.diameter();

  InitialPoles out;
  FitResult fit = irf_step(fin);
  std::vector<cplx> zeros = fit.new_poles;

  double fmax = 0.0;
  for (const cplx& v : f_samples) fmax = std::max(fmax, std::abs(v));
  if (zeros.empty() || fmax == 0.0) {
    // Degenerate data: ring of poles on the exterior side.
    const cplx c = b.centroid(0);
    for (int k = 0; k < N; ++k) {
      const double ang = 2.0 * kPi * (k + 0.5) / N;
      out.poles.push_back(c + 2.0 * b.diameter() * std::exp(cplx(0, ang)));
    }
    out.fallback_ring = true;
  } else {
    // Residues of the 2N fit rank the zeros.
    const size_t K = rule.size();
    const int Z = static_cast<int>(zeros.size());
    Eigen::MatrixXcd A(K, Z + 1);
    Eigen::VectorXcd rhs(K);
    for (size_t k = 0; k < K; ++k) {
      const double sw = std::sqrt(rule.w[k]);
      A(k, 0) = sw;
      for (int i = 0; i < Z; ++i) A(k, 1 + i) = sw / (zeros[i] - rule.z[k]);
      rhs(k) = sw * f_samples[k];
    }
    const Eigen::VectorXcd coef = num::lsq_colpivot(A, rhs).x;
    std::vector<int> idx(Z);
    for (int i = 0; i < Z; ++i) idx[i] = i;
    std::vector<geom::DomainSide> sides(Z);
    for (int i = 0; i < Z; ++i) sides[i] = classify(zeros[i]);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int c) {
      const bool ua = sides[a] == geom::DomainSide::Outside;
      const bool uc = sides[c] == geom::DomainSide::Outside;
      if (ua != uc) return ua; // outside-domain zeros first
      return std::abs(coef(1 + a)) > std::abs(coef(1 + c));
    });
    for (int i = 0; i < std::min(N, Z); ++i) out.poles.push_back(zeros[idx[i]]);
    if (static_cast<int>(out.poles.size()) < N) {
      const cplx c = b.centroid(0);
      while (static_cast<int>(out.poles.size()) < N) {
        const double ang = 2.0 * kPi * (out.poles.size() + 0.5) / N;
        out.poles.push_back(c + 2.0 * b.diameter() * std::exp(cplx(0, ang)));
        out.fallback_ring = true;
      }
    }
  }
  out.side.resize(out.poles.size());
  for (size_t i = 0; i < out.poles.size(); ++i) out.side[i] = classify(out.poles[i]);
  return out;
}

} // namespace laprf::ratfit
