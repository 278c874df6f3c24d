#include "laplacerf/cluster.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <future>
#include <random>
#include <stdexcept>
#include <thread>

#include "laplacerf/numerics.hpp"

namespace laprf::cluster {

std::vector<int> kmeans(const std::vector<cplx>& points, int k, std::uint64_t seed, int max_iter) {
  const int n = static_cast<int>(points.size());
  if (k < 1 || k > n) throw std::invalid_argument("kmeans: need 1 <= k <= n");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);

  // k-means++ seeding.
  std::vector<cplx> centers;
  centers.push_back(points[static_cast<size_t>(uni(rng) * n) % n]);
  std::vector<double> d2(n);
  while (static_cast<int>(centers.size()) < k) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      double best = 1e300;
      for (const cplx& c : centers) best = std::min(best, std::norm(points[i] - c));
      d2[i] = best;
      total += best;
    }
    double pick = uni(rng) * total;
    int chosen = n - 1;
    for (int i = 0; i < n; ++i) {
      pick -= d2[i];
      if (pick <= 0) {
        chosen = i;
        break;
      }
    }
    centers.push_back(points[chosen]);
  }

  std::vector<int> assign(n, -1);
  for (int iter = 0; iter < max_iter; ++iter) {
    bool changed = false;
    for (int i = 0; i < n; ++i) {
      int best = 0;
      double bestd = 1e300;
      for (int c = 0; c < k; ++c) {
        const double d = std::norm(points[i] - centers[c]);
        if (d < bestd) {
          bestd = d;
          best = c;
        }
      }
      if (assign[i] != best) {
        assign[i] = best;
        changed = true;
      }
    }
    std::vector<cplx> sum(k, 0.0);
    std::vector<int> cnt(k, 0);
    for (int i = 0; i < n; ++i) {
      sum[assign[i]] += points[i];
      ++cnt[assign[i]];
    }
    for (int c = 0; c < k; ++c) {
      if (cnt[c] == 0) {
        // Reseed an empty cluster at the point farthest from its center.
        int far = 0;
        double fard = -1.0;
        for (int i = 0; i < n; ++i) {
          const double d = std::norm(points[i] - centers[assign[i]]);
          if (d > fard) {
            fard = d;
            far = i;
          }
        }
        centers[c] = points[far];
        changed = true;
      } else {
        centers[c] = sum[c] / static_cast<double>(cnt[c]);
      }
    }
    if (!changed) break;
  }
  return assign;
}

ClusterPlan plan_with_buffers(const std::vector<cplx>& curve_centroids, int k,
                              std::uint64_t seed) {
  const int n = static_cast<int>(curve_centroids.size());
  ClusterPlan plan;
  plan.k = k;
  plan.assignment = kmeans(curve_centroids, k, seed);
  plan.members.resize(k);
  plan.buffers.resize(k);
  for (int i = 0; i < n; ++i) plan.members[plan.assignment[i]].push_back(i);
  plan.centroids.resize(k);
  for (int c = 0; c < k; ++c) {
    cplx s = 0.0;
    for (int i : plan.members[c]) s += curve_centroids[i];
    plan.centroids[c] = plan.members[c].empty() ? cplx(0) : s / cplx(double(plan.members[c].size()));
  }
  plan.buffer_radius.resize(n);
  for (int i = 0; i < n; ++i) {
    double nearest = 1e300;
    for (int j = 0; j < n; ++j)
      if (j != i) nearest = std::min(nearest, std::abs(curve_centroids[i] - curve_centroids[j]));
    plan.buffer_radius[i] = 2.0 * nearest;
  }
  for (int c = 0; c < k; ++c) {
    for (int i = 0; i < n; ++i) {
      if (plan.assignment[i] == c) continue;
      bool close = false;
      for (int m : plan.members[c]) {
        if (std::abs(curve_centroids[i] - curve_centroids[m]) < plan.buffer_radius[m]) {
          close = true;
          break;
        }
      }
      if (close) plan.buffers[c].push_back(i);
    }
  }
  return plan;
}

namespace {

int thread_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("LAPLACE_RF_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

geom::Boundary sub_boundary(const geom::Boundary& b, const std::vector<int>& curves,
                            std::vector<int>* global_of) {
  std::vector<geom::RationalSection> secs;
  std::vector<int> contour_of;
  int local = 0;
  for (int curve : curves) {
    auto [first, last] = b.contour_range(curve);
    for (int m = first; m <= last; ++m) {
      secs.push_back(b.sections[m]);
      contour_of.push_back(local);
    }
    global_of->push_back(curve);
    ++local;
  }
  return geom::make_boundary(std::move(secs), std::move(contour_of));
}

} // namespace

LargeSolution solve_large(solver::Kind kind, const geom::Boundary& b,
                          const solver::BoundaryData& data, const LargeOptions& opts) {
  if (kind == solver::Kind::InteriorDirichlet)
    throw std::invalid_argument("solve_large: exterior problems only");
  const auto t_start = std::chrono::steady_clock::now();
  const int n_curves = b.num_contours;

  std::vector<cplx> centroids(n_curves);
  for (int j = 0; j < n_curves; ++j) centroids[j] = b.centroid(j);

  LargeSolution out;
  LargeReport& rep = out.report;
  rep.plan = plan_with_buffers(centroids, opts.k, opts.seed);
  rep.local_delta_e.assign(opts.k, 0.0);

  // Cluster-local pole optimization, in parallel; poles inside buffer
  // curves are discarded from the merged set.
  std::vector<std::vector<cplx>> cluster_poles(opts.k);
  auto run_cluster = [&](int c) {
    std::vector<int> curves = rep.plan.members[c];
    const size_t n_members = curves.size();
    curves.insert(curves.end(), rep.plan.buffers[c].begin(), rep.plan.buffers[c].end());
    std::vector<int> global_of;
    geom::Boundary local = sub_boundary(b, curves, &global_of);
    solver::ProblemSpec spec;
    spec.kind = kind;
    spec.boundary = local;
    spec.data = [&data, global_of](double s, cplx z, cplx nrm, int jlocal) {
      return data(s, z, nrm, global_of[jlocal]);
    };
    spec.n_poles = opts.poles_per_curve * static_cast<int>(curves.size());
    spec.tol = opts.local_tol;
    spec.max_iter = opts.local_max_iter;
    solver::Solution sol = solver::solve(spec);
    rep.local_delta_e[c] = sol.report.delta_e;
    std::vector<cplx> keep;
    for (const cplx& zp : sol.model.poles) {
      bool onb = false;
      const std::vector<double> w = geom::winding_numbers(local, zp, &onb);
      if (onb) continue;
      for (size_t jl = 0; jl < n_members; ++jl) {
        if (std::abs(w[jl] - 1.0) < 0.5) {
          keep.push_back(zp);
          break;
        }
      }
    }
    cluster_poles[c] = std::move(keep);
  };

  const int workers = thread_count(opts.threads);
  std::atomic<int> next{0};
  std::vector<std::future<void>> pool;
  for (int t = 0; t < std::min(workers, opts.k); ++t) {
    pool.push_back(std::async(std::launch::async, [&] {
      for (int c = next.fetch_add(1); c < opts.k; c = next.fetch_add(1)) run_cluster(c);
    }));
  }
  for (auto& f : pool) f.get();

  std::vector<cplx> poles;
  for (int c = 0; c < opts.k; ++c)
    poles.insert(poles.end(), cluster_poles[c].begin(), cluster_poles[c].end());

  // One global least-squares solve with the merged poles.
  basis::PoleSet set;
  set.poles = poles;
  set.side.assign(poles.size(), geom::DomainSide::Outside);

  std::vector<cplx> log_centers = solver::default_log_centers(b);
  quad::RuleOptions ropt;
  std::vector<quad::WeightedPole> wp(poles.size());
  for (size_t i = 0; i < poles.size(); ++i) wp[i] = {poles[i], 3};
  const quad::Rule rule = quad::build_boundary_rule(b, wp, log_centers, ropt);

  Eigen::VectorXd x;
  double rhs_norm = 0.0, resid_norm = 0.0;
  if (kind == solver::Kind::ExteriorNeumann) {
    solver::NeumannPreprocess pre = solver::neumann_preprocess(b, data, log_centers);
    if (pre.compat_residual > 1e-10)
      throw std::invalid_argument("solve_large: incompatible Neumann data");
    std::vector<double> F(rule.size());
    for (size_t k = 0; k < rule.size(); ++k) {
      const int m = rule.section_of[k];
      F[k] = pre.F_at(b, m, b.local_of_global(m, rule.s[k]));
    }
    basis::Assembled sys = basis::assemble_neumann(rule, set, F, b.num_contours);
    num::LsqResult sol = num::lsq_colpivot(sys.A, sys.rhs);
    x = sol.x;
    rhs_norm = sys.rhs.norm();
    resid_norm = sol.residual_norm;
    std::vector<double> strengths(pre.A.size());
    for (size_t j = 0; j < pre.A.size(); ++j) strengths[j] = -pre.A[j];
    out.model = basis::neumann_model(sys, x, strengths, log_centers);
    rep.recovered_A = pre.A;
    rep.rows = static_cast<int>(sys.A.rows());
    rep.cols = static_cast<int>(sys.A.cols());
  } else {
    std::vector<double> f(rule.size());
    for (size_t k = 0; k < rule.size(); ++k) {
      const cplx nrm = cplx(0, -1) * rule.dz[k] / std::abs(rule.dz[k]);
      f[k] = data(rule.s[k], rule.z[k], nrm, rule.contour_of[k]);
    }
    basis::Assembled sys = basis::assemble_dirichlet(rule, set, f, log_centers);
    num::LsqResult sol = num::lsq_colpivot(sys.A, sys.rhs);
    x = sol.x;
    rhs_norm = sys.rhs.norm();
    resid_norm = sol.residual_norm;
    out.model = basis::dirichlet_model(sys, x, log_centers);
    rep.recovered_A = out.model.log_coeffs;
    rep.rows = static_cast<int>(sys.A.rows());
    rep.cols = static_cast<int>(sys.A.cols());
  }
  rep.global_delta_e = rhs_norm > 0 ? resid_norm / rhs_norm : resid_norm;
  rep.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return out;
}

void dump_plan_csv(const ClusterPlan& plan, const std::string& path) {
  std::ofstream outf(path);
  if (!outf) throw std::runtime_error("cannot write " + path);
  outf << "curve,cluster,is_buffer_of\n";
  const int n = static_cast<int>(plan.assignment.size());
  for (int i = 0; i < n; ++i) {
    outf << i << ',' << plan.assignment[i] << ',';
    bool firstb = true;
    for (int c = 0; c < plan.k; ++c) {
      if (std::find(plan.buffers[c].begin(), plan.buffers[c].end(), i) != plan.buffers[c].end()) {
        if (!firstb) outf << ';';
        outf << c;
        firstb = false;
      }
    }
    outf << '\n';
  }
}

} // namespace laprf::cluster
