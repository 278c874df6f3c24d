#include "laplacerf/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <stdexcept>

#include "laplacerf/chebyshev.hpp"
#include "laplacerf/detail/adaptive.hpp"
#include "laplacerf/kernels.hpp"
#include "laplacerf/numerics.hpp"
#include "laplacerf/ratfit.hpp"

namespace laprf::solver {

namespace {

cplx rational_value(const basis::PotentialModel& m, cplx z) {
  cplx w = 0.0;
  for (size_t n = 0; n < m.poles.size(); ++n) w += m.residues[n] / (m.poles[n] - z);
  return w;
}

double dn_log(cplx z, cplx normal, cplx center) {
  const cplx d = z - center;
  return (std::conj(normal) * d).real() / std::norm(d);
}

} // namespace

cplx outward_normal(const geom::Boundary& b, double s) {
  const cplx d = b.deriv(s);
  return cplx(0, -1) * d / std::abs(d);
}

geom::DomainSide classify_for_problem(Kind kind, const geom::Boundary& b, cplx z) {
  const geom::DomainSide g = geom::point_in_domain(b, z);
  if (g == geom::DomainSide::OnBoundary) return geom::DomainSide::Inside;
  if (kind == Kind::InteriorDirichlet) return g;
  return g == geom::DomainSide::Inside ? geom::DomainSide::Outside : geom::DomainSide::Inside;
}

std::vector<cplx> default_log_centers(const geom::Boundary& b) {
  std::vector<cplx> centers;
  for (int j = 0; j < b.num_contours; ++j) {
    cplx c = b.centroid(j);
    bool onb = false;
    std::vector<double> w = geom::winding_numbers(b, c, &onb);
    if (!onb && std::abs(w[j] - 1.0) < 0.5) {
      centers.push_back(c);
      continue;
    }
    // Nonconvex contour: probe chords between boundary samples and keep the
    // interior point farthest from the samples.
    auto [first, last] = b.contour_range(j);
    std::vector<cplx> samples;
    for (int m = first; m <= last; ++m)
      for (int i = 0; i < 16; ++i)
        samples.push_back(b.sections[m].eval_local(-1.0 + (2.0 * i + 1.0) / 16.0));
    cplx best = c;
    double best_clear = -1.0;
    for (size_t a = 0; a < samples.size(); ++a) {
      for (size_t d = a + samples.size() / 3; d < samples.size(); d += samples.size() / 7 + 1) {
        const cplx mid = 0.5 * (samples[a] + samples[d]);
        bool mid_onb = false;
        std::vector<double> wm = geom::winding_numbers(b, mid, &mid_onb);
        if (mid_onb || std::abs(wm[j] - 1.0) > 0.5) continue;
        double clear = 1e300;
        for (const cplx& q : samples) clear = std::min(clear, std::abs(mid - q));
        if (clear > best_clear) {
          best_clear = clear;
          best = mid;
        }
      }
    }
    if (best_clear < 0)
      throw std::runtime_error("default_log_centers: no interior point found for contour");
    centers.push_back(best);
  }
  return centers;
}

NeumannPreprocess neumann_preprocess(const geom::Boundary& b, const BoundaryData& data,
                                     std::span<const cplx> log_centers) {
  NeumannPreprocess pre;
  pre.log_centers.assign(log_centers.begin(), log_centers.end());
  const int J = b.num_contours;
  std::vector<double> flux(J, 0.0);
  double flux_abs = 0.0;
  for (int m = 0; m < static_cast<int>(b.sections.size()); ++m) {
    const auto& sec = b.sections[m];
    const int j = b.contour_of[m];
    auto fds = [&](double t) {
      const cplx dz = sec.deriv_local(t);
      const cplx nrm = cplx(0, -1) * dz / std::abs(dz);
      const double s = 0.5 * ((sec.s1 - sec.s0) * t + sec.s0 + sec.s1);
      return data(s, sec.eval_local(t), nrm, j) * std::abs(dz);
    };
    flux[j] += detail::integrate(fds, -1.0, 1.0, 1e-12);
    flux_abs += detail::integrate([&](double t) { return std::abs(fds(t)); }, -1.0, 1.0, 1e-9);
  }
  pre.A.resize(J);
  double total = 0.0;
  for (int j = 0; j < J; ++j) {
    pre.A[j] = -flux[j] / (2.0 * kPi);
    total += flux[j];
  }
  pre.compat_residual = std::abs(total) / std::max(1.0, flux_abs);

  // Log-corrected data integrates to zero around each contour, so the
  // arc-length antiderivative F closes; build it per section and chain.
  auto f_tilde = [&](const geom::RationalSection& sec, int j, double t) {
    const cplx z = sec.eval_local(t);
    const cplx dz = sec.deriv_local(t);
    const cplx nrm = cplx(0, -1) * dz / std::abs(dz);
    const double s = 0.5 * ((sec.s1 - sec.s0) * t + sec.s0 + sec.s1);
    double v = data(s, z, nrm, j);
    for (size_t i = 0; i < pre.log_centers.size(); ++i)
      v += pre.A[i] * dn_log(z, nrm, pre.log_centers[i]);
    return v * std::abs(dz);
  };
  pre.F_sections.resize(b.sections.size());
  for (int j = 0; j < J; ++j) {
    auto [first, last] = b.contour_range(j);
    double carry = 0.0;
    for (int m = first; m <= last; ++m) {
      const auto& sec = b.sections[m];
      std::vector<cplx> g = cheb::fit([&](double t) { return cplx(f_tilde(sec, j, t)); }, 1e-13);
      std::vector<cplx> F = cheb::antiderivative(g);
      F[0] += carry; // F(-1) = carry
      pre.F_sections[m] = F;
      carry = cheb::eval(pre.F_sections[m], 1.0).real();
    }
  }
  return pre;
}

double NeumannPreprocess::F_at(const geom::Boundary& b, int section, double t) const {
  (void)b;
  return cheb::eval(F_sections[section], t).real();
}

double delta_e(const basis::PotentialModel& m, const quad::Rule& rule,
               std::span<const double> f_samples, bool* absolute_flag) {
  const size_t K = rule.size();
  std::vector<double> x(K), y(K), u(K), v(K);
  for (size_t k = 0; k < K; ++k) {
    x[k] = rule.z[k].real();
    y[k] = rule.z[k].imag();
  }
  m.eval_many(x, y, u, v);
  double num = 0.0, den = 0.0;
  kernels::weighted_sq_norms(u.data(), f_samples.data(), rule.w.data(), K, &num, &den);
  if (absolute_flag) *absolute_flag = den == 0.0;
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

double delta_e_max(const basis::PotentialModel& m, const geom::Boundary& b,
                   const BoundaryData& data, int n_dense) {
  std::vector<double> x(n_dense), y(n_dense), u(n_dense), v(n_dense), f(n_dense);
  for (int i = 0; i < n_dense; ++i) {
    const double s = (i + 0.5) / n_dense;
    const cplx z = b.eval(s);
    x[i] = z.real();
    y[i] = z.imag();
    f[i] = data(s, z, outward_normal(b, s), b.contour_of[b.section_of(s)]);
  }
  m.eval_many(x, y, u, v);
  double max_err = 0.0;
  for (int i = 0; i < n_dense; ++i) max_err = std::max(max_err, std::abs(f[i] - u[i]));
  double f2 = 0.0;
  for (int msec = 0; msec < static_cast<int>(b.sections.size()); ++msec) {
    const auto& sec = b.sections[msec];
    const int j = b.contour_of[msec];
    f2 += detail::integrate(
        [&](double t) {
          const cplx dz = sec.deriv_local(t);
          const cplx nrm = cplx(0, -1) * dz / std::abs(dz);
          const double s = 0.5 * ((sec.s1 - sec.s0) * t + sec.s0 + sec.s1);
          const double fv = data(s, sec.eval_local(t), nrm, j);
          return fv * fv * std::abs(dz);
        },
        -1.0, 1.0, 1e-10);
  }
  const double denom = std::sqrt(f2 / b.total_length);
  return denom > 0 ? max_err / denom : max_err;
}

FieldValues eval_field(const basis::PotentialModel& m, Kind kind, const geom::Boundary& b,
                       std::span<const cplx> grid) {
  FieldValues out;
  const size_t n = grid.size();
  out.u.assign(n, 0.0);
  out.v.assign(n, 0.0);
  out.masked.assign(n, false);
  std::vector<double> x(n), y(n);
  for (size_t i = 0; i < n; ++i) {
    x[i] = grid[i].real();
    y[i] = grid[i].imag();
    out.masked[i] = classify_for_problem(kind, b, grid[i]) != geom::DomainSide::Inside;
  }
  m.eval_many(x, y, out.u, out.v);
  for (size_t i = 0; i < n; ++i)
    if (out.masked[i]) out.u[i] = out.v[i] = 0.0;
  return out;
}

namespace {

struct NodeData {
  std::vector<double> f;      // Dirichlet samples or Neumann F samples
  std::vector<double> f_raw;  // raw Dirichlet data (exterior: before log subtraction)
};

double pole_motion(const std::vector<cplx>& now, const std::vector<cplx>& prev) {
  if (now.empty()) return 0.0;
  double worst = 0.0;
  for (const cplx& p : now) {
    double best = 1e300;
    for (const cplx& q : prev) best = std::min(best, std::abs(p - q));
    worst = std::max(worst, best);
  }
  return worst;
}

} // namespace

Solution solve(const ProblemSpec& p) {
  const auto t_start = std::chrono::steady_clock::now();
  const geom::Boundary& b = p.boundary;
  if (!p.data) throw std::invalid_argument("solve: no boundary data");
  if (p.kind == Kind::InteriorDirichlet && b.num_contours != 1)
    throw std::invalid_argument("solve: interior Dirichlet expects a single contour");

  const double diam = b.diameter();
  const bool neumann = p.kind == Kind::ExteriorNeumann;
  const bool exterior_d = p.kind == Kind::ExteriorDirichlet;

  std::vector<cplx> log_centers;
  if (p.kind != Kind::InteriorDirichlet)
    log_centers = p.log_centers_override ? *p.log_centers_override : default_log_centers(b);

  SolveReport report;
  NeumannPreprocess pre;
  std::vector<double> known_log_coeffs;
  if (neumann) {
    pre = neumann_preprocess(b, p.data, log_centers);
    report.neumann_compat_residual = pre.compat_residual;
    if (pre.compat_residual > 1e-10)
      throw std::invalid_argument("solve: Neumann data violates the compatibility condition");
    known_log_coeffs.resize(pre.A.size());
    for (size_t j = 0; j < pre.A.size(); ++j) known_log_coeffs[j] = -pre.A[j];
  }

  auto classify = [&](cplx z) { return classify_for_problem(p.kind, b, z); };

  auto sample_nodes = [&](const quad::Rule& rule) {
    NodeData nd;
    const size_t K = rule.size();
    nd.f.resize(K);
    if (neumann) {
      for (size_t k = 0; k < K; ++k) {
        const int m = rule.section_of[k];
        nd.f[k] = pre.F_at(b, m, b.local_of_global(m, rule.s[k]));
      }
    } else {
      for (size_t k = 0; k < K; ++k) {
        const cplx nrm = cplx(0, -1) * rule.dz[k] / std::abs(rule.dz[k]);
        nd.f[k] = p.data(rule.s[k], rule.z[k], nrm, rule.contour_of[k]);
      }
      nd.f_raw = nd.f;
    }
    return nd;
  };

  // Initial poles: degree-2N fit of the known boundary part.
  std::vector<cplx> poles;
  int order = p.n_poles;
  if (p.initial_poles_override) {
    poles = *p.initial_poles_override;
  } else {
    const quad::Rule rule0 = quad::chebyshev_boundary_rule(b, 4 * order + 1);
    NodeData nd0 = sample_nodes(rule0);
    std::vector<cplx> w0(rule0.size());
    for (size_t k = 0; k < rule0.size(); ++k)
      w0[k] = neumann ? cplx(0.0, nd0.f[k]) : cplx(nd0.f[k], 0.0);
    poles = ratfit::initial_poles(b, rule0, w0, order, classify).poles;
  }

  struct Best {
    double de = 1e300;
    basis::PotentialModel model;
    basis::PoleSet set;
    int iteration = 0;
    bool absolute = false;
  } best;

  std::deque<double> window;
  double prev_de = -1.0;
  std::string stop_reason = "max-iter";

  for (int iter = 1; iter <= p.max_iter; ++iter) {
    basis::PoleSet set;
    set.poles = poles;
    set.side.resize(poles.size());
    for (size_t i = 0; i < poles.size(); ++i) set.side[i] = classify(poles[i]);

    quad::RuleOptions ropt;
    ropt.epsilon = prev_de > 0 ? std::min(1e-4, 0.01 * prev_de) : 1e-4;
    ropt.prune = p.prune;
    ropt.min_n_infinite = p.min_n_infinite;
    ropt.extra_n_infinite = p.extra_n_infinite;
    ropt.degree_budget = p.prune_degree_budget;
    std::vector<quad::WeightedPole> wp(poles.size());
    for (size_t i = 0; i < poles.size(); ++i)
      wp[i] = {poles[i], set.side[i] == geom::DomainSide::Outside ? 3 : 1};
    const quad::Rule rule = quad::build_boundary_rule(b, wp, log_centers, ropt);
    NodeData nd = sample_nodes(rule);

    basis::Assembled sys = neumann
                               ? basis::assemble_neumann(rule, set, nd.f, b.num_contours)
                               : basis::assemble_dirichlet(rule, set, nd.f, log_centers);
    num::LsqResult sol = num::lsq_colpivot(sys.A, sys.rhs);
    basis::PotentialModel model =
        neumann ? basis::neumann_model(sys, sol.x, known_log_coeffs, log_centers)
                : basis::dirichlet_model(sys, sol.x, exterior_d ? log_centers : std::vector<cplx>{});

    const double rhs_norm = sys.rhs.norm();
    const bool absolute = rhs_norm == 0.0;
    const double de = absolute ? sol.residual_norm : sol.residual_norm / rhs_norm;

    IterationStat stat;
    stat.iteration = iter;
    stat.delta_e = de;
    stat.n_out = set.n_out();
    stat.n_in = set.n_in();
    stat.testing_points = static_cast<int>(rule.size());
    if (de < best.de) {
      best = {de, model, set, iter, absolute};
      stat.accepted = true;
    }

    if (de <= p.tol) {
      stat.basis = '-';
      report.iterations.push_back(stat);
      if (p.on_iteration) p.on_iteration(stat, model);
      stop_reason = "tol";
      break;
    }

    // Boundary estimate of the complex potential for the refit.
    const Eigen::VectorXd resid = sys.A * sol.x - sys.rhs;
    std::vector<cplx> what(rule.size());
    if (neumann) {
      for (size_t k = 0; k < rule.size(); ++k) {
        const double vk = nd.f[k] + model.v_consts[rule.contour_of[k]];
        what[k] = cplx(rational_value(model, rule.z[k]).real(), vk);
      }
    } else if (exterior_d) {
      for (size_t k = 0; k < rule.size(); ++k) {
        double fr = nd.f_raw[k];
        for (size_t j = 0; j < model.log_coeffs.size(); ++j)
          fr -= model.log_coeffs[j] * std::log(std::abs(rule.z[k] - log_centers[j]));
        what[k] = cplx(fr, rational_value(model, rule.z[k]).imag());
      }
    } else {
      for (size_t k = 0; k < rule.size(); ++k)
        what[k] = cplx(nd.f_raw[k], rational_value(model, rule.z[k]).imag());
    }

    ratfit::FitInput fin;
    fin.rule = &rule;
    fin.samples = std::move(what);
    fin.poles = poles;
    fin.order = order;
    fin.scale = diam;
    ratfit::FitResult fit = ratfit::relocate(fin);
    stat.basis = fit.basis_used;
    report.iterations.push_back(stat);
    if (p.on_iteration) p.on_iteration(stat, model);

    std::vector<cplx> next = fit.new_poles.empty() && fit.degenerate ? poles : fit.new_poles;
    const double motion = pole_motion(next, poles);
    if (motion <= 1e-12 * diam && iter > 1) {
      poles = next;
      stop_reason = "poles-converged";
      break;
    }

    // Adaptive pole addition on a stalled error plateau.
    if (p.adaptive.enabled) {
      window.push_back(de);
      if (static_cast<int>(window.size()) > p.adaptive.window) window.pop_front();
      if (static_cast<int>(window.size()) == p.adaptive.window &&
          static_cast<int>(next.size()) < p.adaptive.max_poles) {
        double mu = 0.0;
        for (double v : window) mu += v;
        mu /= window.size();
        double var = 0.0;
        for (double v : window) var += (v - mu) * (v - mu);
        const double sigma = std::sqrt(var / window.size());
        if (sigma < mu * p.adaptive.epsilon) {
          Eigen::Index kworst = 0;
          double worst = -1.0;
          for (Eigen::Index k = 0; k < resid.size(); ++k) {
            const double r = std::abs(resid(k)) / std::sqrt(rule.w[k]);
            if (r > worst) {
              worst = r;
              kworst = k;
            }
          }
          const cplx nrm = cplx(0, -1) * rule.dz[kworst] / std::abs(rule.dz[kworst]);
          const cplx dir = p.kind == Kind::InteriorDirichlet ? nrm : -nrm;
          const size_t kn = std::min<size_t>(kworst + 1, rule.size() - 1);
          const size_t kp = kworst > 0 ? kworst - 1 : 0;
          double feature = 0.5 * std::abs(rule.z[kn] - rule.z[kp]);
          if (feature <= 0) feature = 1e-3 * diam;
          next.push_back(rule.z[kworst] + feature * dir);
          ++order;
          window.clear();
        }
      }
    }

    poles = next;
    prev_de = de;
  }

  Solution out;
  out.model = best.model;
  out.poles = best.set;
  report.stop_reason = stop_reason;
  report.delta_e = best.de;
  report.best_iteration = best.iteration;
  report.delta_e_absolute = best.absolute;
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  out.report = report;
  return out;
}

} // namespace laprf::solver
