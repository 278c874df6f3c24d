#include "laplacerf/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <mutex>
#include <stdexcept>

#include "laplacerf/chebyshev.hpp"

namespace laprf::quad {

namespace {

// Inverse Joukowski map: the preimage of s0 inside the unit disk.
cplx joukowski_inverse(cplx s0) {
  const cplx root = std::sqrt(s0 - 1.0) * std::sqrt(s0 + 1.0);
  const cplx b1 = s0 + root, b2 = s0 - root;
  return std::abs(b1) <= std::abs(b2) ? b1 : b2;
}

struct PhaseFunction {
  // Psi(theta) = K*theta + sum_a atan2(r sin(theta-psi), 1 - r cos(theta-psi)),
  // strictly increasing from 0 to K*pi; nodes solve Psi = (k-1/2)*pi.
  int K = 0;
  std::vector<double> r, psi;

  double value(double theta) const {
    double acc = 0.0, comp = 0.0; // Kahan accumulation
    for (size_t i = 0; i < r.size(); ++i) {
      const double d = theta - psi[i];
      const double term = std::atan2(r[i] * std::sin(d), 1.0 - r[i] * std::cos(d));
      const double y = term - comp;
      const double t = acc + y;
      comp = (t - acc) - y;
      acc = t;
    }
    return K * theta + acc;
  }

  double derivative(double theta) const {
    double acc = 0.0;
    for (size_t i = 0; i < r.size(); ++i) {
      const double d = theta - psi[i];
      const double denom = 1.0 - 2.0 * r[i] * std::cos(d) + r[i] * r[i];
      acc += 0.5 * ((1.0 - r[i] * r[i]) / denom - 1.0);
    }
    return K + acc;
  }
};

} // namespace

double elliptical_radius(cplx s0) {
  const cplx root = std::sqrt(s0 - 1.0) * std::sqrt(s0 + 1.0);
  return std::max(std::abs(s0 + root), std::abs(s0 - root));
}

Rule1D rational_chebyshev_rule(std::span<const cplx> poles, int n_infinite) {
  if (n_infinite < 0) throw std::invalid_argument("rational_chebyshev_rule: n_infinite < 0");
  if (poles.size() % 2 != 0)
    throw std::invalid_argument("rational_chebyshev_rule: pole multiset not conjugate-closed");
  const int K = static_cast<int>(poles.size()) / 2 + n_infinite + 1;

  PhaseFunction phase;
  phase.K = K;
  phase.r.reserve(poles.size());
  phase.psi.reserve(poles.size());
  for (const cplx& a : poles) {
    const cplx beta = joukowski_inverse(a);
    const double rb = std::abs(beta);
    if (rb >= 1.0 - 1e-13) throw std::domain_error("rational_chebyshev_rule: pole on [-1,1]");
    phase.r.push_back(rb);
    phase.psi.push_back(std::arg(beta));
  }

  Rule1D rule;
  rule.x.resize(K);
  rule.w.resize(K);
  if (poles.empty()) {
    for (int k = 1; k <= K; ++k) {
      rule.x[K - k] = std::cos((2.0 * k - 1.0) * kPi / (2.0 * K));
      rule.w[K - k] = kPi / K;
    }
    return rule;
  }

  double lo = 0.0, flo = phase.value(0.0);
  for (int k = 1; k <= K; ++k) {
    const double target = (k - 0.5) * kPi;
    double hi = kPi;
    double theta = std::min(hi, lo + (target - flo) / std::max(phase.derivative(lo), 1.0));
    if (!(theta > lo)) theta = 0.5 * (lo + hi);
    for (int it = 0; it < 100; ++it) {
      const double f = phase.value(theta) - target;
      if (f > 0)
        hi = theta;
      else
        lo = theta;
      const double df = phase.derivative(theta);
      double next = theta - f / df;
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (std::abs(next - theta) <= 4e-16 * std::max(1.0, theta)) {
        theta = next;
        break;
      }
      theta = next;
    }
    rule.x[K - k] = std::cos(theta);
    rule.w[K - k] = kPi / phase.derivative(theta);
    lo = theta;
    flo = phase.value(theta);
  }
  return rule;
}

// ---------------------------------------------------------------------------
// Prune table

namespace {

// Chebyshev coefficients of (s-s0)^{-3} for real s0 > 1, from twice
// differentiating the expansion of (s0-s)^{-1} in s0:
//   c_l(s0) = e_l b^l u,  b = s0 - sqrt(s0^2-1),  u = (s0^2-1)^{-1/2}.
double third_order_tail(double rho, int degree_cap, std::vector<double>& tail) {
  const double s0 = 0.5 * (rho + 1.0 / rho);
  const double u = 1.0 / std::sqrt(s0 * s0 - 1.0);
  const double b = 1.0 / rho; // s0 - sqrt(s0^2-1) for s0 from the rho-ellipse
  const double u2 = u * u, u3 = u2 * u, u4 = u3 * u, u5 = u4 * u;
  // gamma_l = -(1/2) d^2/ds0^2 [e_l b^l u]
  //         = -(1/2) e_l b^l [ l^2 u^3 + 3 l s0 u^4 + 3 s0^2 u^5 - u^3 ].
  tail.assign(degree_cap + 2, 0.0);
  double bl = 1.0;
  std::vector<double> gamma(degree_cap + 1);
  for (int l = 0; l <= degree_cap; ++l) {
    const double el = (l == 0) ? 1.0 : 2.0;
    gamma[l] = std::abs(-0.5 * el * bl * (l * l * u3 + 3.0 * l * s0 * u4 + 3.0 * s0 * s0 * u5 - u3));
    bl *= b;
  }
  // Geometric bound on everything beyond the cap.
  const int L = degree_cap;
  double beyond = gamma[L] * b / (1.0 - b) * 4.0;
  tail[L + 1] = beyond;
  for (int l = L; l >= 0; --l) tail[l] = tail[l + 1] + gamma[l];
  return tail[0];
}

} // namespace

PruneTable PruneTable::build(std::span<const double> epsilons) {
  PruneTable t;
  t.eps_grid.assign(epsilons.begin(), epsilons.end());
  std::sort(t.eps_grid.begin(), t.eps_grid.end());
  const int nrho = 56;
  const double lo = std::log(1.002), hi = std::log(1000.0);
  for (int i = 0; i < nrho; ++i) t.rho_grid.push_back(std::exp(lo + (hi - lo) * i / (nrho - 1)));
  const int cap = 512;
  t.degree.assign(nrho * t.eps_grid.size(), kKeep);
  std::vector<double> tail;
  for (int i = 0; i < nrho; ++i) {
    third_order_tail(t.rho_grid[i], cap, tail);
    for (size_t j = 0; j < t.eps_grid.size(); ++j) {
      const double eps = t.eps_grid[j];
      int d = kKeep;
      for (int l = 0; l <= cap; ++l) {
        if (tail[l + 1] <= eps) {
          d = l;
          break;
        }
      }
      t.degree[i * t.eps_grid.size() + j] = d;
    }
  }
  // Isotonic cleanup: nonincreasing in rho, nondecreasing in 1/eps.
  const size_t ne = t.eps_grid.size();
  for (int i = 1; i < nrho; ++i)
    for (size_t j = 0; j < ne; ++j)
      t.degree[i * ne + j] = std::min(t.degree[i * ne + j], t.degree[(i - 1) * ne + j]);
  for (int i = 0; i < nrho; ++i)
    for (size_t j = ne - 1; j-- > 0;)
      t.degree[i * ne + j] = std::max(t.degree[i * ne + j], t.degree[i * ne + j + 1]);
  return t;
}

const PruneTable& PruneTable::builtin() {
  static const PruneTable table = [] {
    std::vector<double> eps;
    for (int e = -15; e <= -3; ++e) eps.push_back(std::pow(10.0, e));
    return build(eps);
  }();
  return table;
}

int PruneTable::required_degree(double rho, double eps) const {
  const size_t ne = eps_grid.size();
  auto at = [&](size_t i, size_t j) { return degree[i * ne + j]; };
  const double lr = std::log(std::max(rho, rho_grid.front()));
  const double le = std::log(std::clamp(eps, eps_grid.front(), eps_grid.back()));
  if (rho <= rho_grid.front()) {
    // Below the grid: refuse to prune.
    return kKeep;
  }
  size_t i1 = std::upper_bound(rho_grid.begin(), rho_grid.end(), rho) - rho_grid.begin();
  i1 = std::clamp<size_t>(i1, 1, rho_grid.size() - 1);
  const size_t i0 = i1 - 1;
  size_t j1 = std::upper_bound(eps_grid.begin(), eps_grid.end(), eps) - eps_grid.begin();
  j1 = std::clamp<size_t>(j1, 1, ne - 1);
  const size_t j0 = j1 - 1;
  const int d00 = at(i0, j0), d01 = at(i0, j1), d10 = at(i1, j0), d11 = at(i1, j1);
  if (rho > rho_grid.back()) return std::max(at(rho_grid.size() - 1, j0), 0);
  if (d00 >= kKeep || d01 >= kKeep || d10 >= kKeep || d11 >= kKeep) return kKeep;
  const double tx = (lr - std::log(rho_grid[i0])) / (std::log(rho_grid[i1]) - std::log(rho_grid[i0]));
  const double ty = (le - std::log(eps_grid[j0])) / (std::log(eps_grid[j1]) - std::log(eps_grid[j0]));
  const double v = (1 - tx) * ((1 - ty) * d00 + ty * d01) + tx * ((1 - ty) * d10 + ty * d11);
  return static_cast<int>(std::ceil(v - 1e-9));
}

void PruneTable::dump_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "rho,epsilon,degree\n";
  for (size_t i = 0; i < rho_grid.size(); ++i)
    for (size_t j = 0; j < eps_grid.size(); ++j)
      out << rho_grid[i] << ',' << eps_grid[j] << ',' << degree[i * eps_grid.size() + j] << '\n';
}

PruneTable PruneTable::load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::string header;
  std::getline(in, header);
  PruneTable t;
  double rho, eps;
  int deg;
  char comma;
  while (in >> rho >> comma >> eps >> comma >> deg) {
    if (t.rho_grid.empty() || t.rho_grid.back() != rho) t.rho_grid.push_back(rho);
    if (t.rho_grid.size() == 1) t.eps_grid.push_back(eps);
    t.degree.push_back(deg);
  }
  if (t.degree.size() != t.rho_grid.size() * t.eps_grid.size())
    throw std::runtime_error("malformed prune table " + path);
  return t;
}

PruneResult prune(std::span<const cplx> alphas, std::span<const int> mult, double epsilon,
                  const PruneTable& table, const PruneOptions& opts) {
  PruneResult out;
  int maxdeg = 0;
  for (size_t i = 0; i < alphas.size(); ++i) {
    const double rho = elliptical_radius(alphas[i]);
    const int d = table.required_degree(rho, epsilon);
    if (d <= opts.degree_budget) {
      maxdeg = std::max(maxdeg, d);
    } else {
      out.kept.push_back(alphas[i]);
      out.kept_mult.push_back(mult.empty() ? 1 : mult[i]);
    }
  }
  out.max_dropped_degree = maxdeg;
  out.n_infinite = std::max(opts.min_n_infinite, (maxdeg + 1) / 2);
  return out;
}

// ---------------------------------------------------------------------------
// Boundary rules

namespace {

void append_section_rule(Rule& rule, const geom::Boundary& b, int m, const Rule1D& r1) {
  const auto& sec = b.sections[m];
  const double c = 0.5 * (sec.s0 + sec.s1), half = 0.5 * (sec.s1 - sec.s0);
  for (size_t k = 0; k < r1.x.size(); ++k) {
    const double s = c + half * r1.x[k];
    rule.s.push_back(s);
    rule.w.push_back(half * r1.w[k]);
    rule.section_of.push_back(m);
    rule.contour_of.push_back(b.contour_of[m]);
    rule.z.push_back(sec.eval_local(r1.x[k]));
    rule.dz.push_back(sec.deriv_local(r1.x[k]) / half);
  }
}

} // namespace

Rule build_boundary_rule(const geom::Boundary& b, std::span<const WeightedPole> poles,
                         std::span<const cplx> log_centers, const RuleOptions& opts) {
  Rule rule;
  const PruneTable& table = PruneTable::builtin();
  for (int m = 0; m < static_cast<int>(b.sections.size()); ++m) {
    const auto& sec = b.sections[m];
    std::vector<cplx> alphas;
    std::vector<int> mult;
    for (const WeightedPole& p : poles) {
      for (const cplx& a : geom::section_shifted_roots(sec, p.z)) {
        if (elliptical_radius(a) - 1.0 <= 1e-13)
          throw std::domain_error("build_boundary_rule: pole on boundary");
        alphas.push_back(a);
        mult.push_back(p.mult);
      }
    }

    int n_inf = opts.min_n_infinite;
    std::vector<cplx> kept = alphas;
    std::vector<int> kept_mult = mult;
    if (opts.prune) {
      PruneOptions popt;
      popt.degree_budget = opts.degree_budget;
      popt.min_n_infinite = opts.min_n_infinite;
      PruneResult pr = prune(alphas, mult, opts.epsilon, table, popt);
      kept = std::move(pr.kept);
      kept_mult = std::move(pr.kept_mult);
      n_inf = pr.n_infinite;
    }

    // Logarithmic basis terms are absorbed by poles at infinity; size the
    // polynomial exactness from the nearest branch point of log(z(t)-c).
    for (const cplx& c : log_centers) {
      double rho_min = 1e300;
      for (const cplx& a : geom::section_shifted_roots(sec, c))
        rho_min = std::min(rho_min, elliptical_radius(a));
      if (rho_min < 1e300) {
        const int d = table.required_degree(rho_min, opts.epsilon);
        n_inf = std::max(n_inf, std::min((d + 1) / 2, 3 * opts.degree_budget / 2));
      }
    }
    n_inf += opts.extra_n_infinite;

    std::vector<cplx> closed;
    closed.reserve(2 * kept.size());
    for (size_t i = 0; i < kept.size(); ++i) {
      for (int rep = 0; rep < kept_mult[i]; ++rep) {
        closed.push_back(kept[i]);
        closed.push_back(std::conj(kept[i]));
      }
    }
    append_section_rule(rule, b, m, rational_chebyshev_rule(closed, n_inf));
  }
  rule.pole_signature.reserve(poles.size());
  for (const WeightedPole& p : poles) rule.pole_signature.push_back(p.z);
  return rule;
}

Rule chebyshev_boundary_rule(const geom::Boundary& b, int n_infinite) {
  Rule rule;
  const Rule1D r1 = rational_chebyshev_rule({}, n_infinite);
  for (int m = 0; m < static_cast<int>(b.sections.size()); ++m) append_section_rule(rule, b, m, r1);
  return rule;
}

void dump_rule_csv(const Rule& rule, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "section,s,weight\n";
  for (size_t k = 0; k < rule.size(); ++k)
    out << rule.section_of[k] << ',' << rule.s[k] << ',' << rule.w[k] << '\n';
}

} // namespace laprf::quad
