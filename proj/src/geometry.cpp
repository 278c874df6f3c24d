#include "laplacerf/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "laplacerf/chebyshev.hpp"
#include "laplacerf/detail/adaptive.hpp"
#include "laplacerf/numerics.hpp"

namespace laprf::geom {

namespace {

constexpr double kOnCurveBand = 1e-13;

std::vector<cplx> monomial01_to_cheb(std::span<const cplx> a) {
  // p(xi) with xi = (t+1)/2 -> Chebyshev series in t.
  std::vector<cplx> mono_t(a.size(), 0.0);
  for (size_t j = 0; j < a.size(); ++j) {
    // ((t+1)/2)^j expanded by binomials.
    double binom = 1.0;
    for (size_t i = 0; i <= j; ++i) {
      mono_t[i] += a[j] * binom / std::pow(2.0, static_cast<double>(j));
      binom = binom * static_cast<double>(j - i) / static_cast<double>(i + 1);
    }
  }
  return cheb::from_monomial(mono_t);
}

} // namespace

int RationalSection::degree() const {
  return static_cast<int>(std::max(num.size(), den.size())) - 1;
}

bool RationalSection::is_polynomial() const {
  for (size_t k = 1; k < den.size(); ++k)
    if (den[k] != 0.0) return false;
  return true;
}

cplx RationalSection::eval_local(double t) const {
  return cheb::eval(num, t) / cheb::eval(den, t);
}

cplx RationalSection::deriv_local(double t) const {
  const cplx p = cheb::eval(num, t), q = cheb::eval(den, t);
  const cplx dp = cheb::eval(cheb::derivative(num), t);
  if (den.size() == 1) return dp / q;
  const cplx dq = cheb::eval(cheb::derivative(den), t);
  return (dp * q - p * dq) / (q * q);
}

cplx RationalSection::second_deriv_local(double t) const {
  const std::vector<cplx> dnum = cheb::derivative(num);
  const cplx p = cheb::eval(num, t);
  const cplx dp = cheb::eval(dnum, t);
  const cplx ddp = cheb::eval(cheb::derivative(dnum), t);
  const cplx q = cheb::eval(den, t);
  if (den.size() == 1) return ddp / q;
  const std::vector<cplx> dden = cheb::derivative(den);
  const cplx dq = cheb::eval(dden, t);
  const cplx ddq = cheb::eval(cheb::derivative(dden), t);
  // (p/q)'' = [(p'' q - p q'') q - 2 q' (p' q - p q')] / q^3
  return ((ddp * q - p * ddq) * q - 2.0 * dq * (dp * q - p * dq)) / (q * q * q);
}

void RationalSection::flip() {
  for (size_t k = 1; k < num.size(); k += 2) num[k] = -num[k];
  for (size_t k = 1; k < den.size(); k += 2) den[k] = -den[k];
}

int Boundary::section_of(double s) const {
  if (s < -1e-12 || s > 1.0 + 1e-12) throw std::domain_error("parameter s outside [0,1]");
  int lo = 0, hi = static_cast<int>(sections.size()) - 1;
  while (lo < hi) {
    const int mid = (lo + hi + 1) / 2;
    if (s >= sections[mid].s0) lo = mid;
    else hi = mid - 1;
  }
  return lo;
}

double Boundary::local_of_global(int m, double s) const {
  const auto& sec = sections[m];
  const double t = (2.0 * s - sec.s0 - sec.s1) / (sec.s1 - sec.s0);
  return std::clamp(t, -1.0, 1.0);
}

cplx Boundary::eval(double s) const {
  const int m = section_of(s);
  return sections[m].eval_local(local_of_global(m, s));
}

cplx Boundary::deriv(double s) const {
  const int m = section_of(s);
  return sections[m].deriv_local(local_of_global(m, s)) * (2.0 / (sections[m].s1 - sections[m].s0));
}

std::pair<int, int> Boundary::contour_range(int contour) const {
  int first = -1, last = -1;
  for (size_t m = 0; m < sections.size(); ++m) {
    if (contour_of[m] == contour) {
      if (first < 0) first = static_cast<int>(m);
      last = static_cast<int>(m);
    }
  }
  if (first < 0) throw std::out_of_range("no such contour");
  return {first, last};
}

std::vector<double> breakpoints_by_arclength(std::span<const RationalSection> sections) {
  std::vector<double> len(sections.size());
  double total = 0.0;
  for (size_t m = 0; m < sections.size(); ++m) {
    const auto& sec = sections[m];
    len[m] = detail::integrate([&sec](double t) { return std::abs(sec.deriv_local(t)); },
                               -1.0, 1.0, 1e-12);
    if (!(len[m] > 0.0)) throw std::invalid_argument("zero-length section");
    total += len[m];
  }
  std::vector<double> h(sections.size() + 1);
  h[0] = 0.0;
  for (size_t m = 0; m < sections.size(); ++m) h[m + 1] = h[m] + len[m] / total;
  h.back() = 1.0;
  return h;
}

Boundary make_boundary(std::vector<RationalSection> sections, std::vector<int> contour_of,
                       double closure_rel_tol) {
  if (sections.empty() || sections.size() != contour_of.size())
    throw std::invalid_argument("make_boundary: bad section/contour arrays");
  int ncont = 0;
  for (size_t m = 0; m < sections.size(); ++m) {
    if (contour_of[m] != ncont && contour_of[m] != ncont - 1)
      throw std::invalid_argument("make_boundary: contour sections must be contiguous and ordered");
    if (contour_of[m] == ncont) ++ncont;
    if (sections[m].degree() < 1) throw std::invalid_argument("make_boundary: section degree must be >= 1");
  }

  // Denominators must not vanish on the closed reference interval.
  for (const auto& sec : sections) {
    if (sec.den.size() > 1) {
      for (const cplx& r : num::cheb_roots(sec.den))
        if (std::abs(r.imag()) < 1e-10 && std::abs(r.real()) <= 1.0 + 1e-10)
          throw std::invalid_argument("make_boundary: section denominator vanishes on interval");
    }
  }

  // Normalize orientation contour by contour (signed area > 0 <=> ccw).
  for (int j = 0; j < ncont; ++j) {
    double area2 = 0.0;
    int first = -1, last = -1;
    for (size_t m = 0; m < sections.size(); ++m) {
      if (contour_of[m] != j) continue;
      if (first < 0) first = static_cast<int>(m);
      last = static_cast<int>(m);
      const auto& sec = sections[m];
      area2 += detail::integrate(
          [&sec](double t) { return (std::conj(sec.eval_local(t)) * sec.deriv_local(t)).imag(); },
          -1.0, 1.0, 1e-10);
    }
    if (area2 < 0.0) {
      std::reverse(sections.begin() + first, sections.begin() + last + 1);
      for (int m = first; m <= last; ++m) sections[m].flip();
    }
  }

  const std::vector<double> h = breakpoints_by_arclength(sections);
  for (size_t m = 0; m < sections.size(); ++m) {
    sections[m].s0 = h[m];
    sections[m].s1 = h[m + 1];
  }

  Boundary b;
  b.sections = std::move(sections);
  b.contour_of = std::move(contour_of);
  b.num_contours = ncont;

  b.section_length.resize(b.sections.size());
  b.total_length = 0.0;
  for (size_t m = 0; m < b.sections.size(); ++m) {
    const auto& sec = b.sections[m];
    b.section_length[m] = detail::integrate(
        [&sec](double t) { return std::abs(sec.deriv_local(t)); }, -1.0, 1.0, 1e-12);
    b.total_length += b.section_length[m];
  }
  b.closure_tol = closure_rel_tol * b.total_length;

  // Closure: adjacent sections of a contour meet; contour wraps around.
  for (int j = 0; j < ncont; ++j) {
    auto [first, last] = b.contour_range(j);
    for (int m = first; m <= last; ++m) {
      const int next = (m == last) ? first : m + 1;
      const cplx gap = b.sections[m].eval_local(1.0) - b.sections[next].eval_local(-1.0);
      if (std::abs(gap) > b.closure_tol)
        throw std::invalid_argument("make_boundary: contour does not close within tolerance");
    }
  }

  // Sample-based caches: diameter and per-contour centroids.
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  b.contour_centroids.assign(ncont, 0.0);
  std::vector<int> counts(ncont, 0);
  for (size_t m = 0; m < b.sections.size(); ++m) {
    for (int i = 0; i <= 32; ++i) {
      const cplx z = b.sections[m].eval_local(-1.0 + 2.0 * i / 32.0);
      xmin = std::min(xmin, z.real());
      xmax = std::max(xmax, z.real());
      ymin = std::min(ymin, z.imag());
      ymax = std::max(ymax, z.imag());
      b.contour_centroids[b.contour_of[m]] += z;
      ++counts[b.contour_of[m]];
    }
  }
  for (int j = 0; j < ncont; ++j) b.contour_centroids[j] /= static_cast<double>(counts[j]);
  b.diam = std::hypot(xmax - xmin, ymax - ymin);
  return b;
}

namespace {

// Periodic cubic spline: knot derivatives from the C2 conditions.
std::vector<cplx> periodic_cubic_derivs(const std::vector<cplx>& y, const std::vector<double>& hseg) {
  const int k = static_cast<int>(y.size());
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(k, k);
  Eigen::VectorXcd rhs(k);
  for (int i = 0; i < k; ++i) {
    const int im1 = (i + k - 1) % k;
    const double hm = hseg[im1], hp = hseg[i];
    const cplx dm = (y[i] - y[im1]) / hm, dp = (y[(i + 1) % k] - y[i]) / hp;
    A(i, im1) += 1.0 / hm;
    A(i, i) += 2.0 * (1.0 / hm + 1.0 / hp);
    A(i, (i + 1) % k) += 1.0 / hp;
    rhs(i) = 3.0 * (dm / hm + dp / hp);
  }
  Eigen::VectorXcd d = A.partialPivLu().solve(rhs);
  return {d.data(), d.data() + k};
}

Eigen::Matrix<double, 6, 6> quintic_hermite_inverse() {
  Eigen::Matrix<double, 6, 6> V = Eigen::Matrix<double, 6, 6>::Zero();
  // Functionals s(0), s'(0), s''(0), s(1), s'(1), s''(1) of monomial coeffs.
  V(0, 0) = 1.0;
  V(1, 1) = 1.0;
  V(2, 2) = 2.0;
  for (int j = 0; j < 6; ++j) {
    V(3, j) = 1.0;
    V(4, j) = j;
    V(5, j) = j * (j - 1);
  }
  return V.inverse();
}

void periodic_quintic_derivs(const std::vector<cplx>& y, const std::vector<double>& hseg,
                             std::vector<cplx>& d_out, std::vector<cplx>& e_out) {
  const int k = static_cast<int>(y.size());
  static const Eigen::Matrix<double, 6, 6> Minv = quintic_hermite_inverse();
  // Third/fourth-derivative functionals in terms of (y0,D0,E0,y1,D1,E1),
  // derivatives taken with respect to the unit local variable.
  Eigen::Matrix<double, 1, 6> r3a = 6.0 * Minv.row(3);
  Eigen::Matrix<double, 1, 6> r3b = 6.0 * Minv.row(3) + 24.0 * Minv.row(4) + 60.0 * Minv.row(5);
  Eigen::Matrix<double, 1, 6> r4a = 24.0 * Minv.row(4);
  Eigen::Matrix<double, 1, 6> r4b = 24.0 * Minv.row(4) + 120.0 * Minv.row(5);

  // Unknowns u = (d_0, e_0, ..., d_{k-1}, e_{k-1}).
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(2 * k, 2 * k);
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(2 * k);
  auto add_functional = [&](int row, const Eigen::Matrix<double, 1, 6>& r, int seg, double scale) {
    // Interval seg runs from knot seg to knot seg+1; D = d*h, E = e*h^2.
    const int a = seg, bknot = (seg + 1) % k;
    const double h = hseg[seg];
    rhs(row) -= scale * (r(0) * y[a] + r(3) * y[bknot]);
    A(row, 2 * a) += scale * r(1) * h;
    A(row, 2 * a + 1) += scale * r(2) * h * h;
    A(row, 2 * bknot) += scale * r(4) * h;
    A(row, 2 * bknot + 1) += scale * r(5) * h * h;
  };
  for (int i = 0; i < k; ++i) {
    const int prev = (i + k - 1) % k;
    const double hm = hseg[prev], hp = hseg[i];
    // s'''_{prev}(1)/hm^3 == s'''_i(0)/hp^3, same for the fourth derivative.
    add_functional(2 * i, r3b, prev, 1.0 / (hm * hm * hm));
    add_functional(2 * i, r3a, i, -1.0 / (hp * hp * hp));
    add_functional(2 * i + 1, r4b, prev, 1.0 / (hm * hm * hm * hm));
    add_functional(2 * i + 1, r4a, i, -1.0 / (hp * hp * hp * hp));
  }
  Eigen::VectorXcd u = A.partialPivLu().solve(rhs);
  d_out.resize(k);
  e_out.resize(k);
  for (int i = 0; i < k; ++i) {
    d_out[i] = u(2 * i);
    e_out[i] = u(2 * i + 1);
  }
}

} // namespace

Boundary ingest_samples(const std::vector<std::vector<cplx>>& points_per_contour,
                        Smoothness smoothness) {
  if (points_per_contour.empty()) throw std::invalid_argument("ingest_samples: no contours");
  std::vector<RationalSection> sections;
  std::vector<int> contour_of;
  for (size_t j = 0; j < points_per_contour.size(); ++j) {
    const auto& pts = points_per_contour[j];
    const int k = static_cast<int>(pts.size());
    if (k < 4) throw std::invalid_argument("ingest_samples: too few points (need >= 4)");
    std::vector<double> hseg(k);
    double scale = 0.0;
    for (const cplx& p : pts) scale = std::max(scale, std::abs(p));
    for (int i = 0; i < k; ++i) {
      hseg[i] = std::abs(pts[(i + 1) % k] - pts[i]);
      if (hseg[i] <= 1e-14 * std::max(1.0, scale))
        throw std::invalid_argument("ingest_samples: duplicate consecutive points");
    }
    std::vector<cplx> d, e;
    if (smoothness == Smoothness::cubic) {
      d = periodic_cubic_derivs(pts, hseg);
    } else {
      periodic_quintic_derivs(pts, hseg, d, e);
    }
    static const Eigen::Matrix<double, 6, 6> Minv = quintic_hermite_inverse();
    for (int i = 0; i < k; ++i) {
      const int inext = (i + 1) % k;
      const double h = hseg[i];
      std::vector<cplx> mono;
      if (smoothness == Smoothness::cubic) {
        const cplx y0 = pts[i], y1 = pts[inext], D0 = d[i] * h, D1 = d[inext] * h;
        mono = {y0, D0, -3.0 * y0 - 2.0 * D0 + 3.0 * y1 - D1,
                2.0 * y0 + D0 - 2.0 * y1 + D1};
      } else {
        Eigen::Matrix<cplx, 6, 1> cond;
        cond << pts[i], d[i] * h, e[i] * h * h, pts[inext], d[inext] * h, e[inext] * h * h;
        Eigen::Matrix<cplx, 6, 1> a = Minv.cast<cplx>() * cond;
        mono.assign(a.data(), a.data() + 6);
      }
      RationalSection sec;
      sec.num = monomial01_to_cheb(mono);
      sec.den = {cplx(1.0)};
      sections.push_back(std::move(sec));
      contour_of.push_back(static_cast<int>(j));
    }
  }
  return make_boundary(std::move(sections), std::move(contour_of));
}

std::vector<cplx> section_shifted_roots(const RationalSection& sec, cplx zp) {
  // Zeros of g(t) = zp * q(t) - p(t).
  const size_t n = std::max(sec.num.size(), sec.den.size());
  std::vector<cplx> g(n, 0.0);
  for (size_t i = 0; i < sec.den.size(); ++i) g[i] = zp * sec.den[i];
  for (size_t i = 0; i < sec.num.size(); ++i) g[i] -= sec.num[i];
  double gmax = 0.0;
  for (const cplx& v : g) gmax = std::max(gmax, std::abs(v));
  if (gmax == 0.0) throw std::invalid_argument("section_shifted_roots: zp attained identically");
  size_t deg = g.size();
  while (deg > 1 && std::abs(g[deg - 1]) <= 1e-14 * gmax) --deg;
  if (deg == 1) return {};
  g.resize(deg);
  std::vector<cplx> roots = num::cheb_roots(g);
  // Newton polish against g itself.
  const std::vector<cplx> gd = cheb::derivative(g);
  for (cplx& r : roots) {
    for (int it = 0; it < 3; ++it) {
      const cplx gv = cheb::eval(g, r);
      const cplx dv = cheb::eval(gd, r);
      if (std::abs(dv) == 0.0) break;
      const cplx step = gv / dv;
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
      r -= step;
      if (std::abs(step) < 1e-15 * (1.0 + std::abs(r))) break;
    }
  }
  return roots;
}

DomainSide point_in_domain(const Boundary& b, cplx zp, double tol) {
  bool on_boundary = false;
  const std::vector<double> w = winding_numbers(b, zp, &on_boundary, tol);
  if (on_boundary) return DomainSide::OnBoundary;
  double total = 0.0;
  for (double v : w) total += v;
  return std::abs(total) > 0.5 ? DomainSide::Inside : DomainSide::Outside;
}

std::vector<double> winding_numbers(const Boundary& b, cplx zp, bool* on_boundary, double tol) {
  std::vector<double> w(b.num_contours, 0.0);
  if (on_boundary) *on_boundary = false;
  for (size_t m = 0; m < b.sections.size(); ++m) {
    const auto& sec = b.sections[m];
    cplx delta = 0.0;
    for (const cplx& a : section_shifted_roots(sec, zp)) {
      if (std::abs(a.imag()) < kOnCurveBand * (1.0 + std::abs(a)) &&
          std::abs(a.real()) <= 1.0 + kOnCurveBand) {
        if (on_boundary) *on_boundary = true;
        return w;
      }
      delta += std::log((1.0 - a) / (-1.0 - a));
    }
    if (sec.den.size() > 1) {
      for (const cplx& r : num::cheb_roots(sec.den)) delta -= std::log((1.0 - r) / (-1.0 - r));
    }
    w[b.contour_of[m]] += delta.imag() / (2.0 * kPi);
  }
  for (double& v : w) {
    const double r = std::round(v);
    if (std::abs(v - r) > tol) {
      if (on_boundary) *on_boundary = true;
    }
    v = r;
  }
  return w;
}

} // namespace laprf::geom
