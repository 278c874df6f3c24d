#include "laplacerf/gallery.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "laplacerf/chebyshev.hpp"

namespace laprf::gallery {

namespace {

geom::RationalSection fitted_section(const std::function<cplx(double)>& z_of_t, double tol = 1e-14,
                                     int max_degree = 256) {
  geom::RationalSection sec;
  sec.num = cheb::fit(z_of_t, tol, max_degree);
  sec.den = {cplx(1.0)};
  return sec;
}

geom::RationalSection line_section(cplx a, cplx b) {
  geom::RationalSection sec;
  sec.num = {0.5 * (a + b), 0.5 * (b - a)};
  sec.den = {cplx(1.0)};
  return sec;
}

// Right or left half of a unit circle as a degree-2 rational map.
geom::RationalSection half_circle(cplx center, double radius, bool right) {
  // z = center +/- radius * ((1-t^2) + 2it)/(1+t^2)
  const double sgn = right ? 1.0 : -1.0;
  geom::RationalSection sec;
  // monomial: num = center*(1+t^2) + sgn*radius*(1 + 2it - t^2)
  std::vector<cplx> num_mono = {center + sgn * radius, sgn * radius * cplx(0, 2.0),
                                center - sgn * radius};
  std::vector<cplx> den_mono = {1.0, 0.0, 1.0};
  sec.num = cheb::from_monomial(num_mono);
  sec.den = cheb::from_monomial(den_mono);
  return sec;
}

} // namespace

geom::Boundary ellipse(double rx, double ry) {
  if (rx <= 0 || ry <= 0) throw std::invalid_argument("ellipse: radii must be positive");
  auto z = [rx, ry](double t) {
    const double s = 0.5 * (t + 1.0);
    return cplx(rx * std::cos(2.0 * kPi * s), ry * std::sin(2.0 * kPi * s));
  };
  return geom::make_boundary({fitted_section(z)}, {0});
}

geom::Boundary trigpoly(double gamma, int nu) {
  if (gamma <= 1.0 || gamma > 2.0) throw std::invalid_argument("trigpoly: gamma in (1,2] expected");
  auto z = [gamma, nu](double t) {
    const double s = 0.5 * (t + 1.0);
    const double r = 1.0 / gamma + (1.0 / gamma - 1.0) * std::cos(2.0 * kPi * nu * s);
    return r * std::exp(cplx(0, 2.0 * kPi * s));
  };
  return geom::make_boundary({fitted_section(z, 1e-14, 512)}, {0});
}

geom::Boundary lshape() {
  const std::vector<cplx> v = {{-0.5, -0.5}, {1.5, -0.5}, {1.5, 0.5},
                               {0.5, 0.5},   {0.5, 1.5},  {-0.5, 1.5}};
  std::vector<geom::RationalSection> secs;
  std::vector<int> contours;
  for (size_t i = 0; i < v.size(); ++i) {
    secs.push_back(line_section(v[i], v[(i + 1) % v.size()]));
    contours.push_back(0);
  }
  return geom::make_boundary(std::move(secs), std::move(contours));
}

geom::Boundary circle(cplx center, double radius) {
  return geom::make_boundary({half_circle(center, radius, true), half_circle(center, radius, false)},
                             {0, 0});
}

geom::Boundary two_circles(double d_over_R, double R) {
  if (d_over_R <= 0) throw std::invalid_argument("two_circles: gap must be positive");
  const double h = R + 0.5 * d_over_R * R;
  std::vector<geom::RationalSection> secs = {
      half_circle(cplx(0, h), R, true), half_circle(cplx(0, h), R, false),
      half_circle(cplx(0, -h), R, true), half_circle(cplx(0, -h), R, false)};
  return geom::make_boundary(std::move(secs), {0, 0, 1, 1});
}

Scene random_ellipses(int n, std::uint64_t seed, double r0, double min_gap) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const double box = std::sqrt(static_cast<double>(n)) * 3.4 * r0;
  Scene scene;
  std::vector<std::vector<cplx>> samples;
  int attempts = 0;
  while (static_cast<int>(scene.ellipses.size()) < n) {
    if (++attempts > 200000) throw std::runtime_error("random_ellipses: packing failed");
    EllipseParams e;
    e.a = r0 * (0.5 + uni(rng));
    const double ecc = 0.9 * uni(rng);
    e.b = e.a * std::sqrt(1.0 - ecc * ecc);
    e.angle = 2.0 * kPi * uni(rng);
    e.center = cplx(box * uni(rng), box * uni(rng));
    std::vector<cplx> pts(48);
    for (int i = 0; i < 48; ++i) {
      const double phi = 2.0 * kPi * i / 48;
      pts[i] = e.center + std::exp(cplx(0, e.angle)) * cplx(e.a * std::cos(phi), e.b * std::sin(phi));
    }
    bool ok = true;
    for (const auto& other : samples) {
      double dmin = 1e300;
      for (const cplx& p : pts)
        for (const cplx& q : other) dmin = std::min(dmin, std::abs(p - q));
      // Reject overlap: centers inside the other curve show up as tiny dmin
      // only when boundaries cross, so also test a center-distance floor.
      if (dmin < min_gap * r0) {
        ok = false;
        break;
      }
      cplx oc = 0.0;
      for (const cplx& q : other) oc += q;
      oc /= static_cast<double>(other.size());
      double inner = 1e300;
      for (const cplx& p : pts) inner = std::min(inner, std::abs(p - oc));
      if (std::abs(e.center - oc) < 0.5 * r0 || inner < 0.2 * r0) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    samples.push_back(std::move(pts));
    scene.ellipses.push_back(e);
  }

  std::vector<geom::RationalSection> secs;
  std::vector<int> contours;
  for (int j = 0; j < n; ++j) {
    const EllipseParams& e = scene.ellipses[j];
    for (int quarter = 0; quarter < 4; ++quarter) {
      const double phi0 = 0.5 * kPi * quarter;
      auto z = [&e, phi0](double t) {
        const double phi = phi0 + 0.25 * kPi * (t + 1.0);
        return e.center +
               std::exp(cplx(0, e.angle)) * cplx(e.a * std::cos(phi), e.b * std::sin(phi));
      };
      secs.push_back(fitted_section(z, 1e-13, 64));
      contours.push_back(j);
    }
  }
  scene.boundary = geom::make_boundary(std::move(secs), std::move(contours));
  return scene;
}

solver::BoundaryData poles_data(int n0, double R) {
  std::vector<cplx> zk(n0);
  std::vector<double> ak(n0);
  for (int k = 1; k <= n0; ++k) {
    zk[k - 1] = R * std::exp(cplx(0, kPi * (2.0 * k + 1.0) / n0));
    ak[k - 1] = static_cast<double>(k) / n0;
  }
  return [zk, ak](double, cplx z, cplx, int) {
    cplx w = 0.0;
    for (size_t k = 0; k < zk.size(); ++k) w += ak[k] / (zk[k] - z);
    return w.real();
  };
}

solver::BoundaryData monopole(cplx source) {
  return [source](double, cplx z, cplx, int) { return std::log(std::abs(z - source)); };
}

solver::BoundaryData essential(double x0) {
  return [x0](double, cplx z, cplx, int) { return std::exp(1.0 / (z - x0)).real(); };
}

solver::BoundaryData uniform_flow() {
  return [](double, cplx, cplx normal, int) { return -normal.real(); };
}

solver::BoundaryData plusminus() {
  return [](double, cplx, cplx, int contour) { return contour % 2 == 0 ? 1.0 : -1.0; };
}

std::vector<std::string> list() {
  return {"ellipse(rx,ry)",
          "trigpoly(gamma,nu)",
          "lshape",
          "circle(x,y,r)",
          "two-circles(d_over_R[,R])",
          "random-ellipses(n,seed[,r0])",
          "data: poles(n0,R)",
          "data: monopole([x,y])",
          "data: essential(x0)",
          "data: uniform-flow",
          "data: plusminus"};
}

} // namespace laprf::gallery
