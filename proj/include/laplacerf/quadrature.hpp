#pragma once

// Rational Gauss-Chebyshev testing rules. A rule built on a conjugate-
// closed multiset of parameter-plane poles integrates, against the
// Chebyshev weight, every rational function whose poles lie in the
// multiset (orders counted across both factors of a product) together
// with a polynomial part whose degree is set by the number of poles at
// infinity. Far poles are pruned: replaced by poles at infinity using a
// tabulated polynomial-degree requirement indexed by elliptical radius.

#include <span>
#include <string>
#include <vector>

#include "laplacerf/geometry.hpp"
#include "laplacerf/types.hpp"

namespace laprf::quad {

struct Rule1D {
  std::vector<double> x; // ascending nodes in (-1,1)
  std::vector<double> w; // positive weights
};

// Nodes and weights exact for { N(s)/prod_a (s-a) : deg N <= |A| + 2*n_inf + 1 }
// against (1-s^2)^{-1/2}. The multiset A must be closed under conjugation
// (real poles appear an even number of times); node count = |A|/2 + n_inf + 1.
Rule1D rational_chebyshev_rule(std::span<const cplx> poles, int n_infinite);

// Elliptical radius of the Bernstein ellipse through s0.
double elliptical_radius(cplx s0);

class PruneTable {
public:
  // Smallest Chebyshev degree approximating (s-s0)^{-3} on [-1,1] to max
  // error <= eps, for s0 real on the rho-ellipse; kKeep marks "keep pole".
  static constexpr int kKeep = 1 << 20;

  static const PruneTable& builtin();
  static PruneTable build(std::span<const double> epsilons);

  int required_degree(double rho, double eps) const; // bilinear in logs, clamped
  void dump_csv(const std::string& path) const;
  static PruneTable load_csv(const std::string& path);

  std::vector<double> rho_grid;
  std::vector<double> eps_grid;
  std::vector<int> degree; // [rho][eps] row-major
};

struct PruneResult {
  std::vector<cplx> kept;       // with multiplicity, not conjugate-closed
  std::vector<int> kept_mult;
  int n_infinite = 0;
  int max_dropped_degree = 0;
};

struct PruneOptions {
  int degree_budget = 64;  // a dropped pole may demand at most this degree
  int min_n_infinite = 4;
};

PruneResult prune(std::span<const cplx> alphas, std::span<const int> mult, double epsilon,
                  const PruneTable& table, const PruneOptions& opts = {});

struct WeightedPole {
  cplx z;
  int mult = 1; // 3 for basis poles, 1 for excluded (inside-domain) poles
};

struct Rule {
  std::vector<double> s, w;    // nodes in (0,1) and positive weights
  std::vector<int> section_of; // per node
  std::vector<int> contour_of; // per node
  std::vector<cplx> z, dz;     // cached boundary point and dz/ds per node
  std::vector<cplx> pole_signature;
  std::size_t size() const { return s.size(); }
};

struct RuleOptions {
  double epsilon = 1e-4; // pruning accuracy target, Eq.-style min(1e-4, 0.01*dE)
  bool prune = true;
  int min_n_infinite = 4;
  int extra_n_infinite = 0;
  int degree_budget = 64;
};

// One rule serving both the residue solve and the pole refit: per section,
// the parameter-plane roots of every pole (inside and outside) enter with
// their multiplicity, conjugate reflection closes the multiset, far roots
// are pruned, and the section rules are concatenated.
Rule build_boundary_rule(const geom::Boundary& b, std::span<const WeightedPole> poles,
                         std::span<const cplx> log_centers, const RuleOptions& opts = {});

// Pole-free rule: classical Gauss-Chebyshev with n_infinite+1 nodes per section.
Rule chebyshev_boundary_rule(const geom::Boundary& b, int n_infinite);

void dump_rule_csv(const Rule& rule, const std::string& path);

} // namespace laprf::quad
