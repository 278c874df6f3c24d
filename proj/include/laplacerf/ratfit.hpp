#pragma once

// Pole relocation: fit a degree-N rational function to boundary samples
// of the estimated complex potential in the quadrature-induced norm.
// Vector fitting (Lagrange basis on the current poles) is the default;
// iterated rational fitting (dual Arnoldi bases plus a generalized
// companion eigenproblem) takes over when VF is ill-conditioned.

#include <functional>
#include <span>
#include <vector>

#include "laplacerf/geometry.hpp"
#include "laplacerf/quadrature.hpp"
#include "laplacerf/types.hpp"

namespace laprf::ratfit {

struct FitInput {
  const quad::Rule* rule = nullptr; // nodes, weights and boundary points
  std::vector<cplx> samples;        // What(z_k)
  std::vector<cplx> poles;          // all current poles, inside and outside
  int order = 0;                    // N
  double scale = 1.0;               // boundary diameter, sets drop/pairing tolerances
};

struct FitResult {
  std::vector<cplx> new_poles; // finite zeros of Q
  char basis_used = '?';       // 'V' or 'I'
  double rcond = 0.0;
  double residual_norm = 0.0;
  bool switch_to_irf = false; // VF declined (clustered poles / bad conditioning)
  bool degenerate = false;    // Q has no finite zeros
  int effective_order = 0;    // reduced on Arnoldi breakdown
  int dropped_at_infinity = 0;
};

FitResult vf_step(const FitInput& in);
FitResult irf_step(const FitInput& in);

// vf_step unless it signals IRF; cleans the root set (at-infinity drop,
// conjugate pairing). Returns the previous poles with degenerate=true when
// both paths fail to produce finite poles.
FitResult relocate(const FitInput& in, double switch_rcond_threshold = 1.4901161193847656e-08);

struct InitialPoles {
  std::vector<cplx> poles;
  std::vector<geom::DomainSide> side; // relative to the solution domain
  bool fallback_ring = false;
};

// Degree-2N fit of the (real) boundary data with trivial weight Q=1,
// classification of the zeros, and selection of N poles prioritizing
// outside-domain zeros by descending residue magnitude. classify must
// return the side relative to the solution domain.
InitialPoles initial_poles(const geom::Boundary& b, const quad::Rule& rule,
                           std::span<const cplx> f_samples, int N,
                           const std::function<geom::DomainSide(cplx)>& classify);

} // namespace laprf::ratfit
