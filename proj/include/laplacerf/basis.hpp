#pragma once

// Dipole, constant and logarithmic basis functions, the weighted
// least-squares systems for the three BVP types, and evaluation of the
// resulting complex potential.

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "laplacerf/geometry.hpp"
#include "laplacerf/quadrature.hpp"
#include "laplacerf/types.hpp"

namespace laprf::basis {

struct PoleSet {
  std::vector<cplx> poles;
  // Side relative to the solution domain Omega: Outside poles carry basis
  // functions, Inside (and OnBoundary, conservatively) poles do not.
  std::vector<geom::DomainSide> side;

  int n_out() const;
  int n_in() const;
  std::vector<cplx> outside_poles() const;
};

struct PotentialModel {
  bool has_const = true; // absent for exterior Neumann
  double a0 = 0.0;
  std::vector<cplx> poles;    // outside-domain poles only
  std::vector<cplx> residues; // a_n = a_n^R + i a_n^I
  std::vector<double> log_coeffs;
  std::vector<cplx> log_centers;
  std::vector<double> v_consts; // exterior Neumann per-contour constants

  cplx eval(cplx z) const; // W(z), principal-branch logarithms
  double eval_u(cplx z) const { return eval(z).real(); }
  double eval_v(cplx z) const { return eval(z).imag(); }
  // Re/Im of W over many points; SoA in/out, used on dense grids.
  void eval_many(std::span<const double> x, std::span<const double> y,
                 std::span<double> u, std::span<double> v) const;
};

// phiR + i*phiI = 1/(zp - z).
void dipole_parts(cplx z, cplx zp, double* phiR, double* phiI);

struct ColumnMap {
  int const_col = -1;
  int first_phi_r = -1, first_phi_i = -1, n_poles = 0;
  int first_log = -1, n_log = 0; // J-1 eliminated-log columns
  int first_v = -1, n_v = 0;
  int cols = 0;
};

struct Assembled {
  Eigen::MatrixXd A; // rows scaled by sqrt(weight)
  Eigen::VectorXd rhs;
  ColumnMap map;
  std::vector<cplx> outside_poles;
};

// Dirichlet rows: sqrt(l_k) [1, phiR_n, -phiI_n, log|(z-c_j)/(z-c_J)| (j<J)] ~ sqrt(l_k) f_k.
Assembled assemble_dirichlet(const quad::Rule& rule, const PoleSet& poles,
                             std::span<const double> f_samples,
                             std::span<const cplx> log_centers);

// Neumann rows: sqrt(l_k) [phiI_n, phiR_n, -1 on contour j] ~ sqrt(l_k) F_k;
// coefficients are (a_n^R, a_n^I, v_j) and there is no constant column.
Assembled assemble_neumann(const quad::Rule& rule, const PoleSet& poles,
                           std::span<const double> F_samples, int num_contours);

// Rebuild a model from the solved coefficient vector.
PotentialModel dirichlet_model(const Assembled& sys, const Eigen::VectorXd& x,
                               std::span<const cplx> log_centers);
PotentialModel neumann_model(const Assembled& sys, const Eigen::VectorXd& x,
                             std::span<const double> known_log_coeffs,
                             std::span<const cplx> log_centers);

} // namespace laprf::basis
