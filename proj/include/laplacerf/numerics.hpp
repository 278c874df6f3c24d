#pragma once

// Dense linear-algebra contracts used by the rest of the library:
// column-pivoted least squares, polynomial root finding through
// companion/colleague eigenproblems, and eigenvalues of Arnoldi
// Hessenberg matrices with an optional rank-one update. Backed by Eigen.

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "laplacerf/types.hpp"

namespace laprf::num {

struct LsqResult {
  Eigen::VectorXd x;
  double residual_norm = 0.0;
  Eigen::Index rank = 0;
  double rcond = 0.0; // reciprocal condition estimate from the pivoted R diagonal
};

struct LsqResultC {
  Eigen::VectorXcd x;
  double residual_norm = 0.0;
  Eigen::Index rank = 0;
  double rcond = 0.0;
};

// Minimize ||A x - b||_2 by Householder QR with column pivoting.
// Columns whose pivot falls below rtol * (leading pivot) get zero
// coefficients. rtol < 0 selects eps * max(rows, cols).
LsqResult lsq_colpivot(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, double rtol = -1.0);
LsqResultC lsq_colpivot(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& b, double rtol = -1.0);

// Roots of a monomial-basis polynomial (ascending coefficients) via the
// balanced companion matrix. Leading near-zero coefficients are trimmed;
// the number of roots equals the trimmed degree.
std::vector<cplx> poly_roots(std::span<const cplx> coeffs);

// Roots of a Chebyshev-basis polynomial via the balanced colleague matrix.
std::vector<cplx> cheb_roots(std::span<const cplx> coeffs);

// Eigenvalues of C = H(0:N-1,0:N-1) - H(N,N-1) * c * e_{N-1}^T given the
// (N+1) x N Arnoldi Hessenberg matrix H. Without the update vector, H must
// be square and its eigenvalues are returned directly.
std::vector<cplx> hessenberg_eigs(const Eigen::MatrixXcd& H,
                                  const std::optional<Eigen::VectorXcd>& rank_one_update = std::nullopt);

// Parlett-Reinsch balancing (diagonal similarity with power-of-two scales).
void balance_in_place(Eigen::MatrixXcd& m);

// Deterministic ordering used for all returned root sets.
void sort_roots(std::vector<cplx>& roots);

// Pair near-conjugate roots and symmetrize them; returns false (leaving the
// input unchanged) when the set is not conjugate-closed within tol.
bool enforce_conjugate_closure(std::vector<cplx>& roots, double tol);

} // namespace laprf::num
