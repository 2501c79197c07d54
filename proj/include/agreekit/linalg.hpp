#pragma once

#include <Eigen/Dense>
#include <vector>

#include "agreekit/errors.hpp"

namespace agreekit {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// A rank-k projection W together with a similarity T that diagonalizes it:
//
//   W = T * diag(I_k, 0) * Tinv
//
// The first k columns of T span the target subspace (the states reached in
// the limit) and the first k rows of Tinv span the left invariant subspace
// that determines the limit weights.  The bi-orthogonality tau_i' * t_j =
// delta_ij is built into T * Tinv = I.
struct ProjectionWeights {
  int n = 0;
  int k = 0;
  Matrix W;
  Matrix T;
  Matrix Tinv;

  Matrix t_cols() const { return T.leftCols(k); }
  Matrix tau_rows() const { return Tinv.topRows(k); }

  // Throws if the stored decomposition stopped being consistent.
  void validate(double tolerance = tol::proj) const;
};

// Numerical rank: number of singular values above rank_rel * sigma_max.
int numerical_rank(const Matrix& A, double rel_tol = tol::rank_rel);

// Builds the projection onto Im(M_basis) along the complement of the row
// space of N_basis':
//
//   W = M (N' M)^{-1} N'
//
// M_basis and N_basis are n x k with full column rank; N' M must be
// invertible with condition below tol::cond_max, otherwise the two
// subspaces are (numerically) not complementary.
ProjectionWeights build_projection(const Matrix& M_basis, const Matrix& N_basis);

// Recovers a ProjectionWeights from an idempotent W of rank k.
ProjectionWeights decompose_projection(const Matrix& W, int k);

// e^{A t} by scaling-and-squaring with a degree-13 Pade approximant.
Matrix matrix_exponential(const Matrix& A, double t = 1.0);

// Convergence-rate functionals of a square matrix A.
//
//   spectral            max Re(lambda) over all eigenvalues
//   essential_spectral  max Re(lambda) after deleting the k eigenvalues of
//                       smallest magnitude (the structural zeros of an
//                       agreement matrix); equals spectral when no
//                       projection is attached
//   numerical           lambda_max((A + A') / 2)
//   deflated_numerical  lambda_max of the symmetric part restricted to the
//                       error subspace Im(t_{k+1} ... t_n); equals numerical
//                       when no projection is attached
struct AbscissaReport {
  double spectral = 0.0;
  double essential_spectral = 0.0;
  double numerical = 0.0;
  double deflated_numerical = 0.0;
};

AbscissaReport abscissas(const Matrix& A);
AbscissaReport abscissas(const Matrix& A, const ProjectionWeights& weights);

// Coefficients (p_1, ..., p_n) of det(lambda I - A) = lambda^n + p_1
// lambda^{n-1} + ... + p_n, via the Faddeev-LeVerrier trace recursion.
std::vector<double> charpoly_dense(const Matrix& A);

}  // namespace agreekit
