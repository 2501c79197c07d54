// Test-side reference implementations, kept deliberately naive and
// independent of the library algorithms they are used to check.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace oracles {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Matrix exponential by plain Taylor series after scaling by a power of two.
// Slow and simple: no Pade machinery, no norm estimates beyond the scaling.
inline Matrix expm_taylor(const Matrix& A) {
  if (A.rows() != A.cols()) throw std::invalid_argument("square matrix required");
  const Eigen::Index n = A.rows();
  double norm = A.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  while (norm > 0.25 && squarings < 60) {
    norm /= 2.0;
    ++squarings;
  }
  const Matrix S = A / std::ldexp(1.0, squarings);
  Matrix result = Matrix::Identity(n, n);
  Matrix term = Matrix::Identity(n, n);
  for (int k = 1; k <= 30; ++k) {
    term = (term * S) / static_cast<double>(k);
    result += term;
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

// Rank by Gaussian elimination with partial pivoting; entries below
// rel_tol times the largest original entry count as zero.
inline int rank_gauss(Matrix A, double rel_tol = 1e-10) {
  const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
  const double tol = rel_tol * scale;
  int rank = 0;
  Eigen::Index row = 0;
  for (Eigen::Index col = 0; col < A.cols() && row < A.rows(); ++col) {
    Eigen::Index pivot = row;
    for (Eigen::Index r = row + 1; r < A.rows(); ++r)
      if (std::abs(A(r, col)) > std::abs(A(pivot, col))) pivot = r;
    if (std::abs(A(pivot, col)) <= tol) continue;
    A.row(row).swap(A.row(pivot));
    for (Eigen::Index r = row + 1; r < A.rows(); ++r) {
      const double f = A(r, col) / A(row, col);
      A.row(r) -= f * A.row(row);
    }
    ++row;
    ++rank;
  }
  return rank;
}

// Characteristic polynomial coefficients (p1..pn of det(xI - A) =
// x^n + p1 x^{n-1} + ... + pn) by evaluating the determinant at n+1
// integer points and solving the resulting Vandermonde system.
inline Vector charpoly_interp(const Matrix& A) {
  if (A.rows() != A.cols()) throw std::invalid_argument("square matrix required");
  const Eigen::Index n = A.rows();
  if (n == 0) return Vector(0);
  const Eigen::Index m = n + 1;
  Matrix V(m, m);
  Vector rhs(m);
  const Matrix I = Matrix::Identity(n, n);
  for (Eigen::Index s = 0; s < m; ++s) {
    // Centered integer nodes keep the Vandermonde system well conditioned
    // for the small n used in tests.
    const double x = static_cast<double>(s) - static_cast<double>(n) / 2.0;
    rhs(s) = Eigen::FullPivLU<Matrix>(x * I - A).determinant();
    double p = 1.0;
    for (Eigen::Index j = 0; j < m; ++j) {
      V(s, m - 1 - j) = p;
      p *= x;
    }
  }
  const Vector coeffs = V.fullPivLu().solve(rhs);
  // coeffs = (1, p1, ..., pn); drop the leading monic coefficient.
  return coeffs.tail(n);
}

}  // namespace oracles
