#include "agreekit/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace agreekit {

namespace {

// Full orthonormal basis of Im(B)^perp, as the trailing columns of the Q
// factor of a full Householder QR of B.
Matrix orthogonal_complement(const Matrix& B) {
  Eigen::HouseholderQR<Matrix> qr(B);
  Matrix Q = qr.householderQ();
  return Q.rightCols(B.rows() - B.cols());
}

Matrix orthonormal_range(const Matrix& B) {
  Eigen::HouseholderQR<Matrix> qr(B);
  Matrix Q = qr.householderQ();
  return Q.leftCols(B.cols());
}

}  // namespace

int numerical_rank(const Matrix& A, double rel_tol) {
  if (A.size() == 0) return 0;
  Eigen::BDCSVD<Matrix> svd(A);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return 0;
  const double cutoff = rel_tol * sv(0);
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff && sv(i) > 0.0) ++rank;
  return rank;
}

void ProjectionWeights::validate(double tolerance) const {
  if (W.rows() != n || W.cols() != n || T.rows() != n || T.cols() != n ||
      Tinv.rows() != n || Tinv.cols() != n || k < 0 || k > n)
    throw NotAProjection("projection container has inconsistent dimensions");
  const double scale = 1.0 + W.norm();
  if ((W * W - W).norm() > tolerance * scale)
    throw NotAProjection("W fails idempotence");
  if ((T * Tinv - Matrix::Identity(n, n)).norm() > tolerance * (1.0 + T.norm() * Tinv.norm()))
    throw NotAProjection("T * Tinv deviates from identity");
  Matrix D = Matrix::Zero(n, n);
  D.topLeftCorner(k, k).setIdentity();
  if ((T * D * Tinv - W).norm() > tolerance * scale)
    throw NotAProjection("T diag(I,0) Tinv deviates from W");
}

ProjectionWeights build_projection(const Matrix& M_basis, const Matrix& N_basis) {
  const int n = static_cast<int>(M_basis.rows());
  const int k = static_cast<int>(M_basis.cols());
  if (n == 0 || k == 0 || k > n)
    throw RankDeficientBasis("basis must be n x k with 1 <= k <= n");
  if (N_basis.rows() != n || N_basis.cols() != k)
    throw RankDeficientBasis("basis dimensions disagree");
  if (numerical_rank(M_basis) < k)
    throw RankDeficientBasis("target-subspace basis is rank deficient");
  if (numerical_rank(N_basis) < k)
    throw RankDeficientBasis("weight-subspace basis is rank deficient");

  const Matrix S = N_basis.transpose() * M_basis;
  Eigen::BDCSVD<Matrix> svd(S);
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  if (smin <= 0.0 || sv(0) / smin > tol::cond_max)
    throw SubspacesNotComplementary(
        "pairing matrix N' M is singular or too ill conditioned");

  ProjectionWeights P;
  P.n = n;
  P.k = k;
  const Matrix tau = S.partialPivLu().solve(N_basis.transpose());  // k x n
  P.W = M_basis * tau;
  if (k == n) {
    P.Tinv = tau;
    P.T = tau.partialPivLu().inverse();
    return P;
  }
  // Rows of Tinv: the limit weights on top, an orthonormal basis of
  // Im(W)^perp below; the inverse then carries M_basis in its leading
  // columns and a kernel basis of W behind it.
  const Matrix U2 = orthogonal_complement(M_basis);
  Matrix Tinv(n, n);
  Tinv.topRows(k) = tau;
  Tinv.bottomRows(n - k) = U2.transpose();
  P.Tinv = Tinv;
  P.T = Tinv.partialPivLu().inverse();
  return P;
}

ProjectionWeights decompose_projection(const Matrix& W, int k) {
  const int n = static_cast<int>(W.rows());
  if (W.cols() != n || n == 0) throw NotAProjection("W must be square");
  if (k < 0 || k > n) throw RankDeficientBasis("rank k out of range");
  const double scale = std::max(1.0, W.norm());
  if ((W * W - W).norm() > tol::proj * scale)
    throw NotAProjection("matrix fails idempotence");

  ProjectionWeights P;
  P.n = n;
  P.k = k;
  P.W = W;
  if (k == n) {
    // The only rank-n projection is the identity.
    P.T = Matrix::Identity(n, n);
    P.Tinv = Matrix::Identity(n, n);
    return P;
  }
  if (k == 0) {
    if (W.norm() > tol::proj)
      throw RankDeficientBasis("rank-0 projection must be the zero matrix");
    P.T = Matrix::Identity(n, n);
    P.Tinv = Matrix::Identity(n, n);
    return P;
  }

  Eigen::BDCSVD<Matrix> svd(W, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > tol::rank_rel * sv(0)) ++rank;
  if (rank != k)
    throw RankDeficientBasis("projection rank does not match requested k");

  const Matrix T1 = svd.matrixU().leftCols(k);   // basis of Im(W)
  const Matrix Vk = svd.matrixV().leftCols(k);   // basis of Im(W')
  const Matrix U2 = svd.matrixU().rightCols(n - k);  // basis of Im(W)^perp
  const Matrix tau = (Vk.transpose() * T1).partialPivLu().solve(Vk.transpose());
  Matrix Tinv(n, n);
  Tinv.topRows(k) = tau;
  Tinv.bottomRows(n - k) = U2.transpose();
  P.Tinv = Tinv;
  P.T = Tinv.partialPivLu().inverse();
  return P;
}

Matrix matrix_exponential(const Matrix& A, double t) {
  const int n = static_cast<int>(A.rows());
  if (A.cols() != n) throw EigenFailure("matrix exponential needs a square matrix");
  if (n == 0) return Matrix(0, 0);
  Matrix X = A * t;
  if (!X.allFinite()) throw EigenFailure("matrix exponential input not finite");

  // Degree-13 Pade numerator/denominator coefficients.
  static const double b[] = {64764752532480000.0, 32382376266240000.0,
                             7771770303897600.0,  1187353796428800.0,
                             129060195264000.0,   10559470521600.0,
                             670442572800.0,      33522128640.0,
                             1323241920.0,        40840800.0,
                             960960.0,            16380.0,
                             182.0,               1.0};
  const double theta13 = 5.371920351148152;
  const double norm1 = X.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > theta13) {
    squarings = static_cast<int>(std::ceil(std::log2(norm1 / theta13)));
    X /= std::pow(2.0, squarings);
  }

  const Matrix I = Matrix::Identity(n, n);
  const Matrix X2 = X * X;
  const Matrix X4 = X2 * X2;
  const Matrix X6 = X4 * X2;
  const Matrix U =
      X * (X6 * (b[13] * X6 + b[11] * X4 + b[9] * X2) + b[7] * X6 + b[5] * X4 +
           b[3] * X2 + b[1] * I);
  const Matrix V = X6 * (b[12] * X6 + b[10] * X4 + b[8] * X2) + b[6] * X6 +
                   b[4] * X4 + b[2] * X2 + b[0] * I;
  Matrix F = (V - U).partialPivLu().solve(V + U);
  for (int i = 0; i < squarings; ++i) F = F * F;
  if (!F.allFinite()) throw EigenFailure("matrix exponential overflowed");
  return F;
}

namespace {

AbscissaReport abscissas_impl(const Matrix& A, const ProjectionWeights* weights) {
  const int n = static_cast<int>(A.rows());
  if (A.cols() != n || n == 0) throw EigenFailure("abscissas need a nonempty square matrix");
  AbscissaReport r;

  Eigen::EigenSolver<Matrix> es(A, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "eigenvalue iteration failed to converge; ||A|| = " << A.norm();
    throw EigenFailure(msg.str());
  }
  const auto eig = es.eigenvalues();
  r.spectral = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) r.spectral = std::max(r.spectral, eig(i).real());

  const Matrix S = 0.5 * (A + A.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> ses(S, Eigen::EigenvaluesOnly);
  if (ses.info() != Eigen::Success)
    throw EigenFailure("symmetric eigenvalue iteration failed to converge");
  r.numerical = ses.eigenvalues().maxCoeff();

  if (weights == nullptr) {
    r.essential_spectral = r.spectral;
    r.deflated_numerical = r.numerical;
    return r;
  }
  const int k = weights->k;
  if (weights->n != n) throw EigenFailure("projection dimension does not match matrix");

  // Delete the k eigenvalues closest to zero; they are the structural modes.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return std::abs(eig(a)) < std::abs(eig(b));
  });
  r.essential_spectral = -std::numeric_limits<double>::infinity();
  for (int i = k; i < n; ++i)
    r.essential_spectral = std::max(r.essential_spectral, eig(order[i]).real());

  if (k == n) {
    r.deflated_numerical = -std::numeric_limits<double>::infinity();
    return r;
  }
  const Matrix P2 = orthonormal_range(weights->T.rightCols(n - k));
  Eigen::SelfAdjointEigenSolver<Matrix> dses(P2.transpose() * S * P2,
                                             Eigen::EigenvaluesOnly);
  if (dses.info() != Eigen::Success)
    throw EigenFailure("deflated symmetric eigenvalue iteration failed");
  r.deflated_numerical = dses.eigenvalues().maxCoeff();
  return r;
}

}  // namespace

AbscissaReport abscissas(const Matrix& A) { return abscissas_impl(A, nullptr); }

AbscissaReport abscissas(const Matrix& A, const ProjectionWeights& weights) {
  return abscissas_impl(A, &weights);
}

std::vector<double> charpoly_dense(const Matrix& A) {
  const int n = static_cast<int>(A.rows());
  if (A.cols() != n) throw EigenFailure("characteristic polynomial needs a square matrix");
  // Faddeev-LeVerrier: M_0 = I, c_l = -tr(A M_{l-1}) / l, M_l = A M_{l-1} + c_l I.
  std::vector<double> p(n);
  Matrix M = Matrix::Identity(n, n);
  for (int l = 1; l <= n; ++l) {
    const Matrix AM = A * M;
    const double c = -AM.trace() / static_cast<double>(l);
    p[l - 1] = c;
    M = AM + c * Matrix::Identity(n, n);
  }
  return p;
}

}  // namespace agreekit
