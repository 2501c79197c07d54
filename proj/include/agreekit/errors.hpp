#pragma once

#include <stdexcept>
#include <string>

namespace agreekit {

// Numerical tolerances shared across the toolkit.  All checks that compare
// floating-point results against structural requirements go through these.
namespace tol {
inline constexpr double proj = 1e-8;       // idempotence slack for projection matrices
inline constexpr double rank_rel = 1e-10;  // singular values below rank_rel * sigma_max count as zero
inline constexpr double eig = 1e-8;        // eigenvalue comparisons against zero
inline constexpr double cond_max = 1e12;   // condition-number ceiling before declaring degeneracy
inline constexpr double design = 1e-8;     // residual ceiling for certified designs
}  // namespace tol

struct RankDeficientBasis : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SubspacesNotComplementary : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotAProjection : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EigenFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CombinatorialBudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SearchBudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidModelParameters : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EmptyKernel : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NoStableFeasiblePoint : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PatternViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GraphGenerationFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ComplementarityViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InsufficientTrace : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace agreekit
