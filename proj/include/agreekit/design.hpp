#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "agreekit/graph.hpp"
#include "agreekit/linalg.hpp"

namespace agreekit {

enum class DesignObjective { Feasibility, EssentialSpectral, DeflatedNumerical };

DesignObjective parse_objective(const std::string& name);  // feasible|spectral|numerical
std::string objective_name(DesignObjective obj);

struct DesignOptions {
  int max_iterations = 2000;  // subgradient steps / coordinate evaluations
  int restarts = 20;          // multi-start count for the nonconvex objective
  std::uint64_t seed = 0;
  double norm_cap = 1.0;  // optimization confined to ||a||_inf <= norm_cap
  int threads = 0;        // 0: honor AGREEKIT_THREADS, else hardware
  // Called after every accepted improvement with (iteration, objective).
  std::function<void(int, double)> observer;
};

struct DesignProblem {
  Digraph graph;
  ProjectionWeights weights;
  DesignObjective objective = DesignObjective::Feasibility;
  DesignOptions options;
};

// Evidence that a protocol matrix drives every trajectory to W x(0):
//   kernel_residual          max over structural directions of ||A t_i|| and
//                            ||tau_i' A||; zero for exact feasibility
//   zero_multiplicity_check  rank(A) == rank(A^2) == n - k, so the zero
//                            eigenvalue has no defective part
//   essential_abscissa       decay rate of the non-structural spectrum
//   charpoly_tail            p_1 .. p_{n-k} of det(lambda I - A)
//   limit_residual           ||e^{A T*} - W||_F at T* = 40 / |essential|
struct AgreementCertificate {
  Matrix A;
  double kernel_residual = 0.0;
  double essential_abscissa = 0.0;
  bool zero_multiplicity_check = false;
  std::vector<double> charpoly_tail;
  bool tail_crosschecked = false;  // combinatorial route confirmed within budget
  double tail_mismatch = 0.0;
  double limit_residual = 0.0;
  double objective_value = 0.0;
  bool is_static = false;  // k == n: A = 0 and nothing moves

  bool certified() const;
};

// Direct construction on the complete graph: A = T diag(0, B) Tinv with any
// stable B (default -I).
AgreementCertificate design_complete(const ProjectionWeights& weights,
                                     const std::optional<Matrix>& B_choice = {});

// Orthonormal basis of the affine space of weight vectors a satisfying the
// structural constraints A(a) t_i = 0 and tau_i' A(a) = 0 for i <= k.
struct KernelParameterization {
  Matrix basis;  // |E| x dim, orthonormal columns
  int dim = 0;
};

KernelParameterization kernel_parameterization(const DesignProblem& problem);

// Evaluates all certificate evidence for a candidate A on a given pattern.
// Throws PatternViolation when A carries mass off the edge set.
AgreementCertificate certify(const Matrix& A, const ProjectionWeights& weights,
                             const Digraph& graph);

// Convex route: projected subgradient descent on the deflated numerical
// abscissa over the kernel parameterization, renormalized to the norm cap
// each step (the objective is positively homogeneous).  Returns the best
// certified iterate.
AgreementCertificate optimize_deflated_numerical(const DesignProblem& problem);

// Nonconvex route: multi-start randomized coordinate descent on the
// essential spectral abscissa.  Deterministic for fixed seed; restarts are
// independent and reduced by (objective, restart index).
AgreementCertificate optimize_essential_spectral(const DesignProblem& problem);

// Dispatch on problem.objective; Feasibility returns the first certified
// point found (complete graphs take the direct construction).
AgreementCertificate design(const DesignProblem& problem);

}  // namespace agreekit
