#pragma once

#include <cstdint>
#include <optional>

#include "agreekit/design.hpp"
#include "agreekit/graph.hpp"
#include "agreekit/simulate.hpp"

namespace agreekit {

// Transmission counting for running one rank-k agreement protocol versus k
// independent rank-1 protocols over the same topologies.  One transmission
// is one scalar sent over one directed non-self edge per iteration, so the
// per-agent agreement cost equals the mean out-degree and the parallel
// arrangement costs exactly k times as much.
struct CommComplexityResult {
  std::string model;
  int n = 0;
  int k = 0;
  int trials = 0;
  long long total_tx_agreement = 0;  // summed over trials, one iteration each
  long long total_tx_parallel = 0;
  double per_agent_tx_agreement = 0.0;
  double per_agent_tx_parallel = 0.0;
  double mean_out_degree = 0.0;
  double ratio = 0.0;                       // parallel / agreement
  std::vector<long long> per_trial_tx;      // agreement transmissions by trial
};

CommComplexityResult comm_complexity(const GraphModel& model, int n, int k,
                                     int trials, std::uint64_t seed);

// Distributed least squares: agents hold entries of y and converge to the
// fitted values H (H'H)^{-1} H' y by running agreement on W = projector onto
// Im(H).
struct RegressionResult {
  Vector theta_ls;  // centralized (H'H)^{-1} H' y
  Vector y_hat;     // final agreement state
  SimTrace trace;
  AgreementCertificate cert;
  ProjectionWeights weights;
};

RegressionResult regression_demo(const Matrix& H, const Vector& y,
                                 const Digraph& graph, std::uint64_t seed = 0);

// Planar formation driving: positions evolve under the 2-D lift (A kron I2)
// of one certified n x n protocol, so each coordinate runs the same
// agreement.  `constraint` (rows c x n) defines the target subspace as its
// kernel; `left_basis` optionally replaces the orthogonal complement to make
// the limit an oblique projection.
struct FormationSpec {
  int n_robots = 0;
  Matrix initial_positions;  // n x 2, row per robot
  Matrix constraint;         // c x n, target subspace = ker(constraint)
  std::optional<Matrix> left_basis;  // n x (n - c), weight subspace for oblique runs

  static FormationSpec default_octet();  // 8 robots on the unit circle
};

enum class FormationMode { Consensus, Orthogonal, Oblique };

struct FormationResult {
  SimTrace trace2d;          // 2n rows, interleaved (x1, y1, x2, y2, ...)
  Matrix final_positions;    // n x 2
  Matrix target_positions;   // n x 2, the projected initial positions
  AgreementCertificate cert;
  ProjectionWeights weights;
};

FormationResult formation_demo(const FormationSpec& spec, FormationMode mode,
                               const Digraph& graph, std::uint64_t seed = 0);

// Interleaved Kronecker lift A kron I2 acting on (x1, y1, x2, y2, ...).
Matrix kron_identity2(const Matrix& A);

}  // namespace agreekit
