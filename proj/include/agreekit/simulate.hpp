#pragma once

#include <functional>
#include <optional>

#include "agreekit/linalg.hpp"

namespace agreekit {

// Sampled trajectory on a uniform grid.  `states` holds one column per
// sample; `reference` holds the agreement target (W x(0) for free runs,
// W u(t) for tracking runs); `error_norms` is the distance to it.
// `udot_norms` is filled by tracking runs for input-to-state reporting.
struct SimTrace {
  Vector times;
  Matrix states;
  Matrix reference;
  Vector error_norms;
  Vector udot_norms;
  bool stiffness_warning = false;
};

// Propagates xdot = A x by stepping with the exact one-step propagator
// e^{A dt}; no integration error beyond the matrix exponential itself.
SimTrace simulate_static(const Matrix& A, const Vector& x0, double horizon,
                         double dt, const ProjectionWeights* weights = nullptr);

// Exogenous reference: u(t) and its derivative.  The two must describe the
// same signal; validate_input measures the worst finite-difference mismatch
// over a probe grid so callers can reject inconsistent pairs.
struct InputSignal {
  std::function<Vector(double)> u;
  std::function<Vector(double)> udot;
};

double validate_input(const InputSignal& input, double horizon, int probes = 64);

// Integrates xdot = A x + udot(t) from x(0) = u(0) with classic RK4 between
// grid points, halving the internal step until the local error estimate
// passes 1e-8; at the 1e-6 step floor the run continues with
// stiffness_warning set.
SimTrace simulate_tracking(const Matrix& A, const InputSignal& input,
                           double horizon, double dt,
                           const ProjectionWeights* weights = nullptr);

// Empirical input-to-state summary of a trace:
//   measured_decay_rate  slope of the log-error fit over the initial transient
//   measured_gain        smallest gamma with
//                        e(t) <= e(0) exp(-rho t) + gamma sup_{s<=t} ||udot||
//                        (absent when the input never moves)
//   bound_satisfied      the displayed inequality re-checked on the grid
struct IssReport {
  double measured_decay_rate = 0.0;
  std::optional<double> measured_gain;
  bool bound_satisfied = false;
};

IssReport iss_report(const SimTrace& trace, const Matrix& A,
                     const ProjectionWeights& weights);

}  // namespace agreekit
