#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include "agreekit/graph.hpp"

namespace agreekit::cli {

// Exit-code contract used by every command.
inline constexpr int kOk = 0;
inline constexpr int kInputError = 2;       // bad paths, parse errors, bad dims
inline constexpr int kInfeasible = 3;       // empty kernel / no stable point
inline constexpr int kEscalatedWarning = 4; // warnings under --strict

struct CommonOptions {
  std::string out_dir = ".";
  bool force = false;   // allow overwriting existing outputs
  bool strict = false;  // escalate simulation warnings to exit 4
  std::uint64_t seed = 0;
  long long budget = kDefaultDecompositionBudget;
  int threads = 0;
};

// graph: generate a model graph or emit a named preset as JSON.
struct GraphConfig {
  std::string model;  // complete | ring_onedir | circulant | line | er | ba
  int n = 0;
  int alpha = 2;
  double p = 0.5;
  int m = 2;
  std::string preset;  // fig2 | example3a | example3b (overrides model)
  std::string out_name = "graph.json";
  CommonOptions common;
};
int cmd_graph(const GraphConfig& cfg, std::ostream& log);

// check: structural feasibility report for (graph, k).
struct CheckConfig {
  std::string graph;  // path or preset name
  int k = 1;
  CommonOptions common;
};
int cmd_check(const CheckConfig& cfg, std::ostream& log);

// design: synthesize and certify a protocol matrix for (graph, W).
struct DesignConfig {
  std::string graph;    // path or preset name
  std::string weights;  // path to W (CSV or JSON matrix)
  std::optional<int> k; // rank; detected from W when absent
  std::string objective = "feasible";  // feasible | spectral | numerical
  int max_iterations = 2000;
  int restarts = 20;
  CommonOptions common;
};
int cmd_design(const DesignConfig& cfg, std::ostream& log);

// simulate: free run xdot = A x from a file-supplied state.
struct SimulateConfig {
  std::string matrix;   // path to A
  std::string weights;  // optional path to W for error reporting
  std::optional<int> k;
  std::string x0;       // optional path; default (1, 2, ..., n) / n
  double horizon = 10.0;
  double dt = 0.01;
  CommonOptions common;
};
int cmd_simulate(const SimulateConfig& cfg, std::ostream& log);

// track: dynamic run xdot = A x + udot(t) against a built-in input family.
struct TrackConfig {
  std::string matrix;
  std::string weights;  // required: tracking error is measured against W u(t)
  std::optional<int> k;
  std::string input = "constant";  // constant | ramp | sinusoid
  double amplitude = 1.0;          // sup norm of udot (ramp/sinusoid)
  double ramp_time = 5.0;
  double frequency = 1.0;          // rad/s, sinusoid only
  std::string u0;                  // optional path to the base vector
  double horizon = 20.0;
  double dt = 0.01;
  CommonOptions common;
};
int cmd_track(const TrackConfig& cfg, std::ostream& log);

// experiment comm-complexity
struct CommConfig {
  std::string model = "erdos_renyi";
  int n = 20;
  int k = 10;
  int trials = 20;
  double p = 0.4;
  int m = 3;
  std::string prefix = "comm";  // output file stem
  CommonOptions common;
};
int cmd_experiment_comm(const CommConfig& cfg, std::ostream& log);

// experiment regression (empty paths fall back to the built-in dataset)
struct RegressionConfig {
  std::string H;      // optional path
  std::string y;      // optional path
  std::string graph;  // optional path or preset; default circulant(4)
  int n = 50;
  CommonOptions common;
};
int cmd_experiment_regression(const RegressionConfig& cfg, std::ostream& log);

// experiment formation
struct FormationConfig {
  std::string mode = "all";  // consensus | orthogonal | oblique | all
  std::string graph;         // optional path or preset; default circulant(6)
  CommonOptions common;
};
int cmd_experiment_formation(const FormationConfig& cfg, std::ostream& log);

// Reproduction bundles: fig1 (communication), fig5 (regression), fig6
// (formation), example3 (structure checks).
int cmd_preset(const std::string& name, const CommonOptions& common,
               std::ostream& log);

}  // namespace agreekit::cli
