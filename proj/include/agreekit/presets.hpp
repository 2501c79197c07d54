#pragma once

#include <string>
#include <vector>

#include "agreekit/experiments.hpp"
#include "agreekit/graph.hpp"

namespace agreekit {

// Small named graphs used throughout the test suite and the reproduction
// presets: "fig2" (4 nodes, 7 edges), "example3a" (5 nodes, 14 edges),
// "example3b" (example3a plus one extra edge).
Digraph preset_graph(const std::string& name);
std::vector<std::string> preset_graph_names();

// Default inputs for the regression preset: H = [1 | ramp], y = H theta + noise.
struct RegressionPreset {
  Matrix H;
  Vector y;
  Vector theta_true;
  Digraph graph;
};
RegressionPreset regression_preset(int n = 50, std::uint64_t seed = 0);

}  // namespace agreekit
