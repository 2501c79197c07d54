#include "agreekit/presets.hpp"

#include <random>
#include <stdexcept>

namespace agreekit {

namespace {

Digraph fig2_graph() {
  return Digraph::from_edges(
      4, {{0, 0}, {0, 2}, {1, 0}, {1, 2}, {2, 1}, {2, 3}, {3, 1}});
}

Digraph example3a_graph() {
  return Digraph::from_edges(5, {{0, 0},
                                 {0, 1},
                                 {0, 2},
                                 {0, 4},
                                 {1, 0},
                                 {1, 1},
                                 {2, 1},
                                 {2, 2},
                                 {2, 3},
                                 {3, 2},
                                 {3, 3},
                                 {4, 0},
                                 {4, 3},
                                 {4, 4}});
}

}  // namespace

Digraph preset_graph(const std::string& name) {
  if (name == "fig2") return fig2_graph();
  if (name == "example3a") return example3a_graph();
  if (name == "example3b") return example3a_graph().with_edge(1, 2);
  throw std::invalid_argument("unknown preset graph: " + name);
}

std::vector<std::string> preset_graph_names() {
  return {"fig2", "example3a", "example3b"};
}

RegressionPreset regression_preset(int n, std::uint64_t seed) {
  if (n < 3) throw std::invalid_argument("regression preset needs n >= 3");
  RegressionPreset p;
  p.H = Matrix(n, 2);
  for (int i = 0; i < n; ++i) {
    p.H(i, 0) = 1.0;
    p.H(i, 1) = static_cast<double>(i + 1) / n;
  }
  p.theta_true = Vector(2);
  p.theta_true << 1.0, 2.0;
  std::mt19937_64 rng(seed + 0x5DEECE66Dull);
  std::normal_distribution<double> noise(0.0, 0.25);
  p.y = p.H * p.theta_true;
  for (int i = 0; i < n; ++i) p.y(i) += noise(rng);
  p.graph = generate_graph(GraphModel::circulant(4), n);
  return p;
}

}  // namespace agreekit
