#pragma once

#include <Eigen/Dense>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "agreekit/errors.hpp"
#include "agreekit/linalg.hpp"

namespace agreekit {

// Directed edge (row, col): information flows from node `col` into node
// `row`, and the associated weight sits at position (row, col) of the
// protocol matrix.  Indices are 0-based internally; serialization is
// 1-based.  Self-loops (row == col) are ordinary edges.
struct Edge {
  int row = 0;
  int col = 0;
  auto operator<=>(const Edge&) const = default;
};

struct Digraph {
  int n = 0;
  std::vector<Edge> edges;  // sorted by (row, col), no duplicates

  static Digraph from_edges(int n, std::vector<Edge> edges);

  int num_edges() const { return static_cast<int>(edges.size()); }
  bool has_edge(int row, int col) const { return edge_index(row, col) >= 0; }
  int edge_index(int row, int col) const;  // -1 when absent
  bool has_self_loop(int v) const { return has_edge(v, v); }
  int num_self_loops() const;
  // Nodes w such that (w, v) is an edge: the recipients of v's state.
  std::vector<std::vector<int>> out_adjacency() const;
  Digraph with_edge(int row, int col) const;
};

// Weight assignment over a digraph's edge set, stored in edge order.
struct EdgeParameters {
  Digraph graph;
  Vector values;  // aligned with graph.edges

  static EdgeParameters zeros(const Digraph& g);
  double& at(int row, int col);
  double at(int row, int col) const;
  Matrix realize() const;  // n x n matrix, zero off-pattern
};

// A set of node-disjoint cycles; `total_length` is the summed cycle length
// and `d` the number of cycles.  Cycles are stored as sorted edge lists and
// the cycles themselves are sorted, so equal decompositions compare equal.
struct HamiltonianDecomposition {
  std::vector<std::vector<Edge>> cycles;
  int total_length = 0;
  int d() const { return static_cast<int>(cycles.size()); }
  std::vector<Edge> all_edges() const;
  bool operator==(const HamiltonianDecomposition&) const = default;
};

inline constexpr long long kDefaultDecompositionBudget = 10'000'000;

// All simple cycles of length <= max_length, as sorted edge lists.
std::vector<std::vector<Edge>> enumerate_simple_cycles(const Digraph& g,
                                                       int max_length);

// For each l in 1..max_length, every set of node-disjoint cycles with total
// length l.  Buckets are sorted lexicographically by combined edge list.
// Throws CombinatorialBudgetExceeded once the total count passes `budget`.
std::map<int, std::vector<HamiltonianDecomposition>> enumerate_decompositions(
    const Digraph& g, int max_length,
    long long budget = kDefaultDecompositionBudget);

// Coefficients p_1..p_upto of the characteristic polynomial of the weighted
// adjacency realization, as signed sums over node-disjoint cycle families:
//   p_l = sum over decompositions of total length l of (-1)^d * prod(weights).
std::vector<double> charpoly_coefficients(
    const EdgeParameters& params, int upto,
    long long budget = kDefaultDecompositionBudget);

// Self-loops are ignored; a single node is strongly connected.
bool is_strongly_connected(const Digraph& g);

struct NecessaryCheck {
  bool holds = false;
  int edge_count = 0;
  int required = 0;  // k * n
};

// Edge-count requirement |E| >= k n for rank-k agreement on arbitrary weights.
NecessaryCheck check_necessary(const Digraph& g, int k);

// A designated-decomposition partition of the edge set that guarantees the
// characteristic-polynomial coefficients p_1..p_{n-k} can be steered
// independently:
//   a_v      one designated edge per length l = 1..n-k
//   a_c      every other edge
// such that for each l there is a designated decomposition containing the
// designated edge of length l and no other designated edge, and every other
// length-l decomposition that touches a designated edge also contains a
// non-designated edge outside the designated decomposition.
struct SufficientPartition {
  bool found = false;
  bool hypothesis_holds = false;  // |E| >= n k + n - k
  std::vector<Edge> a_v;          // designated edges, index l-1 <-> length l
  std::vector<Edge> a_c;
  std::vector<HamiltonianDecomposition> witnesses;  // designated decompositions
};

struct PartitionSearchOptions {
  long long decomposition_budget = kDefaultDecompositionBudget;
  long long search_node_budget = 1'000'000;
};

SufficientPartition find_sufficient_partition(
    const Digraph& g, int k, const PartitionSearchOptions& opts = {});

// Random and structured topology generators.  Every generated graph carries
// a self-loop on each node.  erdos_renyi and barabasi_albert are built as
// undirected graphs, symmetrized, and regenerated with fresh seed offsets
// until strongly connected (bounded retries).
struct GraphModel {
  enum class Kind { Complete, RingOneDir, Circulant, Line, ErdosRenyi, BarabasiAlbert };
  Kind kind = Kind::Complete;
  int alpha = 2;     // circulant / line neighborhood size
  double p = 0.5;    // erdos_renyi edge probability
  int m = 2;         // barabasi_albert attachments per node

  static GraphModel complete();
  static GraphModel ring_onedir();
  static GraphModel circulant(int alpha);
  static GraphModel line(int alpha);
  static GraphModel erdos_renyi(double p);
  static GraphModel barabasi_albert(int m);
  static GraphModel parse(const std::string& name);  // "complete", "er", ...
  std::string name() const;
};

Digraph generate_graph(const GraphModel& model, int n, std::uint64_t seed = 0);

}  // namespace agreekit
