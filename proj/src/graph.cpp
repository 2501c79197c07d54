#include "agreekit/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace agreekit {

Digraph Digraph::from_edges(int n, std::vector<Edge> edges) {
  if (n < 0) throw std::invalid_argument("node count must be nonnegative");
  for (const Edge& e : edges)
    if (e.row < 0 || e.row >= n || e.col < 0 || e.col >= n)
      throw std::invalid_argument("edge index out of range");
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
    throw std::invalid_argument("duplicate edge");
  Digraph g;
  g.n = n;
  g.edges = std::move(edges);
  return g;
}

int Digraph::edge_index(int row, int col) const {
  const Edge probe{row, col};
  auto it = std::lower_bound(edges.begin(), edges.end(), probe);
  if (it != edges.end() && *it == probe) return static_cast<int>(it - edges.begin());
  return -1;
}

int Digraph::num_self_loops() const {
  int count = 0;
  for (const Edge& e : edges)
    if (e.row == e.col) ++count;
  return count;
}

std::vector<std::vector<int>> Digraph::out_adjacency() const {
  std::vector<std::vector<int>> adj(n);
  for (const Edge& e : edges) adj[e.col].push_back(e.row);
  for (auto& lst : adj) std::sort(lst.begin(), lst.end());
  return adj;
}

Digraph Digraph::with_edge(int row, int col) const {
  std::vector<Edge> e = edges;
  e.push_back({row, col});
  return from_edges(n, std::move(e));
}

EdgeParameters EdgeParameters::zeros(const Digraph& g) {
  EdgeParameters p;
  p.graph = g;
  p.values = Vector::Zero(g.num_edges());
  return p;
}

double& EdgeParameters::at(int row, int col) {
  const int idx = graph.edge_index(row, col);
  if (idx < 0) throw std::invalid_argument("no such edge");
  return values(idx);
}

double EdgeParameters::at(int row, int col) const {
  const int idx = graph.edge_index(row, col);
  if (idx < 0) throw std::invalid_argument("no such edge");
  return values(idx);
}

Matrix EdgeParameters::realize() const {
  if (values.size() != graph.num_edges())
    throw std::invalid_argument("parameter vector does not match edge set");
  Matrix A = Matrix::Zero(graph.n, graph.n);
  for (int i = 0; i < graph.num_edges(); ++i)
    A(graph.edges[i].row, graph.edges[i].col) = values(i);
  return A;
}

std::vector<Edge> HamiltonianDecomposition::all_edges() const {
  std::vector<Edge> out;
  for (const auto& c : cycles) out.insert(out.end(), c.begin(), c.end());
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

struct CycleRecord {
  std::vector<Edge> edges;  // sorted
  std::uint64_t node_mask = 0;
  int length = 0;
};

// Depth-first enumeration of simple cycles rooted at their minimum node.
// The explicit length bound makes blocked-set pruning unsound, so each root
// uses a plain on-path mask; `steps` guards against pathological inputs.
std::vector<CycleRecord> collect_cycles(const Digraph& g, int max_length,
                                        long long budget) {
  if (g.n > 64)
    throw CombinatorialBudgetExceeded("cycle enumeration limited to 64 nodes");
  std::vector<CycleRecord> cycles;
  const auto adj = g.out_adjacency();
  long long steps = 0;

  std::vector<int> path;
  std::uint64_t on_path = 0;

  auto record_cycle = [&](int root) {
    CycleRecord c;
    c.length = static_cast<int>(path.size());
    c.node_mask = on_path;
    for (size_t i = 0; i + 1 < path.size(); ++i)
      c.edges.push_back({path[i + 1], path[i]});
    c.edges.push_back({root, path.back()});
    std::sort(c.edges.begin(), c.edges.end());
    cycles.push_back(std::move(c));
    if (static_cast<long long>(cycles.size()) > budget)
      throw CombinatorialBudgetExceeded("cycle count exceeded budget");
  };

  auto dfs = [&](auto&& self, int root, int v) -> void {
    if (++steps > 64 * budget + 1'000'000)
      throw CombinatorialBudgetExceeded("cycle search exceeded step budget");
    for (int w : adj[v]) {
      if (w < root || w == v) continue;
      if (w == root) {
        record_cycle(root);
        continue;
      }
      if ((on_path >> w) & 1) continue;
      if (static_cast<int>(path.size()) >= max_length) continue;
      path.push_back(w);
      on_path |= (1ull << w);
      self(self, root, w);
      on_path &= ~(1ull << w);
      path.pop_back();
    }
  };

  for (int root = 0; root < g.n; ++root) {
    if (max_length >= 1 && g.has_self_loop(root)) {
      CycleRecord c;
      c.length = 1;
      c.node_mask = 1ull << root;
      c.edges = {{root, root}};
      cycles.push_back(std::move(c));
    }
    if (max_length < 2) continue;
    path = {root};
    on_path = 1ull << root;
    dfs(dfs, root, root);
  }
  std::sort(cycles.begin(), cycles.end(),
            [](const CycleRecord& a, const CycleRecord& b) { return a.edges < b.edges; });
  return cycles;
}

}  // namespace

std::vector<std::vector<Edge>> enumerate_simple_cycles(const Digraph& g,
                                                       int max_length) {
  std::vector<std::vector<Edge>> out;
  for (auto& c : collect_cycles(g, max_length, kDefaultDecompositionBudget))
    out.push_back(std::move(c.edges));
  return out;
}

std::map<int, std::vector<HamiltonianDecomposition>> enumerate_decompositions(
    const Digraph& g, int max_length, long long budget) {
  if (max_length < 0) throw std::invalid_argument("max_length must be nonnegative");
  std::map<int, std::vector<HamiltonianDecomposition>> buckets;
  for (int l = 1; l <= max_length; ++l) buckets[l] = {};
  if (max_length == 0) return buckets;

  const auto cycles = collect_cycles(g, max_length, budget);
  long long count = 0;

  std::vector<std::vector<Edge>> current;
  auto rec = [&](auto&& self, size_t start, std::uint64_t used, int length) -> void {
    for (size_t i = start; i < cycles.size(); ++i) {
      const CycleRecord& c = cycles[i];
      if (length + c.length > max_length) continue;
      if (used & c.node_mask) continue;
      current.push_back(c.edges);
      HamiltonianDecomposition d;
      d.cycles = current;
      d.total_length = length + c.length;
      buckets[d.total_length].push_back(std::move(d));
      if (++count > budget)
        throw CombinatorialBudgetExceeded("decomposition count exceeded budget");
      self(self, i + 1, used | c.node_mask, length + c.length);
      current.pop_back();
    }
  };
  rec(rec, 0, 0, 0);

  for (auto& [l, bucket] : buckets)
    std::sort(bucket.begin(), bucket.end(),
              [](const HamiltonianDecomposition& a, const HamiltonianDecomposition& b) {
                return a.all_edges() < b.all_edges();
              });
  return buckets;
}

std::vector<double> charpoly_coefficients(const EdgeParameters& params, int upto,
                                          long long budget) {
  if (upto < 0 || upto > params.graph.n)
    throw std::invalid_argument("coefficient range out of bounds");
  const auto buckets = enumerate_decompositions(params.graph, upto, budget);
  std::vector<double> p(upto, 0.0);
  for (int l = 1; l <= upto; ++l) {
    double sum = 0.0;
    for (const auto& d : buckets.at(l)) {
      double prod = (d.d() % 2 == 0) ? 1.0 : -1.0;
      for (const auto& cycle : d.cycles)
        for (const Edge& e : cycle) prod *= params.at(e.row, e.col);
      sum += prod;
    }
    p[l - 1] = sum;
  }
  return p;
}

bool is_strongly_connected(const Digraph& g) {
  if (g.n <= 1) return true;
  std::vector<std::vector<int>> fwd(g.n), bwd(g.n);
  for (const Edge& e : g.edges) {
    if (e.row == e.col) continue;
    fwd[e.col].push_back(e.row);
    bwd[e.row].push_back(e.col);
  }
  auto reaches_all = [&](const std::vector<std::vector<int>>& adj) {
    std::vector<char> seen(g.n, 0);
    std::deque<int> queue{0};
    seen[0] = 1;
    int visited = 1;
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop_front();
      for (int w : adj[v])
        if (!seen[w]) {
          seen[w] = 1;
          ++visited;
          queue.push_back(w);
        }
    }
    return visited == g.n;
  };
  return reaches_all(fwd) && reaches_all(bwd);
}

NecessaryCheck check_necessary(const Digraph& g, int k) {
  if (k < 0 || k > g.n) throw std::invalid_argument("k out of range");
  NecessaryCheck c;
  c.edge_count = g.num_edges();
  c.required = k * g.n;
  c.holds = c.edge_count >= c.required;
  return c;
}

SufficientPartition find_sufficient_partition(const Digraph& g, int k,
                                              const PartitionSearchOptions& opts) {
  if (k < 0 || k > g.n) throw std::invalid_argument("k out of range");
  const int levels = g.n - k;
  SufficientPartition sp;
  sp.hypothesis_holds = g.num_edges() >= g.n * k + g.n - k;
  if (levels == 0) {
    sp.found = true;
    sp.a_c = g.edges;
    return sp;
  }

  const auto buckets =
      enumerate_decompositions(g, levels, opts.decomposition_budget);
  for (int l = 1; l <= levels; ++l)
    if (buckets.at(l).empty()) return sp;

  std::vector<Edge> designated(levels);
  std::vector<const HamiltonianDecomposition*> witness(levels, nullptr);
  std::set<Edge> av;
  long long nodes = 0;

  auto in_witness = [&](const Edge& e, int upto_level) {
    for (int m = 0; m < upto_level; ++m) {
      const auto edges = witness[m]->all_edges();
      if (std::binary_search(edges.begin(), edges.end(), e)) return true;
    }
    return false;
  };

  auto final_check = [&]() {
    // Designated decompositions must meet the designated edges exactly once.
    for (int l = 0; l < levels; ++l) {
      const auto edges = witness[l]->all_edges();
      int hits = 0;
      for (const Edge& e : edges)
        if (av.count(e)) ++hits;
      if (hits != 1 || !std::binary_search(edges.begin(), edges.end(), designated[l]))
        return false;
    }
    // Every other decomposition that touches a designated edge must carry a
    // non-designated edge outside the designated decomposition of its length.
    for (int l = 1; l <= levels; ++l) {
      const auto w_edges = witness[l - 1]->all_edges();
      for (const auto& xi : buckets.at(l)) {
        if (&xi == witness[l - 1] || xi == *witness[l - 1]) continue;
        const auto xi_edges = xi.all_edges();
        bool touches = false;
        for (const Edge& e : xi_edges)
          if (av.count(e)) {
            touches = true;
            break;
          }
        if (!touches) continue;
        bool escape = false;
        for (const Edge& e : xi_edges)
          if (!av.count(e) && !std::binary_search(w_edges.begin(), w_edges.end(), e)) {
            escape = true;
            break;
          }
        if (!escape) return false;
      }
    }
    return true;
  };

  auto rec = [&](auto&& self, int level) -> bool {
    if (++nodes > opts.search_node_budget)
      throw SearchBudgetExceeded("partition search exceeded node budget");
    if (level == levels) return final_check();
    for (const auto& xi : buckets.at(level + 1)) {
      const auto xi_edges = xi.all_edges();
      // A candidate decomposition may contain at most the one designated edge.
      bool tainted = false;
      for (const Edge& e : xi_edges)
        if (av.count(e)) {
          tainted = true;
          break;
        }
      if (tainted) continue;
      for (const Edge& e : xi_edges) {
        if (in_witness(e, level)) continue;
        designated[level] = e;
        witness[level] = &xi;
        av.insert(e);
        if (self(self, level + 1)) return true;
        av.erase(e);
        witness[level] = nullptr;
      }
    }
    return false;
  };

  if (rec(rec, 0)) {
    sp.found = true;
    sp.a_v = designated;
    std::set<Edge> av_sorted(designated.begin(), designated.end());
    for (const Edge& e : g.edges)
      if (!av_sorted.count(e)) sp.a_c.push_back(e);
    for (int l = 0; l < levels; ++l) sp.witnesses.push_back(*witness[l]);
  }
  return sp;
}

GraphModel GraphModel::complete() { return {Kind::Complete}; }
GraphModel GraphModel::ring_onedir() { return {Kind::RingOneDir}; }
GraphModel GraphModel::circulant(int alpha) {
  GraphModel m{Kind::Circulant};
  m.alpha = alpha;
  return m;
}
GraphModel GraphModel::line(int alpha) {
  GraphModel m{Kind::Line};
  m.alpha = alpha;
  return m;
}
GraphModel GraphModel::erdos_renyi(double p) {
  GraphModel m{Kind::ErdosRenyi};
  m.p = p;
  return m;
}
GraphModel GraphModel::barabasi_albert(int attach) {
  GraphModel m{Kind::BarabasiAlbert};
  m.m = attach;
  return m;
}

GraphModel GraphModel::parse(const std::string& name) {
  if (name == "complete") return complete();
  if (name == "ring_onedir" || name == "ring") return ring_onedir();
  if (name == "circulant") return circulant(2);
  if (name == "line") return line(2);
  if (name == "erdos_renyi" || name == "er") return erdos_renyi(0.5);
  if (name == "barabasi_albert" || name == "ba") return barabasi_albert(2);
  throw InvalidModelParameters("unknown graph model: " + name);
}

std::string GraphModel::name() const {
  switch (kind) {
    case Kind::Complete: return "complete";
    case Kind::RingOneDir: return "ring_onedir";
    case Kind::Circulant: return "circulant";
    case Kind::Line: return "line";
    case Kind::ErdosRenyi: return "erdos_renyi";
    case Kind::BarabasiAlbert: return "barabasi_albert";
  }
  return "unknown";
}

namespace {

Digraph from_edge_set(int n, const std::set<Edge>& edges) {
  return Digraph::from_edges(n, std::vector<Edge>(edges.begin(), edges.end()));
}

Digraph generate_er_once(int n, double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::set<Edge> edges;
  for (int v = 0; v < n; ++v) edges.insert({v, v});
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (uni(rng) < p) {
        edges.insert({i, j});
        edges.insert({j, i});
      }
  return from_edge_set(n, edges);
}

Digraph generate_ba_once(int n, int m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::set<Edge> edges;
  for (int v = 0; v < n; ++v) edges.insert({v, v});
  std::vector<int> endpoints;  // one entry per unit of undirected degree
  const int core = std::min(m, n);
  for (int i = 0; i < core; ++i)
    for (int j = i + 1; j < core; ++j) {
      edges.insert({i, j});
      edges.insert({j, i});
      endpoints.push_back(i);
      endpoints.push_back(j);
    }
  for (int v = core; v < n; ++v) {
    std::set<int> targets;
    int guard = 0;
    while (static_cast<int>(targets.size()) < m && guard++ < 10000) {
      int t;
      if (endpoints.empty()) {
        std::uniform_int_distribution<int> uni(0, v - 1);
        t = uni(rng);
      } else {
        std::uniform_int_distribution<size_t> uni(0, endpoints.size() - 1);
        t = endpoints[uni(rng)];
      }
      if (t != v) targets.insert(t);
    }
    for (int t : targets) {
      edges.insert({v, t});
      edges.insert({t, v});
      endpoints.push_back(v);
      endpoints.push_back(t);
    }
  }
  return from_edge_set(n, edges);
}

}  // namespace

Digraph generate_graph(const GraphModel& model, int n, std::uint64_t seed) {
  if (n < 1) throw InvalidModelParameters("node count must be positive");
  using Kind = GraphModel::Kind;
  switch (model.kind) {
    case Kind::Complete: {
      std::vector<Edge> edges;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) edges.push_back({i, j});
      return Digraph::from_edges(n, std::move(edges));
    }
    case Kind::RingOneDir: {
      std::set<Edge> edges;
      for (int i = 0; i < n; ++i) {
        edges.insert({i, i});
        edges.insert({i, (i - 1 + n) % n});
      }
      return from_edge_set(n, edges);
    }
    case Kind::Circulant: {
      if (model.alpha < 1 || model.alpha >= n)
        throw InvalidModelParameters("circulant needs 1 <= alpha < n");
      std::set<Edge> edges;
      const int prev = (model.alpha + 1) / 2;
      const int next = model.alpha / 2;
      for (int i = 0; i < n; ++i) {
        edges.insert({i, i});
        for (int d = 1; d <= prev; ++d) edges.insert({i, (i - d + n * n) % n});
        for (int d = 1; d <= next; ++d) edges.insert({i, (i + d) % n});
      }
      return from_edge_set(n, edges);
    }
    case Kind::Line: {
      if (model.alpha < 2 || model.alpha % 2 != 0 || model.alpha >= n)
        throw InvalidModelParameters("line needs even alpha with 2 <= alpha < n");
      std::set<Edge> edges;
      const int reach = model.alpha / 2;
      for (int i = 0; i < n; ++i) {
        edges.insert({i, i});
        for (int d = 1; d <= reach; ++d) {
          if (i - d >= 0) edges.insert({i, i - d});
          if (i + d < n) edges.insert({i, i + d});
        }
      }
      return from_edge_set(n, edges);
    }
    case Kind::ErdosRenyi: {
      if (model.p < 0.0 || model.p > 1.0)
        throw InvalidModelParameters("edge probability must lie in [0, 1]");
      for (int attempt = 0; attempt < 64; ++attempt) {
        Digraph g = generate_er_once(n, model.p, seed + 1000003ull * attempt);
        if (is_strongly_connected(g)) return g;
      }
      throw GraphGenerationFailed(
          "no strongly connected sample after bounded retries");
    }
    case Kind::BarabasiAlbert: {
      if (model.m < 1 || model.m >= n)
        throw InvalidModelParameters("attachment count needs 1 <= m < n");
      for (int attempt = 0; attempt < 64; ++attempt) {
        Digraph g = generate_ba_once(n, model.m, seed + 1000003ull * attempt);
        if (is_strongly_connected(g)) return g;
      }
      throw GraphGenerationFailed(
          "no strongly connected sample after bounded retries");
    }
  }
  throw InvalidModelParameters("unknown graph model");
}

}  // namespace agreekit
