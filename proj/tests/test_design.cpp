#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <vector>

#include "agreekit/design.hpp"
#include "agreekit/errors.hpp"
#include "agreekit/presets.hpp"
#include "doctest.h"

using agreekit::Digraph;
using agreekit::DesignObjective;
using agreekit::DesignProblem;
using agreekit::GraphModel;
using agreekit::Matrix;
using agreekit::ProjectionWeights;
using agreekit::Vector;

namespace {

ProjectionWeights consensus(int n) {
  const Matrix ones = Matrix::Ones(n, 1);
  return agreekit::build_projection(ones, ones);
}

// First seeded draw of a well-conditioned rank-k projection on n nodes.
ProjectionWeights seeded_projection(int n, int k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int attempt = 0; attempt < 64; ++attempt) {
    Matrix M(n, k), N(n, k);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < k; ++j) {
        M(i, j) = dist(rng);
        N(i, j) = dist(rng);
      }
    try {
      return agreekit::build_projection(M, N);
    } catch (const std::exception&) {
    }
  }
  throw std::runtime_error("no well-conditioned draw found");
}

Digraph triangle_without_self_loops() {
  std::vector<agreekit::Edge> edges;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) edges.push_back({i, j});
  return Digraph::from_edges(3, std::move(edges));
}

}  // namespace

TEST_CASE("direct construction on the complete graph") {
  const auto w = consensus(3);
  const auto cert = agreekit::design_complete(w);
  CHECK(cert.certified());
  CHECK(cert.kernel_residual <= 1e-10);
  CHECK(cert.essential_abscissa == doctest::Approx(-1.0).epsilon(1e-8));
  CHECK(cert.zero_multiplicity_check);
  CHECK(cert.limit_residual <= 1e-8);
  // With the default contraction the protocol is exactly W - I.
  CHECK((cert.A - (w.W - Matrix::Identity(3, 3))).norm() <= 1e-10);
  REQUIRE(cert.charpoly_tail.size() == 2);
  CHECK(cert.charpoly_tail[0] == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(cert.charpoly_tail[1] == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(cert.tail_crosschecked);
  CHECK(cert.tail_mismatch <= 1e-8);
}

TEST_CASE("direct construction honors a custom contraction block") {
  const auto w = consensus(3);
  Matrix B = Matrix::Zero(2, 2);
  B.diagonal() << -2.0, -3.0;
  const auto cert = agreekit::design_complete(w, B);
  CHECK(cert.certified());
  CHECK(cert.essential_abscissa == doctest::Approx(-2.0).epsilon(1e-8));
  Matrix bad = Matrix::Zero(2, 2);
  bad.diagonal() << -1.0, 0.5;
  CHECK_THROWS_AS(agreekit::design_complete(w, bad), std::invalid_argument);
}

TEST_CASE("certification rejects off-pattern mass") {
  const auto w = consensus(3);
  const auto g = agreekit::generate_graph(GraphModel::ring_onedir(), 3);
  const Matrix A = w.W - Matrix::Identity(3, 3);  // dense; ring lacks most edges
  CHECK_THROWS_AS(agreekit::certify(A, w, g), agreekit::PatternViolation);
}

TEST_CASE("certificates are scale-covariant") {
  const auto w = consensus(4);
  const auto g = agreekit::generate_graph(GraphModel::complete(), 4);
  const auto base = agreekit::design_complete(w);
  for (const double c : {0.5, 2.0, 10.0}) {
    const auto cert = agreekit::certify(c * base.A, w, g);
    CHECK(cert.certified());
    CHECK(cert.essential_abscissa ==
          doctest::Approx(c * base.essential_abscissa).epsilon(1e-8));
  }
}

TEST_CASE("kernel dimension on the complete triangle is four") {
  DesignProblem problem;
  problem.graph = agreekit::generate_graph(GraphModel::complete(), 3);
  problem.weights = consensus(3);
  const auto kp = agreekit::kernel_parameterization(problem);
  CHECK(kp.dim == 4);
  CHECK(kp.basis.rows() == 9);
  CHECK((kp.basis.transpose() * kp.basis - Matrix::Identity(4, 4)).norm() <= 1e-10);
  // Every basis direction satisfies the structural constraints.
  for (int m = 0; m < kp.dim; ++m) {
    Matrix A = Matrix::Zero(3, 3);
    int e = 0;
    for (const auto& edge : problem.graph.edges) A(edge.row, edge.col) = kp.basis(e++, m);
    CHECK((A * problem.weights.t_cols()).norm() <= 1e-10);
    CHECK((problem.weights.tau_rows() * A).norm() <= 1e-10);
  }
}

TEST_CASE("sparse patterns can admit no feasible direction at all") {
  DesignProblem problem;
  problem.graph = agreekit::generate_graph(GraphModel::ring_onedir(), 3);
  problem.weights = seeded_projection(3, 2, 41);
  CHECK_THROWS_AS(agreekit::kernel_parameterization(problem), agreekit::EmptyKernel);
}

TEST_CASE("a kernel of purely rotational directions is reported unstable") {
  DesignProblem problem;
  problem.graph = triangle_without_self_loops();
  problem.weights = consensus(3);
  const auto kp = agreekit::kernel_parameterization(problem);
  CHECK(kp.dim == 1);
  CHECK_THROWS_AS(agreekit::optimize_essential_spectral(problem),
                  agreekit::NoStableFeasiblePoint);
  CHECK_THROWS_AS(agreekit::optimize_deflated_numerical(problem),
                  agreekit::NoStableFeasiblePoint);
  problem.objective = DesignObjective::Feasibility;
  CHECK_THROWS_AS(agreekit::design(problem), agreekit::NoStableFeasiblePoint);
}

TEST_CASE("deflated descent approaches the known optimum on the triangle") {
  DesignProblem problem;
  problem.graph = agreekit::generate_graph(GraphModel::complete(), 3);
  problem.weights = consensus(3);
  problem.objective = DesignObjective::DeflatedNumerical;
  const auto cert = agreekit::optimize_deflated_numerical(problem);
  CHECK(cert.certified());
  // Best deflated abscissa under the unit entry cap is -3/2.
  CHECK(cert.objective_value <= -1.35);
  CHECK(cert.objective_value >= -1.5 - 1e-9);
  const auto again = agreekit::optimize_deflated_numerical(problem);
  CHECK((cert.A - again.A).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("spectral descent finds the one-parameter ring optimum") {
  DesignProblem problem;
  problem.graph = agreekit::generate_graph(GraphModel::ring_onedir(), 4);
  problem.weights = consensus(4);
  problem.objective = DesignObjective::EssentialSpectral;
  const auto cert = agreekit::optimize_essential_spectral(problem);
  CHECK(cert.certified());
  // One feasible direction: a_ii = -c, a_{i,i-1} = c; best essential value -1.
  CHECK(cert.objective_value == doctest::Approx(-1.0).epsilon(0.05));
  for (int i = 0; i < 4; ++i) {
    CHECK(cert.A.row(i).sum() == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(cert.A.col(i).sum() == doctest::Approx(0.0).epsilon(1e-9));
  }
  const auto again = agreekit::optimize_essential_spectral(problem);
  CHECK((cert.A - again.A).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("feasibility design succeeds on a dense non-complete pattern") {
  // All arcs except (0, 1): 24 weights against the 2kn - k^2 = 16 generic
  // constraints of a fixed rank-2 target leave an 8-dimensional search space.
  std::vector<agreekit::Edge> edges;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      if (!(i == 0 && j == 1)) edges.push_back({i, j});
  DesignProblem problem;
  problem.graph = Digraph::from_edges(5, std::move(edges));
  problem.weights = seeded_projection(5, 2, 7);
  problem.objective = DesignObjective::Feasibility;
  const auto cert = agreekit::design(problem);
  CHECK(cert.certified());
  CHECK(cert.kernel_residual <= 1e-8);
  CHECK(cert.essential_abscissa < 0.0);
  CHECK(cert.limit_residual <= 1e-6);
  // The protocol must respect the pattern: zero off the edge set.
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      if (!problem.graph.has_edge(i, j)) CHECK(cert.A(i, j) == 0.0);
}

TEST_CASE("observer reports a non-increasing best objective") {
  DesignProblem problem;
  problem.graph = agreekit::generate_graph(GraphModel::complete(), 3);
  problem.weights = consensus(3);
  problem.objective = DesignObjective::DeflatedNumerical;
  std::vector<double> values;
  problem.options.observer = [&](int, double v) { values.push_back(v); };
  agreekit::optimize_deflated_numerical(problem);
  REQUIRE(!values.empty());
  for (size_t i = 1; i < values.size(); ++i) CHECK(values[i] <= values[i - 1] + 1e-15);
}

TEST_CASE("static design when every direction is structural") {
  const auto w = agreekit::decompose_projection(Matrix::Identity(2, 2), 2);
  DesignProblem problem;
  problem.graph = agreekit::generate_graph(GraphModel::complete(), 2);
  problem.weights = w;
  const auto cert = agreekit::design(problem);
  CHECK(cert.is_static);
  CHECK(cert.certified());
  CHECK(cert.A.norm() == 0.0);
}

TEST_CASE("objective names parse and print consistently") {
  using agreekit::parse_objective;
  CHECK(parse_objective("feasible") == DesignObjective::Feasibility);
  CHECK(parse_objective("feasibility") == DesignObjective::Feasibility);
  CHECK(parse_objective("spectral") == DesignObjective::EssentialSpectral);
  CHECK(parse_objective("numerical") == DesignObjective::DeflatedNumerical);
  CHECK(agreekit::objective_name(parse_objective("essential_spectral")) == "spectral");
  CHECK(agreekit::objective_name(parse_objective("deflated_numerical")) == "numerical");
  CHECK_THROWS_AS(parse_objective("bogus"), std::invalid_argument);
}
