#include <Eigen/Dense>
#include <cmath>

#include "agreekit/errors.hpp"
#include "agreekit/experiments.hpp"
#include "agreekit/presets.hpp"
#include "doctest.h"

using agreekit::Digraph;
using agreekit::Edge;
using agreekit::FormationMode;
using agreekit::FormationSpec;
using agreekit::GraphModel;
using agreekit::Matrix;
using agreekit::Vector;

TEST_CASE("interleaved two-dimensional lift") {
  Matrix A(2, 2);
  A << 1.0, 2.0, 3.0, 4.0;
  const Matrix L = agreekit::kron_identity2(A);
  REQUIRE(L.rows() == 4);
  // Acting on (x1, y1, x2, y2): x and y coordinates never mix.
  Matrix expected(4, 4);
  expected << 1, 0, 2, 0, 0, 1, 0, 2, 3, 0, 4, 0, 0, 3, 0, 4;
  CHECK((L - expected).norm() == 0.0);
}

TEST_CASE("lifted simulation is two independent copies") {
  const Matrix ones = Matrix::Ones(3, 1);
  const auto w = agreekit::build_projection(ones, ones);
  const auto cert = agreekit::design_complete(w);
  Vector x(3), y(3);
  x << 1.0, -2.0, 0.5;
  y << 0.0, 3.0, 1.0;
  Vector z(6);
  for (int i = 0; i < 3; ++i) {
    z(2 * i) = x(i);
    z(2 * i + 1) = y(i);
  }
  const auto lifted =
      agreekit::simulate_static(agreekit::kron_identity2(cert.A), z, 2.0, 0.1);
  const auto tx = agreekit::simulate_static(cert.A, x, 2.0, 0.1);
  const auto ty = agreekit::simulate_static(cert.A, y, 2.0, 0.1);
  for (int i = 0; i < lifted.times.size(); ++i)
    for (int v = 0; v < 3; ++v) {
      CHECK(lifted.states(2 * v, i) == doctest::Approx(tx.states(v, i)).epsilon(1e-10));
      CHECK(lifted.states(2 * v + 1, i) ==
            doctest::Approx(ty.states(v, i)).epsilon(1e-10));
    }
}

TEST_CASE("transmission counting is an exact degree identity") {
  for (const auto& model : {GraphModel::erdos_renyi(0.4), GraphModel::barabasi_albert(3)}) {
    const auto res = agreekit::comm_complexity(model, 20, 10, 20, 3);
    CHECK(res.trials == 20);
    REQUIRE(res.per_trial_tx.size() == 20);
    CHECK(res.ratio == 10.0);
    CHECK(res.per_agent_tx_agreement == res.mean_out_degree);
    CHECK(res.total_tx_parallel == 10 * res.total_tx_agreement);
    // Independent recount from the same seeded topologies.
    long long total = 0;
    for (int trial = 0; trial < 20; ++trial) {
      const Digraph g = agreekit::generate_graph(model, 20, 3 + 7919ull * trial);
      long long non_self = 0;
      for (const Edge& e : g.edges)
        if (e.row != e.col) ++non_self;
      CHECK(res.per_trial_tx[trial] == non_self);
      total += non_self;
    }
    CHECK(res.total_tx_agreement == total);
  }
  CHECK_THROWS_AS(agreekit::comm_complexity(GraphModel::complete(), 4, 5, 1, 0),
                  std::invalid_argument);
}

TEST_CASE("regression over a complete graph averages the measurements") {
  const Matrix H = Matrix::Ones(5, 1);
  Vector y(5);
  y << 1.0, 2.0, 3.0, 4.0, 10.0;
  const auto g = agreekit::generate_graph(GraphModel::complete(), 5);
  const auto res = agreekit::regression_demo(H, y, g);
  CHECK(res.cert.certified());
  CHECK(res.theta_ls.size() == 1);
  CHECK(res.theta_ls(0) == doctest::Approx(4.0).epsilon(1e-12));
  for (int i = 0; i < 5; ++i)
    CHECK(res.y_hat(i) == doctest::Approx(4.0).epsilon(1e-6));
}

TEST_CASE("regression preset shapes") {
  const auto preset = agreekit::regression_preset(50, 0);
  CHECK(preset.H.rows() == 50);
  CHECK(preset.H.cols() == 2);
  CHECK(preset.y.size() == 50);
  CHECK(preset.theta_true.size() == 2);
  CHECK((preset.H.col(0) - Vector::Ones(50)).norm() == 0.0);
  CHECK(preset.graph.n == 50);
  CHECK(preset.graph.num_edges() == 250);  // circulant with four neighbors
  // Same seed, same noise; different seed, different noise.
  CHECK((agreekit::regression_preset(50, 0).y - preset.y).norm() == 0.0);
  CHECK((agreekit::regression_preset(50, 1).y - preset.y).norm() > 0.0);
}

TEST_CASE("consensus formation meets at the centroid") {
  const auto spec = FormationSpec::default_octet();
  REQUIRE(spec.n_robots == 8);
  // Initial positions on the unit circle have zero mean, so the consensus
  // rendezvous point is the origin.
  CHECK(spec.initial_positions.colwise().mean().norm() <= 1e-12);
  const auto g = agreekit::generate_graph(GraphModel::circulant(6), 8);
  const auto res = agreekit::formation_demo(spec, FormationMode::Consensus, g);
  CHECK(res.cert.certified());
  CHECK(res.trace2d.states.rows() == 16);
  CHECK((res.final_positions - res.target_positions).cwiseAbs().maxCoeff() <= 1e-6);
  CHECK(res.target_positions.cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("oblique weights must stay complementary to the constraint kernel") {
  auto spec = FormationSpec::default_octet();
  const auto g = agreekit::generate_graph(GraphModel::circulant(6), 8);
  REQUIRE(spec.left_basis.has_value());
  // Make the left basis orthogonal to the target subspace in one direction.
  Matrix broken = *spec.left_basis;
  Eigen::JacobiSVD<Matrix> svd(spec.constraint, Eigen::ComputeFullV);
  broken.col(0) = svd.matrixV().col(0);  // a row-space direction of the constraint
  spec.left_basis = broken;
  CHECK_THROWS_AS(agreekit::formation_demo(spec, FormationMode::Oblique, g),
                  agreekit::ComplementarityViolation);
}

TEST_CASE("formation spec validation") {
  auto spec = FormationSpec::default_octet();
  spec.initial_positions = Matrix::Zero(3, 2);
  const auto g = agreekit::generate_graph(GraphModel::circulant(6), 8);
  CHECK_THROWS_AS(agreekit::formation_demo(spec, FormationMode::Consensus, g),
                  std::invalid_argument);
}
