#include "agreekit/experiments.hpp"

#include <Eigen/LU>
#include <Eigen/QR>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace agreekit {

namespace {

constexpr double kHorizonFactor = 50.0;
constexpr int kGridSamples = 2000;

Matrix orthonormal_kernel(const Matrix& rows) {
  Eigen::FullPivLU<Matrix> lu(rows);
  const Matrix kernel = lu.kernel();
  if (kernel.cols() == 0 || (rows * kernel).norm() > 1e-10 * (1.0 + rows.norm()))
    throw RankDeficientBasis("constraint rows admit no usable kernel");
  Eigen::HouseholderQR<Matrix> qr(kernel);
  Matrix Q = qr.householderQ();
  return Q.leftCols(kernel.cols());
}

ProjectionWeights lift2(const ProjectionWeights& w) {
  ProjectionWeights out;
  out.n = 2 * w.n;
  out.k = 2 * w.k;
  out.W = kron_identity2(w.W);
  out.T = kron_identity2(w.T);
  out.Tinv = kron_identity2(w.Tinv);
  return out;
}

double design_horizon(const AgreementCertificate& cert) {
  const double rate = -cert.essential_abscissa;
  if (!(rate > 0)) throw NoStableFeasiblePoint("certificate lacks a decay rate");
  return std::min(kHorizonFactor / rate, 1e6);
}

}  // namespace

Matrix kron_identity2(const Matrix& A) {
  const Eigen::Index n = A.rows();
  const Eigen::Index m = A.cols();
  Matrix B = Matrix::Zero(2 * n, 2 * m);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < m; ++j) {
      B(2 * i, 2 * j) = A(i, j);
      B(2 * i + 1, 2 * j + 1) = A(i, j);
    }
  return B;
}

CommComplexityResult comm_complexity(const GraphModel& model, int n, int k,
                                     int trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("need at least one trial");
  if (k < 1 || k > n) throw std::invalid_argument("k out of range");
  CommComplexityResult r;
  r.model = model.name();
  r.n = n;
  r.k = k;
  r.trials = trials;
  long long total_out_degree = 0;
  for (int trial = 0; trial < trials; ++trial) {
    const Digraph g = generate_graph(model, n, seed + 7919ull * trial);
    long long non_self = 0;
    for (const Edge& e : g.edges)
      if (e.row != e.col) ++non_self;
    r.per_trial_tx.push_back(non_self);
    r.total_tx_agreement += non_self;
    total_out_degree += non_self;  // every non-self edge leaves exactly one node
  }
  r.total_tx_parallel = static_cast<long long>(k) * r.total_tx_agreement;
  const double agents = static_cast<double>(trials) * n;
  r.per_agent_tx_agreement = static_cast<double>(r.total_tx_agreement) / agents;
  r.per_agent_tx_parallel = static_cast<double>(r.total_tx_parallel) / agents;
  r.mean_out_degree = static_cast<double>(total_out_degree) / agents;
  r.ratio = static_cast<double>(r.total_tx_parallel) /
            static_cast<double>(r.total_tx_agreement);
  return r;
}

RegressionResult regression_demo(const Matrix& H, const Vector& y,
                                 const Digraph& graph, std::uint64_t seed) {
  const int n = static_cast<int>(H.rows());
  if (y.size() != n || graph.n != n)
    throw std::invalid_argument("regression: dimension mismatch");

  RegressionResult out;
  out.weights = build_projection(H, H);
  out.theta_ls = (H.transpose() * H).ldlt().solve(H.transpose() * y);

  DesignProblem problem;
  problem.graph = graph;
  problem.weights = out.weights;
  problem.objective = DesignObjective::DeflatedNumerical;
  problem.options.seed = seed;
  out.cert = optimize_deflated_numerical(problem);

  const double horizon = design_horizon(out.cert);
  out.trace = simulate_static(out.cert.A, y, horizon, horizon / kGridSamples,
                              &out.weights);
  out.y_hat = out.trace.states.col(out.trace.states.cols() - 1);
  return out;
}

FormationSpec FormationSpec::default_octet() {
  FormationSpec spec;
  spec.n_robots = 8;
  spec.initial_positions = Matrix(8, 2);
  for (int i = 0; i < 8; ++i) {
    const double angle = std::numbers::pi * i / 4.0;
    spec.initial_positions(i, 0) = std::cos(angle);
    spec.initial_positions(i, 1) = std::sin(angle);
  }
  spec.constraint = Matrix::Zero(2, 8);
  spec.constraint.row(0) << 1, -1, -1, 1, 0, 0, 0, 0;
  spec.constraint.row(1) << 0, 0, 0, 0, 1, -1, -1, 1;
  // Left functionals orthogonal to the two weighting rays below; the limit
  // then averages neighbors with weights (-1, 5, 5, -1) / 8 per group.
  Matrix rays(8, 2);
  rays.col(0) << -1, 5, 5, -1, 0, 0, 0, 0;
  rays.col(1) << 0, 0, 0, 0, -1, 5, 5, -1;
  spec.left_basis = orthonormal_kernel(rays.transpose());
  return spec;
}

FormationResult formation_demo(const FormationSpec& spec, FormationMode mode,
                               const Digraph& graph, std::uint64_t seed) {
  const int n = spec.n_robots;
  if (spec.initial_positions.rows() != n || spec.initial_positions.cols() != 2)
    throw std::invalid_argument("initial positions must be n x 2");
  if (graph.n != n) throw std::invalid_argument("graph size mismatch");

  FormationResult out;
  DesignProblem problem;
  problem.graph = graph;
  problem.options.seed = seed;

  switch (mode) {
    case FormationMode::Consensus: {
      const Matrix ones = Matrix::Ones(n, 1);
      out.weights = build_projection(ones, ones);
      problem.objective = DesignObjective::DeflatedNumerical;
      break;
    }
    case FormationMode::Orthogonal: {
      const Matrix M = orthonormal_kernel(spec.constraint);
      out.weights = build_projection(M, M);
      problem.objective = DesignObjective::DeflatedNumerical;
      break;
    }
    case FormationMode::Oblique: {
      const Matrix M = orthonormal_kernel(spec.constraint);
      if (!spec.left_basis)
        throw std::invalid_argument("oblique mode needs a left basis");
      if (spec.left_basis->rows() != n || spec.left_basis->cols() != M.cols())
        throw std::invalid_argument("left basis must match the target dimension");
      try {
        out.weights = build_projection(M, *spec.left_basis);
      } catch (const SubspacesNotComplementary& e) {
        throw ComplementarityViolation(e.what());
      }
      problem.objective = DesignObjective::EssentialSpectral;
      break;
    }
  }

  problem.weights = out.weights;
  out.cert = design(problem);

  Vector x0(2 * n);
  for (int i = 0; i < n; ++i) {
    x0(2 * i) = spec.initial_positions(i, 0);
    x0(2 * i + 1) = spec.initial_positions(i, 1);
  }
  const ProjectionWeights lifted = lift2(out.weights);
  const Matrix A2 = kron_identity2(out.cert.A);
  const double horizon = design_horizon(out.cert);
  out.trace2d =
      simulate_static(A2, x0, horizon, horizon / kGridSamples, &lifted);

  const Vector xf = out.trace2d.states.col(out.trace2d.states.cols() - 1);
  const Vector target = lifted.W * x0;
  out.final_positions = Matrix(n, 2);
  out.target_positions = Matrix(n, 2);
  for (int i = 0; i < n; ++i) {
    out.final_positions(i, 0) = xf(2 * i);
    out.final_positions(i, 1) = xf(2 * i + 1);
    out.target_positions(i, 0) = target(2 * i);
    out.target_positions(i, 1) = target(2 * i + 1);
  }
  return out;
}

}  // namespace agreekit
