#include "agreekit/design.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <thread>

namespace agreekit {

namespace {

constexpr long long kTailCrosscheckBudget = 20'000;
constexpr double kLimitHorizonFactor = 40.0;

Matrix thin_orthonormal(const Matrix& B) {
  Eigen::HouseholderQR<Matrix> qr(B);
  Matrix Q = qr.householderQ();
  return Q.leftCols(B.cols());
}

Matrix realize_on_pattern(const Digraph& g, const Vector& values) {
  Matrix A = Matrix::Zero(g.n, g.n);
  for (int i = 0; i < g.num_edges(); ++i)
    A(g.edges[i].row, g.edges[i].col) = values(i);
  return A;
}

Vector extract_pattern(const Digraph& g, const Matrix& A) {
  Vector v(g.num_edges());
  for (int i = 0; i < g.num_edges(); ++i)
    v(i) = A(g.edges[i].row, g.edges[i].col);
  return v;
}

bool is_complete(const Digraph& g) {
  return g.num_edges() == g.n * g.n;
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("AGREEKIT_THREADS")) {
    const int parsed = std::atoi(env);
    if (parsed >= 1) return parsed;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(0..count-1) on up to `threads` workers; the caller is responsible
// for making results independent of scheduling.
void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (int w = 0; w < threads; ++w)
    pool.emplace_back([&, w]() {
      try {
        for (int i = w; i < count; i += threads) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::uint64_t restart_seed(std::uint64_t base, int restart) {
  return base + 0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(restart + 1);
}

Vector random_unit(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector z(dim);
  for (int i = 0; i < dim; ++i) z(i) = gauss(rng);
  const double norm = z.norm();
  if (norm > 0) z /= norm;
  return z;
}

}  // namespace

DesignObjective parse_objective(const std::string& name) {
  if (name == "feasible" || name == "feasibility") return DesignObjective::Feasibility;
  if (name == "spectral" || name == "essential_spectral")
    return DesignObjective::EssentialSpectral;
  if (name == "numerical" || name == "deflated_numerical")
    return DesignObjective::DeflatedNumerical;
  throw std::invalid_argument("unknown objective: " + name);
}

std::string objective_name(DesignObjective obj) {
  switch (obj) {
    case DesignObjective::Feasibility: return "feasible";
    case DesignObjective::EssentialSpectral: return "spectral";
    case DesignObjective::DeflatedNumerical: return "numerical";
  }
  return "unknown";
}

bool AgreementCertificate::certified() const {
  if (!(kernel_residual <= tol::design)) return false;
  if (!zero_multiplicity_check) return false;
  if (is_static) return true;
  // Strict margin: an abscissa at rounding scale is marginal, not stable.
  return std::isfinite(essential_abscissa) && essential_abscissa < -tol::eig;
}

AgreementCertificate certify(const Matrix& A, const ProjectionWeights& weights,
                             const Digraph& graph) {
  const int n = weights.n;
  const int k = weights.k;
  if (A.rows() != n || A.cols() != n || graph.n != n)
    throw std::invalid_argument("certify: dimension mismatch");

  const double magnitude = std::max(1.0, A.cwiseAbs().maxCoeff());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!graph.has_edge(i, j) && std::abs(A(i, j)) > tol::design * magnitude)
        throw PatternViolation("matrix carries mass off the edge pattern");

  AgreementCertificate cert;
  cert.A = A;
  cert.is_static = (k == n);

  double residual = 0.0;
  const Matrix t = weights.t_cols();
  const Matrix tau = weights.tau_rows();
  for (int i = 0; i < k; ++i) {
    residual = std::max(residual, (A * t.col(i)).norm());
    residual = std::max(residual, (tau.row(i) * A).norm());
  }
  cert.kernel_residual = residual;

  cert.zero_multiplicity_check =
      numerical_rank(A) == n - k && numerical_rank(A * A) == n - k;

  if (cert.is_static) {
    cert.essential_abscissa = std::numeric_limits<double>::quiet_NaN();
    cert.limit_residual = (Matrix::Identity(n, n) - weights.W).norm();
    cert.objective_value = 0.0;
    return cert;
  }

  const AbscissaReport rates = abscissas(A, weights);
  cert.essential_abscissa = rates.essential_spectral;
  cert.objective_value = rates.essential_spectral;

  const auto dense = charpoly_dense(A);
  cert.charpoly_tail.assign(dense.begin(), dense.begin() + (n - k));
  try {
    EdgeParameters params;
    params.graph = graph;
    params.values = extract_pattern(graph, A);
    const auto combinatorial =
        charpoly_coefficients(params, n - k, kTailCrosscheckBudget);
    double mismatch = 0.0;
    for (int l = 0; l < n - k; ++l)
      mismatch = std::max(mismatch,
                          std::abs(combinatorial[l] - cert.charpoly_tail[l]) /
                              (1.0 + std::abs(cert.charpoly_tail[l])));
    cert.tail_crosschecked = true;
    cert.tail_mismatch = mismatch;
  } catch (const CombinatorialBudgetExceeded&) {
    cert.tail_crosschecked = false;
  }

  if (std::isfinite(cert.essential_abscissa) && cert.essential_abscissa < 0.0) {
    const double horizon =
        std::min(kLimitHorizonFactor / -cert.essential_abscissa, 1e9);
    cert.limit_residual = (matrix_exponential(A, horizon) - weights.W).norm();
  } else {
    cert.limit_residual = std::numeric_limits<double>::quiet_NaN();
  }
  return cert;
}

AgreementCertificate design_complete(const ProjectionWeights& weights,
                                     const std::optional<Matrix>& B_choice) {
  const int n = weights.n;
  const int k = weights.k;
  const int m = n - k;
  Matrix B = -Matrix::Identity(m, m);
  if (B_choice) {
    if (B_choice->rows() != m || B_choice->cols() != m)
      throw std::invalid_argument("stable block must be (n-k) x (n-k)");
    if (m > 0 && abscissas(*B_choice).spectral >= 0.0)
      throw std::invalid_argument("stable block must have negative spectral abscissa");
    B = *B_choice;
  }
  Matrix D = Matrix::Zero(n, n);
  if (m > 0) D.bottomRightCorner(m, m) = B;
  const Matrix A = weights.T * D * weights.Tinv;
  const Digraph complete = generate_graph(GraphModel::complete(), n);
  AgreementCertificate cert = certify(A, weights, complete);
  if (!cert.is_static) cert.objective_value = cert.essential_abscissa;
  return cert;
}

KernelParameterization kernel_parameterization(const DesignProblem& problem) {
  const Digraph& g = problem.graph;
  const ProjectionWeights& w = problem.weights;
  if (g.n != w.n) throw std::invalid_argument("graph and weights disagree on n");
  if (!is_strongly_connected(g))
    throw std::invalid_argument("graph must be strongly connected");

  const int n = g.n;
  const int k = w.k;
  const int ne = g.num_edges();
  if (k == 0) {
    KernelParameterization kp;
    kp.basis = Matrix::Identity(ne, ne);
    kp.dim = ne;
    return kp;
  }

  // Rows: A(a) t_i = 0 (n rows per i), then tau_i' A(a) = 0 (n rows per i).
  Matrix C = Matrix::Zero(2 * n * k, ne);
  const Matrix t = w.t_cols();
  const Matrix tau = w.tau_rows();
  for (int i = 0; i < k; ++i)
    for (int e = 0; e < ne; ++e)
      C(i * n + g.edges[e].row, e) = t(g.edges[e].col, i);
  for (int i = 0; i < k; ++i)
    for (int e = 0; e < ne; ++e)
      C(n * k + i * n + g.edges[e].col, e) = tau(i, g.edges[e].row);

  Eigen::BDCSVD<Matrix> svd(C, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > tol::rank_rel * sv(0)) ++rank;
  const int dim = ne - rank;
  if (dim <= 0) throw EmptyKernel("structural constraints admit only the zero matrix");
  KernelParameterization kp;
  kp.basis = svd.matrixV().rightCols(dim);
  kp.dim = dim;
  return kp;
}

namespace {

struct BestTracker {
  std::optional<AgreementCertificate> cert;
  double value = std::numeric_limits<double>::infinity();
};

void consider(BestTracker& best, const Matrix& A, const ProjectionWeights& w,
              const Digraph& g, double objective_value) {
  AgreementCertificate cert = certify(A, w, g);
  if (!cert.certified()) return;
  cert.objective_value = objective_value;
  if (objective_value < best.value) {
    best.value = objective_value;
    best.cert = std::move(cert);
  }
}

AgreementCertificate static_certificate(const DesignProblem& problem) {
  return certify(Matrix::Zero(problem.graph.n, problem.graph.n), problem.weights,
                 problem.graph);
}

}  // namespace

AgreementCertificate optimize_deflated_numerical(const DesignProblem& problem) {
  const ProjectionWeights& w = problem.weights;
  const Digraph& g = problem.graph;
  const DesignOptions& opts = problem.options;
  if (w.k == w.n) return static_certificate(problem);

  const KernelParameterization kp = kernel_parameterization(problem);
  const int n = w.n;
  const int k = w.k;
  const int dim = kp.dim;
  const double cap = opts.norm_cap;
  const Matrix P2 = thin_orthonormal(w.T.rightCols(n - k));

  // Deflated symmetric image of each basis direction, reused every step.
  std::vector<Matrix> S_basis(dim);
  for (int m = 0; m < dim; ++m) {
    const Matrix Am = realize_on_pattern(g, kp.basis.col(m));
    S_basis[m] = P2.transpose() * (0.5 * (Am + Am.transpose())) * P2;
  }

  std::mt19937_64 rng(opts.seed);
  Vector z = random_unit(rng, dim);
  auto renormalize = [&](Vector& zv) {
    const double s = realize_on_pattern(g, kp.basis * zv).cwiseAbs().maxCoeff();
    if (s > 0) zv *= cap / s;
  };
  renormalize(z);

  BestTracker best;
  double best_seen = std::numeric_limits<double>::infinity();
  int improvements = 0;

  for (int iter = 0; iter < opts.max_iterations; ++iter) {
    const Vector a = kp.basis * z;
    const Matrix A = realize_on_pattern(g, a);
    const Matrix S = P2.transpose() * (0.5 * (A + A.transpose())) * P2;
    Eigen::SelfAdjointEigenSolver<Matrix> es(S);
    if (es.info() != Eigen::Success)
      throw EigenFailure("deflated eigenvalue iteration failed during descent");
    const double f = es.eigenvalues().maxCoeff();
    int top = 0;
    es.eigenvalues().maxCoeff(&top);
    const Vector q = es.eigenvectors().col(top);

    best_seen = std::min(best_seen, f);
    if (f < best.value - 1e-15) {
      consider(best, A, w, g, f);
      if (best.cert && opts.observer) opts.observer(iter, best.value);
      ++improvements;
    }

    Vector grad(dim);
    for (int m = 0; m < dim; ++m) grad(m) = q.dot(S_basis[m] * q);
    const double gnorm2 = grad.squaredNorm();
    if (gnorm2 < 1e-24) break;
    const double slack =
        std::max(0.05 * std::abs(best_seen), 1e-3) / (1.0 + iter / 100.0);
    const double step = (f - best_seen + slack) / gnorm2;
    z -= step * grad;
    renormalize(z);
  }

  // Coordinate polish around the incumbent tightens the final gap.
  if (best.cert) {
    Vector zb = extract_pattern(g, best.cert->A);
    Vector zc = kp.basis.transpose() * zb;  // coordinates of the incumbent
    double h = best.value;
    double step = 0.1;
    int evals = 0;
    while (step > 1e-7 && evals < 500) {
      bool improved = false;
      for (int m = 0; m < dim && evals < 500; ++m)
        for (const double sgn : {1.0, -1.0}) {
          Vector trial = zc;
          trial(m) += sgn * step;
          renormalize(trial);
          const Matrix At = realize_on_pattern(g, kp.basis * trial);
          const Matrix St = P2.transpose() * (0.5 * (At + At.transpose())) * P2;
          Eigen::SelfAdjointEigenSolver<Matrix> est(St, Eigen::EigenvaluesOnly);
          ++evals;
          const double ft = est.eigenvalues().maxCoeff();
          if (ft < h - 1e-13) {
            zc = trial;
            h = ft;
            improved = true;
            consider(best, At, w, g, ft);
          }
        }
      if (!improved) step *= 0.5;
    }
  }

  if (!best.cert)
    throw NoStableFeasiblePoint(
        "no iterate of the deflated descent certified as stable");
  return *best.cert;
}

AgreementCertificate optimize_essential_spectral(const DesignProblem& problem) {
  const ProjectionWeights& w = problem.weights;
  const Digraph& g = problem.graph;
  const DesignOptions& opts = problem.options;
  if (w.k == w.n) return static_certificate(problem);

  const KernelParameterization kp = kernel_parameterization(problem);
  const int dim = kp.dim;
  const double cap = opts.norm_cap;

  auto renormalize = [&](Vector& zv) {
    const double s = realize_on_pattern(g, kp.basis * zv).cwiseAbs().maxCoeff();
    if (s > 0) zv *= cap / s;
  };
  auto evaluate = [&](const Vector& zv) {
    const Matrix A = realize_on_pattern(g, kp.basis * zv);
    return abscissas(A, w).essential_spectral;
  };

  struct RestartResult {
    double value = std::numeric_limits<double>::infinity();
    Vector z;
  };
  std::vector<RestartResult> results(std::max(1, opts.restarts));

  auto run_restart = [&](int r) {
    std::mt19937_64 rng(restart_seed(opts.seed, r));
    Vector z = random_unit(rng, dim);
    renormalize(z);
    double h = evaluate(z);
    int evals = 1;
    double step = 0.5 * cap;
    std::vector<int> order(dim);
    std::iota(order.begin(), order.end(), 0);
    while (step > 1e-6 && evals < opts.max_iterations) {
      std::shuffle(order.begin(), order.end(), rng);
      bool improved = false;
      for (int idx : order) {
        if (evals >= opts.max_iterations) break;
        for (const double sgn : {1.0, -1.0}) {
          Vector trial = z;
          trial(idx) += sgn * step;
          renormalize(trial);
          const double val = evaluate(trial);
          ++evals;
          if (val < h - 1e-12) {
            z = trial;
            h = val;
            improved = true;
            break;
          }
        }
      }
      if (!improved) step *= 0.5;
    }
    results[r].value = h;
    results[r].z = z;
  };

  parallel_for(static_cast<int>(results.size()), resolve_threads(opts.threads),
               run_restart);

  BestTracker best;
  for (size_t r = 0; r < results.size(); ++r) {
    if (!std::isfinite(results[r].value)) continue;
    const Matrix A = realize_on_pattern(g, kp.basis * results[r].z);
    consider(best, A, w, g, results[r].value);
    if (opts.observer && best.cert) opts.observer(static_cast<int>(r), best.value);
  }
  if (!best.cert)
    throw NoStableFeasiblePoint(
        "no restart of the spectral descent certified as stable");
  return *best.cert;
}

AgreementCertificate design(const DesignProblem& problem) {
  switch (problem.objective) {
    case DesignObjective::DeflatedNumerical:
      return optimize_deflated_numerical(problem);
    case DesignObjective::EssentialSpectral:
      return optimize_essential_spectral(problem);
    case DesignObjective::Feasibility: {
      if (problem.weights.k == problem.weights.n) return static_certificate(problem);
      if (is_complete(problem.graph)) {
        AgreementCertificate cert = design_complete(problem.weights);
        return cert;
      }
      try {
        return optimize_deflated_numerical(problem);
      } catch (const NoStableFeasiblePoint&) {
        return optimize_essential_spectral(problem);
      }
    }
  }
  throw std::invalid_argument("unknown objective");
}

}  // namespace agreekit
