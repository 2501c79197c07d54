#include "agreekit/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace agreekit {

namespace {

constexpr double kLocalErrorTol = 1e-8;
constexpr double kMinStep = 1e-6;

int grid_points(double horizon, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (horizon < 0.0) throw std::invalid_argument("horizon must be nonnegative");
  return static_cast<int>(std::floor(horizon / dt + 1e-9)) + 1;
}

}  // namespace

SimTrace simulate_static(const Matrix& A, const Vector& x0, double horizon,
                         double dt, const ProjectionWeights* weights) {
  const int n = static_cast<int>(A.rows());
  if (A.cols() != n || x0.size() != n)
    throw std::invalid_argument("simulate_static: dimension mismatch");
  const int m = grid_points(horizon, dt);

  SimTrace trace;
  trace.times = Vector::LinSpaced(m, 0.0, dt * (m - 1));
  trace.states = Matrix(n, m);
  trace.reference = Matrix(n, m);
  trace.error_norms = Vector(m);
  trace.udot_norms = Vector::Zero(m);

  const Vector target = weights ? Vector(weights->W * x0) : Vector(Vector::Zero(n));
  const Matrix step = matrix_exponential(A, dt);
  Vector x = x0;
  for (int i = 0; i < m; ++i) {
    trace.states.col(i) = x;
    trace.reference.col(i) = target;
    trace.error_norms(i) = (x - target).norm();
    if (i + 1 < m) x = step * x;
  }
  return trace;
}

double validate_input(const InputSignal& input, double horizon, int probes) {
  if (!input.u || !input.udot)
    throw std::invalid_argument("input signal needs both u and udot");
  const double h = std::max(1e-7, 1e-7 * horizon);
  double worst = 0.0;
  for (int i = 0; i < probes; ++i) {
    const double t = horizon * (i + 0.5) / probes;
    const Vector fd = (input.u(t + h) - input.u(t - h)) / (2.0 * h);
    worst = std::max(worst, (fd - input.udot(t)).norm());
  }
  return worst;
}

namespace {

Vector rk4_step(const Matrix& A, const InputSignal& input, double t,
                const Vector& x, double h) {
  const Vector k1 = A * x + input.udot(t);
  const Vector k2 = A * (x + 0.5 * h * k1) + input.udot(t + 0.5 * h);
  const Vector k3 = A * (x + 0.5 * h * k2) + input.udot(t + 0.5 * h);
  const Vector k4 = A * (x + h * k3) + input.udot(t + h);
  return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Advances x from t0 to t1 with step halving against a step-doubling error
// estimate.  Returns true if the step floor was hit with the estimate still
// above tolerance.
bool advance(const Matrix& A, const InputSignal& input, double t0, double t1,
             Vector& x) {
  bool stiff = false;
  double t = t0;
  double h = t1 - t0;
  while (t < t1 - 1e-15 * std::max(1.0, t1)) {
    h = std::min(h, t1 - t);
    const Vector full = rk4_step(A, input, t, x, h);
    const Vector mid = rk4_step(A, input, t, x, 0.5 * h);
    const Vector half = rk4_step(A, input, t + 0.5 * h, mid, 0.5 * h);
    const double err = (full - half).norm();
    const double tol = kLocalErrorTol * (1.0 + x.norm());
    if (err > tol && h > kMinStep) {
      h *= 0.5;
      continue;
    }
    if (err > tol) stiff = true;
    x = half;
    t += h;
    if (err < tol / 32.0) h = std::min(2.0 * h, t1 - t > 0 ? t1 - t : h);
  }
  return stiff;
}

}  // namespace

SimTrace simulate_tracking(const Matrix& A, const InputSignal& input,
                           double horizon, double dt,
                           const ProjectionWeights* weights) {
  const int n = static_cast<int>(A.rows());
  if (A.cols() != n) throw std::invalid_argument("simulate_tracking: A must be square");
  if (!input.u || !input.udot)
    throw std::invalid_argument("input signal needs both u and udot");
  const int m = grid_points(horizon, dt);

  SimTrace trace;
  trace.times = Vector::LinSpaced(m, 0.0, dt * (m - 1));
  trace.states = Matrix(n, m);
  trace.reference = Matrix(n, m);
  trace.error_norms = Vector(m);
  trace.udot_norms = Vector(m);

  Vector x = input.u(0.0);
  if (x.size() != n) throw std::invalid_argument("input dimension mismatch");
  for (int i = 0; i < m; ++i) {
    const double t = trace.times(i);
    const Vector ut = input.u(t);
    trace.states.col(i) = x;
    trace.reference.col(i) = weights ? Vector(weights->W * ut) : ut;
    trace.error_norms(i) = (x - trace.reference.col(i)).norm();
    trace.udot_norms(i) = input.udot(t).norm();
    if (i + 1 < m)
      trace.stiffness_warning |=
          advance(A, input, t, trace.times(i + 1), x);
  }
  return trace;
}

IssReport iss_report(const SimTrace& trace, const Matrix& A,
                     const ProjectionWeights& weights) {
  (void)A;
  (void)weights;
  const int m = static_cast<int>(trace.times.size());
  if (m < 10) throw InsufficientTrace("need at least 10 samples");

  IssReport report;
  const Vector& e = trace.error_norms;
  const double e0 = e(0);

  // Log-linear fit over the initial transient: stop at a four-decade drop,
  // the numerical floor, or the first rebound.
  {
    const double floor = std::max(e0 * 1e-4, 1e-13);
    std::vector<double> ts, ys;
    for (int i = 0; i < m; ++i) {
      if (e(i) <= floor) break;
      if (i > 0 && e(i) > e(i - 1) * (1.0 + 1e-9)) break;
      ts.push_back(trace.times(i));
      ys.push_back(std::log(e(i)));
    }
    if (ts.size() >= 3) {
      const double nn = static_cast<double>(ts.size());
      double st = 0, sy = 0, stt = 0, sty = 0;
      for (size_t i = 0; i < ts.size(); ++i) {
        st += ts[i];
        sy += ys[i];
        stt += ts[i] * ts[i];
        sty += ts[i] * ys[i];
      }
      const double denom = nn * stt - st * st;
      report.measured_decay_rate = denom > 0 ? -(nn * sty - st * sy) / denom : 0.0;
    } else {
      report.measured_decay_rate = 0.0;
    }
  }

  const double rho = report.measured_decay_rate;
  const double sup_udot = trace.udot_norms.size() ? trace.udot_norms.maxCoeff() : 0.0;
  const double slack = 1e-9 * (1.0 + e0) + 1e-12;

  if (sup_udot > 0.0) {
    double gamma = 0.0;
    bool unbounded = false;
    double running_sup = 0.0;
    for (int i = 0; i < m; ++i) {
      running_sup = std::max(running_sup, trace.udot_norms(i));
      const double excess = e(i) - e0 * std::exp(-rho * trace.times(i));
      if (excess <= slack) continue;
      if (running_sup <= 0.0) {
        unbounded = true;
        break;
      }
      gamma = std::max(gamma, excess / running_sup);
    }
    if (!unbounded) {
      report.measured_gain = gamma;
      bool ok = true;
      running_sup = 0.0;
      for (int i = 0; i < m; ++i) {
        running_sup = std::max(running_sup, trace.udot_norms(i));
        const double bound =
            1.05 * e0 * std::exp(-rho * trace.times(i)) + gamma * running_sup + slack;
        if (e(i) > bound) {
          ok = false;
          break;
        }
      }
      report.bound_satisfied = ok;
    } else {
      report.measured_gain.reset();
      report.bound_satisfied = false;
    }
  } else {
    bool ok = true;
    for (int i = 0; i < m; ++i)
      if (e(i) > 1.05 * e0 * std::exp(-rho * trace.times(i)) + slack) {
        ok = false;
        break;
      }
    report.bound_satisfied = ok;
  }
  return report;
}

}  // namespace agreekit
