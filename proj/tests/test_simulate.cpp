#include <Eigen/Dense>
#include <cmath>

#include "agreekit/design.hpp"
#include "agreekit/errors.hpp"
#include "agreekit/simulate.hpp"
#include "doctest.h"

using agreekit::InputSignal;
using agreekit::Matrix;
using agreekit::ProjectionWeights;
using agreekit::Vector;

namespace {

ProjectionWeights consensus(int n) {
  const Matrix ones = Matrix::Ones(n, 1);
  return agreekit::build_projection(ones, ones);
}

}  // namespace

TEST_CASE("static simulation steps the exact flow") {
  Matrix A = Matrix::Zero(2, 2);
  A.diagonal() << -1.0, -2.0;
  Vector x0(2);
  x0 << 1.0, 3.0;
  const auto trace = agreekit::simulate_static(A, x0, 1.0, 0.1);
  REQUIRE(trace.times.size() == 11);
  CHECK(trace.times(0) == 0.0);
  CHECK(trace.times(10) == doctest::Approx(1.0).epsilon(1e-12));
  for (int i = 0; i < 11; ++i) {
    const double t = trace.times(i);
    CHECK(trace.states(0, i) == doctest::Approx(std::exp(-t)).epsilon(1e-12));
    CHECK(trace.states(1, i) == doctest::Approx(3.0 * std::exp(-2.0 * t)).epsilon(1e-12));
  }
  // Without weights the reported error is the distance to the origin.
  CHECK(trace.error_norms(0) == doctest::Approx(x0.norm()).epsilon(1e-12));
}

TEST_CASE("grid truncates to whole steps") {
  const Matrix A = Matrix::Zero(1, 1);
  const Vector x0 = Vector::Ones(1);
  const auto trace = agreekit::simulate_static(A, x0, 1.0, 0.3);
  REQUIRE(trace.times.size() == 4);
  CHECK(trace.times(3) == doctest::Approx(0.9).epsilon(1e-12));
  const auto point = agreekit::simulate_static(A, x0, 0.0, 0.3);
  CHECK(point.times.size() == 1);
  CHECK_THROWS_AS(agreekit::simulate_static(A, x0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("halving the step leaves shared grid points unchanged") {
  const auto w = consensus(3);
  const auto cert = agreekit::design_complete(w);
  Vector x0(3);
  x0 << 1.0, -2.0, 0.5;
  const auto coarse = agreekit::simulate_static(cert.A, x0, 2.0, 0.1, &w);
  const auto fine = agreekit::simulate_static(cert.A, x0, 2.0, 0.05, &w);
  for (int i = 0; i < coarse.times.size(); ++i) {
    CHECK((coarse.states.col(i) - fine.states.col(2 * i)).norm() <= 1e-12);
  }
}

TEST_CASE("consensus error decays at the designed rate") {
  const auto w = consensus(3);
  const auto cert = agreekit::design_complete(w);
  Vector x0(3);
  x0 << 1.0, 2.0, 4.0;
  const auto trace = agreekit::simulate_static(cert.A, x0, 1.0, 0.1, &w);
  // A = W - I gives error(t) = exp(-t) * error(0) exactly.
  CHECK(trace.error_norms(10) / trace.error_norms(0) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-10));
  CHECK((trace.reference.col(0) - w.W * x0).norm() <= 1e-14);
}

TEST_CASE("tracking a constant input reproduces the autonomous flow") {
  const auto w = consensus(3);
  const auto cert = agreekit::design_complete(w);
  Vector base(3);
  base << 1.0, -1.0, 2.0;
  InputSignal input;
  input.u = [base](double) { return base; };
  input.udot = [](double) { return Vector(Vector::Zero(3)); };
  const auto tracked = agreekit::simulate_tracking(cert.A, input, 2.0, 0.01, &w);
  const auto autonomous = agreekit::simulate_static(cert.A, base, 2.0, 0.01, &w);
  CHECK(!tracked.stiffness_warning);
  double worst = 0.0;
  for (int i = 0; i < tracked.times.size(); ++i)
    worst = std::max(worst, (tracked.states.col(i) - autonomous.states.col(i)).norm());
  CHECK(worst <= 1e-7);
  CHECK(tracked.udot_norms.maxCoeff() == 0.0);
}

TEST_CASE("input validation flags an inconsistent derivative") {
  InputSignal good;
  good.u = [](double t) {
    Vector v(2);
    v << std::sin(t), std::cos(2.0 * t);
    return v;
  };
  good.udot = [](double t) {
    Vector v(2);
    v << std::cos(t), -2.0 * std::sin(2.0 * t);
    return v;
  };
  CHECK(agreekit::validate_input(good, 10.0) <= 1e-5);
  InputSignal bad = good;
  bad.udot = [](double t) {
    Vector v(2);
    v << 2.0 * std::cos(t), -4.0 * std::sin(2.0 * t);
    return v;
  };
  CHECK(agreekit::validate_input(bad, 10.0) >= 0.5);
}

TEST_CASE("decay fit and gain on an autonomous run") {
  const auto w = consensus(3);
  const auto cert = agreekit::design_complete(w);
  Vector x0(3);
  x0 << 3.0, 0.0, -1.0;
  const auto trace = agreekit::simulate_static(cert.A, x0, 30.0, 0.01, &w);
  const auto report = agreekit::iss_report(trace, cert.A, w);
  CHECK(report.measured_decay_rate == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(!report.measured_gain.has_value());
  CHECK(report.bound_satisfied);
}

TEST_CASE("gain shows up once the input moves") {
  const auto w = consensus(3);
  const auto cert = agreekit::design_complete(w);
  Vector base(3);
  base << 1.0, 0.0, 2.0;
  Vector dir(3);
  dir << 1.0, -1.0, 0.5;
  const double ramp_end = 5.0;
  InputSignal input;
  input.u = [=](double t) { return Vector(base + dir * std::min(t, ramp_end)); };
  input.udot = [=](double t) {
    return Vector(t < ramp_end ? dir : Vector(Vector::Zero(3)));
  };
  const auto trace = agreekit::simulate_tracking(cert.A, input, 40.0, 0.01, &w);
  const auto report = agreekit::iss_report(trace, cert.A, w);
  REQUIRE(report.measured_gain.has_value());
  CHECK(*report.measured_gain > 0.0);
  CHECK(report.bound_satisfied);
  // Long after the ramp stops the tracking error must be essentially gone.
  CHECK(trace.error_norms(trace.times.size() - 1) <= 1e-6);
}

TEST_CASE("step floor inside a derivative jump raises the stiffness flag") {
  const auto w = consensus(3);
  const auto cert = agreekit::design_complete(w);
  Vector base = Vector::Ones(3) / 3.0;
  Vector dir(3);
  dir << 1.0, -1.0, 0.5;
  const double kink = 0.0037;  // interior to the first grid interval
  InputSignal input;
  input.u = [=](double t) { return Vector(base + dir * (10.0 * std::min(t, kink))); };
  input.udot = [=](double t) {
    return Vector(t < kink ? Vector(10.0 * dir) : Vector(Vector::Zero(3)));
  };
  const auto trace = agreekit::simulate_tracking(cert.A, input, 0.1, 0.01, &w);
  CHECK(trace.stiffness_warning);
  for (int i = 0; i < trace.states.cols(); ++i) CHECK(trace.states.col(i).allFinite());
}

TEST_CASE("reports need a minimum number of samples") {
  const auto w = consensus(2);
  const Matrix A = w.W - Matrix::Identity(2, 2);
  Vector x0(2);
  x0 << 1.0, 0.0;
  const auto trace = agreekit::simulate_static(A, x0, 0.05, 0.01, &w);
  CHECK_THROWS_AS(agreekit::iss_report(trace, A, w), agreekit::InsufficientTrace);
}
