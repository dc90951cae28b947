#include <doctest.h>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "trackselect/kinematics.hpp"

using namespace trackselect;

TEST_CASE("transition matrix at t_u = 0.25") {
  const Mat4 f = transition_matrix(MotionModel(0.25, 2.5e-5));
  Mat4 expected;
  expected << 1, 0, 0.25, 0,
              0, 1, 0, 0.25,
              0, 0, 1, 0,
              0, 0, 0, 1;
  CHECK(f == expected);
}

TEST_CASE("transition matrix limits") {
  CHECK(transition_matrix(MotionModel(1e-15, 0.0)).isApprox(Mat4::Identity(), 1e-14));
  const Mat4 f = transition_matrix(MotionModel(1.0, 0.0));
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      const bool unit = r == c || (r == 0 && c == 2) || (r == 1 && c == 3);
      CHECK(f(r, c) == (unit ? 1.0 : 0.0));
    }
  }
}

TEST_CASE("process covariance entries") {
  const Mat4 q = process_covariance(MotionModel(0.25, 2.5e-5));
  CHECK(q(0, 0) == doctest::Approx(1.3020833333333334e-07).epsilon(1e-12));
  CHECK(q(0, 2) == doctest::Approx(7.8125e-07).epsilon(1e-12));
  CHECK(q(2, 2) == doctest::Approx(6.25e-06).epsilon(1e-12));
  CHECK(q(1, 1) == q(0, 0));
  CHECK(q(0, 1) == 0.0);
  CHECK(q(0, 3) == 0.0);
  CHECK(process_covariance(MotionModel(0.25, 0.0)) == Mat4::Zero());
}

TEST_CASE("process covariance is symmetric PSD and the square root reproduces it") {
  for (double t : {0.01, 0.25, 1.0, 7.5}) {
    for (double s : {0.0, 1e-6, 2.5e-5, 3.0}) {
      const MotionModel model(t, s);
      const Mat4 q = model.process_cov();
      CHECK((q - q.transpose()).norm() == 0.0);
      const double scale = std::max(q.norm(), 1e-300);
      Eigen::SelfAdjointEigenSolver<Mat4> eig(q);
      CHECK(eig.eigenvalues().minCoeff() >= -1e-12 * scale);
      const Mat4 sq = model.process_cov_sqrt();
      CHECK((sq * sq.transpose() - q).norm() <= 1e-12 * scale);
    }
  }
}

TEST_CASE("invalid models are rejected") {
  CHECK_THROWS_AS(MotionModel(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(MotionModel(-1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(MotionModel(0.25, -1e-9), std::invalid_argument);
}

TEST_CASE("step_truth without process noise is exact propagation") {
  const MotionModel model(0.25, 0.0);
  Rng rng(3);
  const TargetState next = step_truth({1.0, 6.0, 0.5, 0.1}, model, rng);
  CHECK(next.x == doctest::Approx(1.125));
  CHECK(next.y == doctest::Approx(6.025));
  CHECK(next.vx == 0.5);
  CHECK(next.vy == 0.1);

  const TargetState still{2.0, -3.0, 0.0, 0.0};
  CHECK(step_truth(still, model, rng) == still);
}

TEST_CASE("step_truth sample mean matches F x within 3 standard errors") {
  const MotionModel model(0.25, 2.5e-5);
  const TargetState x0{1.0, 6.0, 0.5, 0.1};
  const Vec4 expected = model.transition() * x0.vector();
  Rng rng(11);
  constexpr int n = 100000;
  Vec4 sum = Vec4::Zero();
  for (int k = 0; k < n; ++k) sum += step_truth(x0, model, rng).vector();
  const Vec4 mean = sum / n;
  for (int c = 0; c < 4; ++c) {
    const double se = std::sqrt(model.process_cov()(c, c) / n);
    CHECK(std::abs(mean(c) - expected(c)) < 3.0 * se);
  }
}

TEST_CASE("empirical process-noise covariance converges to Q") {
  const MotionModel model(0.25, 2.5e-5);
  Rng rng(12);
  constexpr int n = 1000000;
  Mat4 acc = Mat4::Zero();
  for (int k = 0; k < n; ++k) {
    const Vec4 w = sample_gaussian(model.process_cov_sqrt(), rng);
    acc += w * w.transpose();
  }
  const Mat4 emp = acc / n;
  CHECK((emp - model.process_cov()).norm() / model.process_cov().norm() < 0.05);
}

TEST_CASE("psd_sqrt tolerates rank deficiency") {
  Mat4 p = Mat4::Zero();
  p(0, 0) = 4.0;
  p(2, 2) = 1.0;
  const Mat4 s = psd_sqrt(p);
  CHECK((s * s.transpose() - p).norm() < 1e-12);
}
