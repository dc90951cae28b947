#include "trackselect/kinematics.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace trackselect {

namespace {

Mat4 kron_i2(double a00, double a01, double a10, double a11) {
  Mat4 out = Mat4::Zero();
  for (int k = 0; k < 2; ++k) {
    out(k, k) = a00;
    out(k, k + 2) = a01;
    out(k + 2, k) = a10;
    out(k + 2, k + 2) = a11;
  }
  return out;
}

}  // namespace

MotionModel::MotionModel(double update_interval, double sigma_w_sq)
    : t_u_(update_interval), sigma_w_sq_(sigma_w_sq) {
  if (!(t_u_ > 0.0) || !std::isfinite(t_u_)) {
    throw std::invalid_argument("MotionModel: update interval must be positive");
  }
  if (!(sigma_w_sq_ >= 0.0) || !std::isfinite(sigma_w_sq_)) {
    throw std::invalid_argument("MotionModel: sigma_w_sq must be non-negative");
  }
  const double t = t_u_;
  f_ = kron_i2(1.0, t, 0.0, 1.0);
  q_ = sigma_w_sq_ * kron_i2(t * t * t / 3.0, t * t / 2.0, t * t / 2.0, t);
  // Cholesky factor of the 2x2 block is closed form: [[sqrt(t^3/3), 0], [sqrt(3t)/2, sqrt(t)/2]].
  const double s = std::sqrt(sigma_w_sq_);
  q_sqrt_ = s * kron_i2(std::sqrt(t * t * t / 3.0), 0.0, std::sqrt(3.0 * t) / 2.0,
                        std::sqrt(t) / 2.0);
}

Mat4 transition_matrix(const MotionModel& model) { return model.transition(); }

Mat4 process_covariance(const MotionModel& model) { return model.process_cov(); }

Vec4 sample_gaussian(const Mat4& sqrt_factor, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vec4 u;
  for (int k = 0; k < 4; ++k) u(k) = normal(rng);
  return sqrt_factor * u;
}

TargetState step_truth(const TargetState& state, const MotionModel& model, Rng& rng) {
  const Vec4 next = model.transition() * state.vector() +
                    sample_gaussian(model.process_cov_sqrt(), rng);
  return TargetState::from_vector(next);
}

Mat4 psd_sqrt(const Mat4& cov) {
  Eigen::SelfAdjointEigenSolver<Mat4> eig(0.5 * (cov + cov.transpose()));
  const Vec4 roots = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * roots.asDiagonal() * eig.eigenvectors().transpose();
}

}  // namespace trackselect
