#pragma once

#include <Eigen/Core>

#include "trackselect/random.hpp"

namespace trackselect {

using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;

// Kinematic state of one target, ordered (x, y, vx, vy). Units: km, km/s.
struct TargetState {
  double x = 0.0;
  double y = 0.0;
  double vx = 0.0;
  double vy = 0.0;

  Vec4 vector() const { return {x, y, vx, vy}; }
  static TargetState from_vector(const Vec4& v) { return {v(0), v(1), v(2), v(3)}; }

  bool operator==(const TargetState&) const = default;
};

// White-noise constant-velocity model.
//   F = [[1, t_u], [0, 1]] (x) I2
//   Q = sigma_w_sq * [[t_u^3/3, t_u^2/2], [t_u^2/2, t_u]] (x) I2
class MotionModel {
 public:
  MotionModel(double update_interval, double sigma_w_sq);

  double update_interval() const { return t_u_; }
  double sigma_w_sq() const { return sigma_w_sq_; }

  const Mat4& transition() const { return f_; }
  const Mat4& process_cov() const { return q_; }
  // Any S with S * S^T = Q. Well defined for singular Q.
  const Mat4& process_cov_sqrt() const { return q_sqrt_; }

 private:
  double t_u_;
  double sigma_w_sq_;
  Mat4 f_;
  Mat4 q_;
  Mat4 q_sqrt_;
};

Mat4 transition_matrix(const MotionModel& model);
Mat4 process_covariance(const MotionModel& model);

// One step of ground truth: F * state + w, w ~ N(0, Q).
TargetState step_truth(const TargetState& state, const MotionModel& model, Rng& rng);

// Draws N(0, I4) and maps it through a square-root factor.
Vec4 sample_gaussian(const Mat4& sqrt_factor, Rng& rng);

// Symmetric PSD square root via eigendecomposition; negative eigenvalues from
// rounding are clamped to zero.
Mat4 psd_sqrt(const Mat4& cov);

}  // namespace trackselect
