#pragma once

#include <vector>

#include <Eigen/Core>

#include "trackselect/kinematics.hpp"
#include "trackselect/random.hpp"

namespace trackselect {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using Mat24 = Eigen::Matrix<double, 2, 4>;

// Closer than this (1 m) the range/azimuth map is treated as undefined.
inline constexpr double kMinRangeKm = 1e-3;

struct RadarSite {
  int id = 0;
  double x = 0.0;  // km
  double y = 0.0;  // km
  int beams = 1;   // measurements per scan
  double sigma_a = 0.002;        // rad
  double sigma_r_base = 0.015;   // km
  std::vector<double> b;         // range-accuracy factor per target, >= 1

  void validate() const;
};

struct Measurement {
  int radar_id = 0;
  int target_id = 0;
  int time_index = 0;
  double range = 0.0;    // km
  double azimuth = 0.0;  // rad, (-pi, pi]
  Mat2 noise_cov = Mat2::Identity();

  Vec2 vector() const { return {range, azimuth}; }
};

// Wraps into (-pi, pi].
double wrap_angle(double angle);

// h(x): range and four-quadrant azimuth of the target seen from the radar.
Vec2 observe(const RadarSite& radar, const TargetState& truth);
Vec2 observe(const RadarSite& radar, const Vec4& state);

// dh/dx at state. Velocity columns are zero.
Mat24 jacobian(const RadarSite& radar, const Vec4& state);

// diag((b_ij * sigma_r_base)^2, sigma_a^2)
Mat2 noise_cov(const RadarSite& radar, int target_id);

Measurement sample_measurement(const RadarSite& radar, int target_id,
                               const TargetState& truth, int time_index, Rng& rng);

}  // namespace trackselect
