#include "trackselect/sensing.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace trackselect {

namespace {

void check_range(double r) {
  if (!(r >= kMinRangeKm)) {
    throw std::domain_error("target within " + std::to_string(kMinRangeKm * 1e3) +
                            " m of radar; range/azimuth undefined");
  }
}

}  // namespace

void RadarSite::validate() const {
  if (beams < 1) throw std::invalid_argument("radar " + std::to_string(id) + ": beams < 1");
  if (!(sigma_a > 0.0)) throw std::invalid_argument("radar " + std::to_string(id) + ": sigma_a <= 0");
  if (!(sigma_r_base > 0.0)) {
    throw std::invalid_argument("radar " + std::to_string(id) + ": sigma_r_base <= 0");
  }
  for (double f : b) {
    if (!(f >= 1.0)) throw std::invalid_argument("radar " + std::to_string(id) + ": b factor < 1");
  }
}

double wrap_angle(double angle) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double a = std::remainder(angle, kTwoPi);
  if (a <= -std::numbers::pi) a += kTwoPi;
  return a;
}

Vec2 observe(const RadarSite& radar, const Vec4& state) {
  const double dx = state(0) - radar.x;
  const double dy = state(1) - radar.y;
  const double r = std::hypot(dx, dy);
  check_range(r);
  return {r, wrap_angle(std::atan2(dy, dx))};
}

Vec2 observe(const RadarSite& radar, const TargetState& truth) {
  return observe(radar, truth.vector());
}

Mat24 jacobian(const RadarSite& radar, const Vec4& state) {
  const double dx = state(0) - radar.x;
  const double dy = state(1) - radar.y;
  const double r2 = dx * dx + dy * dy;
  const double r = std::sqrt(r2);
  check_range(r);
  Mat24 h = Mat24::Zero();
  h(0, 0) = dx / r;
  h(0, 1) = dy / r;
  h(1, 0) = -dy / r2;
  h(1, 1) = dx / r2;
  return h;
}

Mat2 noise_cov(const RadarSite& radar, int target_id) {
  if (target_id < 0 || target_id >= static_cast<int>(radar.b.size())) {
    throw std::out_of_range("noise_cov: unknown target " + std::to_string(target_id) +
                            " for radar " + std::to_string(radar.id));
  }
  const double sr = radar.b[target_id] * radar.sigma_r_base;
  Mat2 r = Mat2::Zero();
  r(0, 0) = sr * sr;
  r(1, 1) = radar.sigma_a * radar.sigma_a;
  return r;
}

Measurement sample_measurement(const RadarSite& radar, int target_id,
                               const TargetState& truth, int time_index, Rng& rng) {
  const Vec2 clean = observe(radar, truth);
  const Mat2 cov = noise_cov(radar, target_id);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double nr = normal(rng);
  const double na = normal(rng);
  Measurement z;
  z.radar_id = radar.id;
  z.target_id = target_id;
  z.time_index = time_index;
  z.range = clean(0) + std::sqrt(cov(0, 0)) * nr;
  z.azimuth = wrap_angle(clean(1) + std::sqrt(cov(1, 1)) * na);
  z.noise_cov = cov;
  return z;
}

}  // namespace trackselect
