#include <doctest.h>

#include <cmath>
#include <numbers>

#include "trackselect/sensing.hpp"

using namespace trackselect;

namespace {

RadarSite radar_at(double x, double y, std::vector<double> b = {1.0}) {
  RadarSite r;
  r.x = x;
  r.y = y;
  r.b = std::move(b);
  return r;
}

// Central differences of observe.
Mat24 numeric_jacobian(const RadarSite& radar, const Vec4& x, double h) {
  Mat24 out = Mat24::Zero();
  for (int c = 0; c < 4; ++c) {
    Vec4 up = x, dn = x;
    up(c) += h;
    dn(c) -= h;
    Vec2 d = observe(radar, up) - observe(radar, dn);
    d(1) = wrap_angle(d(1));
    out.col(c) = d / (2 * h);
  }
  return out;
}

}  // namespace

TEST_CASE("observe: hand-evaluated geometry") {
  const Vec2 a = observe(radar_at(3, 0), TargetState{3, 4, 0, 0});
  CHECK(a(0) == doctest::Approx(4.0));
  CHECK(a(1) == doctest::Approx(std::numbers::pi / 2));

  const Vec2 b = observe(radar_at(-10, 0), TargetState{1, 6, 0.5, 0.1});
  CHECK(b(0) == doctest::Approx(12.529964086141668).epsilon(1e-12));
  CHECK(b(1) == doctest::Approx(0.4993467216801301).epsilon(1e-12));

  const Vec2 c = observe(radar_at(0, 0), TargetState{-1, 0, 0, 0});
  CHECK(c(0) == doctest::Approx(1.0));
  CHECK(c(1) == doctest::Approx(std::numbers::pi));
  // -0.0 on the branch cut still maps to +pi.
  const Vec2 d = observe(radar_at(0, 0), Vec4(-1, -0.0, 0, 0));
  CHECK(d(1) == doctest::Approx(std::numbers::pi));
}

TEST_CASE("co-located target is a domain error") {
  CHECK_THROWS_AS(observe(radar_at(2, 2), TargetState{2, 2, 1, 1}), std::domain_error);
  CHECK_THROWS_AS(observe(radar_at(0, 0), TargetState{0.0005, 0, 0, 0}), std::domain_error);
  CHECK_THROWS_AS(jacobian(radar_at(0, 0), Vec4(0, 0, 1, 0)), std::domain_error);
}

TEST_CASE("wrap_angle maps into (-pi, pi]") {
  CHECK(wrap_angle(std::numbers::pi) == doctest::Approx(std::numbers::pi));
  CHECK(wrap_angle(-std::numbers::pi) == doctest::Approx(std::numbers::pi));
  CHECK(wrap_angle(3 * std::numbers::pi / 2) == doctest::Approx(-std::numbers::pi / 2));
  CHECK(wrap_angle(0.3 + 4 * std::numbers::pi) == doctest::Approx(0.3));
}

TEST_CASE("jacobian: analytic values and structure") {
  const Mat24 h = jacobian(radar_at(0, 0), Vec4(3, 4, 0.7, -0.2));
  CHECK(h(0, 0) == doctest::Approx(0.6));
  CHECK(h(0, 1) == doctest::Approx(0.8));
  CHECK(h(1, 0) == doctest::Approx(-0.16));
  CHECK(h(1, 1) == doctest::Approx(0.12));
  CHECK(h.rightCols<2>() == Eigen::Matrix2d::Zero());
  CHECK((h - numeric_jacobian(radar_at(0, 0), Vec4(3, 4, 0.7, -0.2), 1e-6)).cwiseAbs().maxCoeff() < 1e-6);

  const double d = 7.0;
  const Mat24 axis = jacobian(radar_at(0, 0), Vec4(d, 0, 0, 0));
  CHECK(axis(1, 0) == doctest::Approx(0.0));
  CHECK(axis(1, 1) == doctest::Approx(1.0 / d));
}

TEST_CASE("jacobian agrees with central differences on random geometry") {
  Rng rng(5);
  std::uniform_real_distribution<double> pos(-20.0, 20.0);
  std::uniform_real_distribution<double> vel(-1.0, 1.0);
  int checked = 0;
  while (checked < 10000) {
    const RadarSite r = radar_at(pos(rng), pos(rng));
    const Vec4 x(pos(rng), pos(rng), vel(rng), vel(rng));
    if (std::hypot(x(0) - r.x, x(1) - r.y) <= 0.1) continue;
    const Mat24 diff = jacobian(r, x) - numeric_jacobian(r, x, 1e-6);
    REQUIRE(diff.cwiseAbs().maxCoeff() < 1e-5);
    ++checked;
  }
}

TEST_CASE("observe is rotation consistent about the radar") {
  Rng rng(6);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int k = 0; k < 200; ++k) {
    const RadarSite r = radar_at(u(rng), u(rng));
    const double dx = u(rng) + 6.0, dy = u(rng);
    const double phi = u(rng);
    const Vec2 before = observe(r, Vec4(r.x + dx, r.y + dy, 0, 0));
    const double rx = std::cos(phi) * dx - std::sin(phi) * dy;
    const double ry = std::sin(phi) * dx + std::cos(phi) * dy;
    const Vec2 after = observe(r, Vec4(r.x + rx, r.y + ry, 0, 0));
    CHECK(after(0) == doctest::Approx(before(0)).epsilon(1e-12));
    CHECK(std::abs(wrap_angle(after(1) - before(1) - phi)) < 1e-9);
  }
}

TEST_CASE("noise covariance from b factors") {
  RadarSite r = radar_at(0, 0, {1.0, 4.5, 2.0});
  r.sigma_r_base = 0.015;
  r.sigma_a = 0.002;
  const Mat2 r0 = noise_cov(r, 0);
  CHECK(r0(0, 0) == doctest::Approx(2.25e-4));
  CHECK(r0(1, 1) == doctest::Approx(4e-6));
  CHECK(r0(0, 1) == 0.0);
  CHECK(noise_cov(r, 1)(0, 0) / r0(0, 0) == doctest::Approx(20.25));
  CHECK(std::sqrt(noise_cov(r, 2)(0, 0)) == doctest::Approx(0.03));
  CHECK_THROWS_AS(noise_cov(r, 3), std::out_of_range);
  CHECK_THROWS_AS(noise_cov(r, -1), std::out_of_range);
}

TEST_CASE("radar site validation") {
  RadarSite r = radar_at(0, 0, {1.0, 0.5});
  CHECK_THROWS_AS(r.validate(), std::invalid_argument);
  r.b = {1.0};
  r.beams = 0;
  CHECK_THROWS_AS(r.validate(), std::invalid_argument);
}

TEST_CASE("sample_measurement: noiseless limit, spread and wrap") {
  RadarSite r = radar_at(0, 0, {2.0});
  r.sigma_r_base = 1e-15;
  r.sigma_a = 1e-15;
  Rng rng(7);
  const TargetState truth{3, 4, 0, 0};
  const Measurement z = sample_measurement(r, 0, truth, 12, rng);
  CHECK(z.range == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(z.azimuth == doctest::Approx(std::atan2(4.0, 3.0)).epsilon(1e-12));
  CHECK(z.time_index == 12);
  CHECK(z.target_id == 0);

  r.sigma_r_base = 0.015;
  r.sigma_a = 0.002;
  constexpr int n = 100000;
  double sum = 0, sq = 0;
  for (int k = 0; k < n; ++k) {
    const double v = sample_measurement(r, 0, truth, 0, rng).range;
    sum += v;
    sq += v * v;
  }
  const double mean = sum / n;
  const double sd = std::sqrt(sq / n - mean * mean);
  CHECK(std::abs(sd / 0.03 - 1.0) < 0.03);

  // Truth just below the branch cut.
  const TargetState near_cut{-10.0, 1e-4, 0, 0};
  for (int k = 0; k < 2000; ++k) {
    const double a = sample_measurement(r, 0, near_cut, 0, rng).azimuth;
    REQUIRE(a > -std::numbers::pi);
    REQUIRE(a <= std::numbers::pi);
  }
}
