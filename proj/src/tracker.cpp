#include "trackselect/tracker.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include <Eigen/Cholesky>

namespace trackselect {

namespace {

struct StepInput {
  Vec2 innovation;
  Mat24 h;
  Mat2 r;
};

// One Kalman measurement step applied in place.
void kalman_step(Vec4& x, Mat4& p, const StepInput& in, CovarianceForm form) {
  const Mat2 s = in.h * p * in.h.transpose() + in.r;
  Eigen::LLT<Mat2> llt(s);
  if (llt.info() != Eigen::Success) {
    throw std::domain_error("innovation covariance is not positive definite");
  }
  // K = P H^T S^-1
  const Eigen::Matrix<double, 4, 2> k = llt.solve(in.h * p).transpose();
  x += k * in.innovation;
  const Mat4 ikh = Mat4::Identity() - k * in.h;
  if (form == CovarianceForm::kJoseph) {
    p = ikh * p * ikh.transpose() + k * in.r * k.transpose();
  } else {
    p = ikh * p;
  }
  p = 0.5 * (p + p.transpose());
}

template <typename Source>
UpdateResult run_cyclic(const Track& track, std::size_t n, Source&& source, CovarianceForm form) {
  UpdateResult out{track, {track.cov.trace(), {}}};
  out.trace.per_step_traces.reserve(n);
  for (std::size_t p = 0; p < n; ++p) {
    const StepInput in = source(p, out.track.state);
    kalman_step(out.track.state, out.track.cov, in, form);
    out.trace.per_step_traces.push_back(out.track.cov.trace());
  }
  return out;
}

const RadarSite& find_radar(std::span<const RadarSite> geometry, int id) {
  auto it = std::find_if(geometry.begin(), geometry.end(),
                         [id](const RadarSite& r) { return r.id == id; });
  if (it == geometry.end()) {
    throw std::invalid_argument("update_cyclic: no geometry for radar " + std::to_string(id));
  }
  return *it;
}

}  // namespace

Track predict(const Track& track, const MotionModel& model) {
  const Mat4& f = model.transition();
  Track out = track;
  out.state = f * track.state;
  out.cov = f * track.cov * f.transpose() + model.process_cov();
  out.cov = 0.5 * (out.cov + out.cov.transpose());
  return out;
}

UpdateResult update_cyclic(const Track& track, std::span<const Measurement> measurements,
                           std::span<const RadarSite> geometry, CovarianceForm form) {
  if (!measurements.empty()) {
    const int time_index = measurements.front().time_index;
    for (const Measurement& z : measurements) {
      if (z.target_id != track.target_id) {
        throw std::invalid_argument("update_cyclic: measurement for target " +
                                    std::to_string(z.target_id) + " applied to track " +
                                    std::to_string(track.target_id));
      }
      if (z.time_index != time_index) {
        throw std::invalid_argument("update_cyclic: measurements span several time indices");
      }
    }
  }
  return run_cyclic(
      track, measurements.size(),
      [&](std::size_t p, const Vec4& x) {
        const Measurement& z = measurements[p];
        const RadarSite& radar = find_radar(geometry, z.radar_id);
        Vec2 innovation = z.vector() - observe(radar, x);
        innovation(1) = wrap_angle(innovation(1));
        return StepInput{innovation, jacobian(radar, x), z.noise_cov};
      },
      form);
}

UpdateResult update_cyclic_linear(const Track& track, std::span<const LinearObservation> obs,
                                  CovarianceForm form) {
  return run_cyclic(
      track, obs.size(),
      [&](std::size_t p, const Vec4& x) {
        return StepInput{obs[p].z - obs[p].h * x, obs[p].h, obs[p].r};
      },
      form);
}

UpdateTrace hypothetical_update(const Track& track, std::span<const RadarSite* const> radars) {
  UpdateTrace out{track.cov.trace(), {}};
  out.per_step_traces.reserve(radars.size());
  Vec4 x = track.state;
  Mat4 p = track.cov;
  for (const RadarSite* radar : radars) {
    // Zero innovation: the estimate stays at the prediction.
    kalman_step(x, p, {Vec2::Zero(), jacobian(*radar, x), noise_cov(*radar, track.target_id)},
                CovarianceForm::kJoseph);
    out.per_step_traces.push_back(p.trace());
  }
  return out;
}

std::vector<double> gain_increments(const UpdateTrace& trace) {
  std::vector<double> out;
  out.reserve(trace.per_step_traces.size());
  double previous = trace.predicted_trace;
  for (double t : trace.per_step_traces) {
    out.push_back(previous - t);
    previous = t;
  }
  return out;
}

double total_gain(const UpdateTrace& trace) {
  if (trace.per_step_traces.empty()) return 0.0;
  return trace.predicted_trace - trace.per_step_traces.back();
}

}  // namespace trackselect
