#pragma once

#include <span>
#include <vector>

#include "trackselect/kinematics.hpp"
#include "trackselect/sensing.hpp"

namespace trackselect {

struct Track {
  int target_id = 0;
  Vec4 state = Vec4::Zero();
  Mat4 cov = Mat4::Identity();

  bool operator==(const Track& other) const {
    return target_id == other.target_id && state == other.state && cov == other.cov;
  }
};

// Covariance traces around one cyclic update: trace of the predicted covariance,
// then the trace after each incremental measurement step.
struct UpdateTrace {
  double predicted_trace = 0.0;
  std::vector<double> per_step_traces;
};

struct UpdateResult {
  Track track;
  UpdateTrace trace;
};

enum class CovarianceForm {
  kJoseph,  // (I-KH) P (I-KH)^T + K R K^T
  kSimple,  // (I-KH) P
};

// A measurement already linearized: z = H x + v, v ~ N(0, R).
struct LinearObservation {
  Vec2 z;
  Mat24 h;
  Mat2 r;
};

Track predict(const Track& track, const MotionModel& model);

// Sequential EKF update, one measurement at a time in the given order; H is
// relinearized at the running estimate before each step. `geometry` is looked up
// by radar id.
UpdateResult update_cyclic(const Track& track, std::span<const Measurement> measurements,
                           std::span<const RadarSite> geometry,
                           CovarianceForm form = CovarianceForm::kJoseph);

// Same recursion with a fixed linear measurement model.
UpdateResult update_cyclic_linear(const Track& track, std::span<const LinearObservation> obs,
                                  CovarianceForm form = CovarianceForm::kJoseph);

// Covariance-only pass: the trace sequence produced if each listed radar
// contributed one measurement, in order, linearized at the current estimate.
UpdateTrace hypothetical_update(const Track& track, std::span<const RadarSite* const> radars);

// Delta g_p = trace_{p-1} - trace_p, with trace_0 the predicted trace.
std::vector<double> gain_increments(const UpdateTrace& trace);

double total_gain(const UpdateTrace& trace);

}  // namespace trackselect
