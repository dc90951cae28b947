#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "trackselect/dynamics.hpp"
#include "trackselect/kinematics.hpp"
#include "trackselect/sensing.hpp"
#include "trackselect/tracker.hpp"

namespace trackselect {

inline constexpr int kConfigSchemaVersion = 1;
inline constexpr int kMetricsSchemaVersion = 1;

// Allowed trace increase of a single incremental update step.
inline constexpr double kTraceIncreaseFloor = 1e-10;

struct ScenarioConfig {
  // Radar b factors are left empty here; each run draws them from
  // [b_min, b_max] unless b_override is given.
  std::vector<RadarSite> radars;
  std::optional<std::vector<std::vector<double>>> b_override;  // [radar][target]
  double b_min = 1.0;
  double b_max = 4.5;

  std::vector<TargetState> targets;
  Mat4 p0 = Mat4::Identity();
  bool noisy_initial_estimates = true;  // estimate ~ N(truth, p0)

  double t_u = 0.25;
  double sigma_w_sq = 2.5e-5;
  double c = 0.1;
  int horizon = 240;
  int n_runs = 100;
  DynamicsConfig dynamics;
  Strategy strategy = Strategy::kBestResponse;
  std::string output = "trackselect.csv";
  std::uint64_t seed = 1;

  void validate() const;
};

ScenarioConfig default_scenario();

struct SlotRecord {
  double trace_sum = 0.0;  // sum_j trace(P_j,k|k), averaged over radars
  StrategyProfile profile;
  std::vector<int> coverage;
  int measurements = 0;
  bool radars_agree = true;  // every radar holds identical tracks
};

struct UpdateStats {
  std::uint64_t steps = 0;
  std::uint64_t violations = 0;       // steps whose trace grew by more than the floor
  double max_trace_increase = -1e300;  // over all steps
};

struct MetricsLog {
  Strategy strategy = Strategy::kBestResponse;
  std::uint64_t run_seed = 0;
  std::vector<SlotRecord> slots;
  UpdateStats updates;
};

std::uint64_t run_seed(std::uint64_t master_seed, int run_index);

// Per-run b matrix: the override, or i.i.d. uniform draws.
std::vector<std::vector<double>> draw_b_factors(const ScenarioConfig& cfg, std::uint64_t run_seed);

MetricsLog run_once(const ScenarioConfig& cfg, std::uint64_t run_seed);

struct SeriesSummary {
  std::vector<double> mean;
  std::vector<double> stderr_;
  // Time average over the second half of the horizon: mean and standard error across runs.
  double tail_mean = 0.0;
  double tail_stderr = 0.0;
};

SeriesSummary summarize(std::span<const MetricsLog> runs);

struct MonteCarloResult {
  Strategy strategy = Strategy::kBestResponse;
  std::vector<MetricsLog> runs;
  SeriesSummary summary;
  UpdateStats updates;
};

// Runs cfg.n_runs realizations of cfg.strategy in parallel (OpenMP).
MonteCarloResult run_monte_carlo(const ScenarioConfig& cfg);
// Single-threaded reference.
MonteCarloResult run_monte_carlo_serial(const ScenarioConfig& cfg);
// Explicit seed list; results keep the list order.
MonteCarloResult run_monte_carlo_seeds(const ScenarioConfig& cfg, std::span<const std::uint64_t> seeds,
                                       bool parallel = true);

std::vector<MonteCarloResult> compare_strategies(const ScenarioConfig& cfg);

// ---------------------------------------------------------------- I/O

nlohmann::json config_to_json(const ScenarioConfig& cfg);
ScenarioConfig config_from_json(const nlohmann::json& j);
ScenarioConfig load_config(const std::string& path);

// Header: run,slot,strategy,trace_sum
void write_metrics_csv(std::ostream& os, std::span<const MonteCarloResult> results);
nlohmann::json summary_to_json(std::span<const MonteCarloResult> results);

}  // namespace trackselect
