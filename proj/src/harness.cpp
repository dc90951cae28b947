#include "trackselect/harness.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <string>

namespace trackselect {

namespace {

// Stream ids under a run seed.
enum : std::uint64_t {
  kTruthStream = 1,
  kInitStream = 2,
  kBStream = 3,
  kPolicyStream = 4,
  kMeasurementStreamBase = 100,
};

std::vector<int> beams_of(const std::vector<RadarSite>& radars) {
  std::vector<int> out;
  for (const auto& r : radars) out.push_back(r.beams);
  return out;
}

}  // namespace

void ScenarioConfig::validate() const {
  if (radars.empty()) throw std::invalid_argument("config: no radars");
  if (targets.size() < 2) throw std::invalid_argument("config: need at least two targets");
  const int n_targets = static_cast<int>(targets.size());
  for (std::size_t i = 0; i < radars.size(); ++i) {
    RadarSite probe = radars[i];
    probe.b.assign(n_targets, 1.0);
    probe.validate();
    if (probe.id != static_cast<int>(i)) throw std::invalid_argument("config: radar ids must be 0..N-1");
    if (probe.beams >= n_targets) throw std::invalid_argument("config: beams must be below target count");
  }
  if (!(b_min >= 1.0 && b_max >= b_min)) throw std::invalid_argument("config: need 1 <= b_min <= b_max");
  if (b_override) {
    if (b_override->size() != radars.size()) throw std::invalid_argument("config: b_override radar count");
    for (const auto& row : *b_override) {
      if (static_cast<int>(row.size()) != n_targets) {
        throw std::invalid_argument("config: b_override target count");
      }
      for (double v : row) {
        if (!(v >= 1.0)) throw std::invalid_argument("config: b_override entries must be >= 1");
      }
    }
  }
  for (const auto& t : targets) {
    if (!t.vector().allFinite()) throw std::invalid_argument("config: non-finite target state");
  }
  if (!p0.allFinite() || (p0 - p0.transpose()).norm() > 1e-12 * (1.0 + p0.norm())) {
    throw std::invalid_argument("config: p0 must be finite and symmetric");
  }
  MotionModel(t_u, sigma_w_sq);  // validates
  if (!std::isfinite(c)) throw std::invalid_argument("config: c must be finite");
  if (horizon < 1) throw std::invalid_argument("config: horizon must be >= 1");
  if (n_runs < 1) throw std::invalid_argument("config: n_runs must be >= 1");
  dynamics.validate();
}

ScenarioConfig default_scenario() {
  ScenarioConfig cfg;
  const double xs[] = {-10.0, 3.0, 10.0};
  for (int i = 0; i < 3; ++i) {
    RadarSite r;
    r.id = i;
    r.x = xs[i];
    r.y = 0.0;
    r.beams = 2;
    r.sigma_a = 0.002;
    r.sigma_r_base = 0.015;
    cfg.radars.push_back(r);
  }
  cfg.targets = {
      {1.0, 6.0, 0.5, 0.1},
      {0.5, 7.0, 0.35, -0.1},
      {1.5, 3.0, -0.3, 0.0},
      {2.0, 4.0, -0.2, 0.1},
      {2.5, 5.0, 0.3, 0.2},
  };
  cfg.p0 = Vec4(0.01, 0.01, 0.01, 0.01).asDiagonal();
  cfg.t_u = 0.25;
  cfg.sigma_w_sq = 2.5e-5;
  cfg.c = 0.1;
  cfg.horizon = 240;
  cfg.n_runs = 100;
  cfg.dynamics.alpha = 0.4;
  cfg.dynamics.k_reinit = 10;
  cfg.strategy = Strategy::kBestResponse;
  cfg.seed = 1;
  return cfg;
}

std::uint64_t run_seed(std::uint64_t master_seed, int run_index) {
  return derive_seed(master_seed, static_cast<std::uint64_t>(run_index));
}

std::vector<std::vector<double>> draw_b_factors(const ScenarioConfig& cfg, std::uint64_t seed) {
  if (cfg.b_override) return *cfg.b_override;
  Rng rng = make_rng(seed, kBStream);
  std::uniform_real_distribution<double> uni(cfg.b_min, cfg.b_max);
  std::vector<std::vector<double>> b(cfg.radars.size(), std::vector<double>(cfg.targets.size()));
  for (auto& row : b) {
    for (double& v : row) v = uni(rng);
  }
  return b;
}

MetricsLog run_once(const ScenarioConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  const int n_radars = static_cast<int>(cfg.radars.size());
  const int n_targets = static_cast<int>(cfg.targets.size());
  const MotionModel model(cfg.t_u, cfg.sigma_w_sq);
  const bool sharing = shares_measurements(cfg.strategy);

  std::vector<RadarSite> sites = cfg.radars;
  const auto b = draw_b_factors(cfg, seed);
  for (int i = 0; i < n_radars; ++i) sites[i].b = b[i];

  Rng truth_rng = make_rng(seed, kTruthStream);
  Rng init_rng = make_rng(seed, kInitStream);
  std::vector<Rng> meas_rng;
  for (int i = 0; i < n_radars; ++i) meas_rng.push_back(make_rng(seed, kMeasurementStreamBase + i));

  std::vector<TargetState> truth = cfg.targets;

  // Every radar starts from the same initial guesses.
  const Mat4 p0_sqrt = psd_sqrt(cfg.p0);
  std::vector<Track> initial;
  for (int j = 0; j < n_targets; ++j) {
    Track t;
    t.target_id = j;
    t.state = truth[j].vector();
    if (cfg.noisy_initial_estimates) t.state += sample_gaussian(p0_sqrt, init_rng);
    t.cov = cfg.p0;
    initial.push_back(t);
  }
  std::vector<std::vector<Track>> tracks(n_radars, initial);
  std::vector<std::vector<Track>> predicted(n_radars);

  PolicySetup setup;
  setup.n_targets = n_targets;
  setup.beams = beams_of(cfg.radars);
  setup.dynamics = cfg.dynamics;
  setup.seed = derive_seed(seed, kPolicyStream);
  auto policy = baseline_strategy(cfg.strategy, setup);

  MetricsLog log;
  log.strategy = cfg.strategy;
  log.run_seed = seed;
  log.slots.reserve(cfg.horizon);

  std::vector<std::vector<Measurement>> by_target(n_targets);
  for (int k = 0; k < cfg.horizon; ++k) {
    for (auto& t : truth) t = step_truth(t, model, truth_rng);
    for (int i = 0; i < n_radars; ++i) {
      predicted[i].clear();
      for (const Track& t : tracks[i]) predicted[i].push_back(predict(t, model));
    }

    SlotContext ctx{k, sites, &predicted, cfg.c};
    StrategyProfile profile = policy->select(ctx);

    // Canonical order: ascending radar id, then beam index.
    for (auto& v : by_target) v.clear();
    int n_meas = 0;
    for (int i = 0; i < n_radars; ++i) {
      for (int j = 0; j < n_targets; ++j) {
        for (int beam = 0; beam < profile.beams(i, j); ++beam) {
          by_target[j].push_back(sample_measurement(sites[i], j, truth[j], k, meas_rng[i]));
          ++n_meas;
        }
      }
    }

    std::vector<Measurement> own;
    for (int i = 0; i < n_radars; ++i) {
      for (int j = 0; j < n_targets; ++j) {
        std::span<const Measurement> received = by_target[j];
        if (!sharing) {
          own.clear();
          for (const auto& z : by_target[j]) {
            if (z.radar_id == i) own.push_back(z);
          }
          received = own;
        }
        const UpdateResult res = update_cyclic(predicted[i][j], received, sites);
        double prev = res.trace.predicted_trace;
        for (double t : res.trace.per_step_traces) {
          const double increase = t - prev;
          ++log.updates.steps;
          log.updates.max_trace_increase = std::max(log.updates.max_trace_increase, increase);
          if (increase > kTraceIncreaseFloor) ++log.updates.violations;
          prev = t;
        }
        tracks[i][j] = res.track;
      }
    }

    SlotRecord rec;
    double total = 0.0;
    for (int i = 0; i < n_radars; ++i) {
      for (const Track& t : tracks[i]) total += t.cov.trace();
    }
    rec.trace_sum = total / n_radars;
    rec.coverage = profile.coverage();
    rec.profile = std::move(profile);
    rec.measurements = n_meas;
    for (int i = 1; i < n_radars && rec.radars_agree; ++i) {
      rec.radars_agree = tracks[i] == tracks[0];
    }
    log.slots.push_back(std::move(rec));
  }
  return log;
}

SeriesSummary summarize(std::span<const MetricsLog> runs) {
  SeriesSummary out;
  if (runs.empty()) return out;
  const std::size_t horizon = runs.front().slots.size();
  const double n = static_cast<double>(runs.size());
  out.mean.assign(horizon, 0.0);
  out.stderr_.assign(horizon, 0.0);
  for (std::size_t k = 0; k < horizon; ++k) {
    double sum = 0.0;
    for (const auto& r : runs) sum += r.slots[k].trace_sum;
    const double mean = sum / n;
    double ss = 0.0;
    for (const auto& r : runs) ss += (r.slots[k].trace_sum - mean) * (r.slots[k].trace_sum - mean);
    out.mean[k] = mean;
    out.stderr_[k] = runs.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
  }
  const std::size_t start = horizon / 2;
  std::vector<double> tail(runs.size(), 0.0);
  for (std::size_t r = 0; r < runs.size(); ++r) {
    for (std::size_t k = start; k < horizon; ++k) tail[r] += runs[r].slots[k].trace_sum;
    tail[r] /= static_cast<double>(horizon - start);
  }
  double sum = 0.0;
  for (double v : tail) sum += v;
  out.tail_mean = sum / n;
  double ss = 0.0;
  for (double v : tail) ss += (v - out.tail_mean) * (v - out.tail_mean);
  out.tail_stderr = runs.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
  return out;
}

MonteCarloResult run_monte_carlo_seeds(const ScenarioConfig& cfg,
                                       std::span<const std::uint64_t> seeds, bool parallel) {
  cfg.validate();
  MonteCarloResult out;
  out.strategy = cfg.strategy;
  out.runs.resize(seeds.size());
  std::exception_ptr failure;
  const auto n = static_cast<std::int64_t>(seeds.size());
#pragma omp parallel for schedule(dynamic, 1) if (parallel)
  for (std::int64_t r = 0; r < n; ++r) {
    try {
      out.runs[r] = run_once(cfg, seeds[r]);
    } catch (...) {
#pragma omp critical(trackselect_mc_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  // Reduction in run order, independent of scheduling.
  for (const auto& run : out.runs) {
    out.updates.steps += run.updates.steps;
    out.updates.violations += run.updates.violations;
    out.updates.max_trace_increase =
        std::max(out.updates.max_trace_increase, run.updates.max_trace_increase);
  }
  out.summary = summarize(out.runs);
  return out;
}

namespace {

std::vector<std::uint64_t> seeds_for(const ScenarioConfig& cfg) {
  std::vector<std::uint64_t> seeds(cfg.n_runs);
  for (int r = 0; r < cfg.n_runs; ++r) seeds[r] = run_seed(cfg.seed, r);
  return seeds;
}

}  // namespace

MonteCarloResult run_monte_carlo(const ScenarioConfig& cfg) {
  const auto seeds = seeds_for(cfg);
  return run_monte_carlo_seeds(cfg, seeds, true);
}

MonteCarloResult run_monte_carlo_serial(const ScenarioConfig& cfg) {
  const auto seeds = seeds_for(cfg);
  return run_monte_carlo_seeds(cfg, seeds, false);
}

std::vector<MonteCarloResult> compare_strategies(const ScenarioConfig& cfg) {
  std::vector<MonteCarloResult> out;
  for (Strategy s : kAllStrategies) {
    ScenarioConfig c = cfg;
    c.strategy = s;
    out.push_back(run_monte_carlo(c));
  }
  return out;
}

}  // namespace trackselect
