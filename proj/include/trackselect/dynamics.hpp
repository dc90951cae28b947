#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "trackselect/game.hpp"
#include "trackselect/random.hpp"
#include "trackselect/sensing.hpp"
#include "trackselect/tracker.hpp"

namespace trackselect {

struct DynamicsConfig {
  double alpha = 0.4;     // reallocation probability
  int k_reinit = 10;      // slots between random reinitializations
  std::uint64_t seed = 0;
  bool static_ranks = false;  // rank accuracy by b factors instead of live increments

  void validate() const;
};

struct RadarDecisionState {
  int radar_id = 0;
  std::vector<int> selected;  // target ids, one entry per beam, sorted
  std::vector<int> last_known_counts;
};

// accuracy[i][j]: how useful radar i's measurement of target j is; larger is better.
using AccuracyTable = std::vector<std::vector<double>>;

struct NetworkShape {
  int n_targets = 0;
  int total_beams = 0;
  int levels() const { return (total_beams + n_targets - 1) / n_targets; }
};

enum class MoveKind { kDedupe, kOverCovered, kAccuracySwap };

struct BeamMove {
  MoveKind kind;
  int from;
  int to;
};

// The moves one best-response step would make: every duplicate beam is moved to
// the least covered target outside the selection, then, with probability alpha,
// at most one balancing move. A balancing move takes a beam off the radar's most
// covered target j and puts it on the most accurate of the least covered outside
// targets l when m_j - m_l >= 2, or when m_j - m_l == 1 and l is more accurate.
std::vector<BeamMove> plan_best_response(const RadarDecisionState& state,
                                         std::span<const int> counts,
                                         std::span<const double> accuracy,
                                         const NetworkShape& shape, const DynamicsConfig& cfg,
                                         Rng& rng);

RadarDecisionState best_response_step(const RadarDecisionState& state, std::span<const int> counts,
                                      std::span<const double> accuracy, const NetworkShape& shape,
                                      const DynamicsConfig& cfg, Rng& rng);

// True when some move would fire with alpha = 1.
bool has_enabled_move(const RadarDecisionState& state, std::span<const int> counts,
                      std::span<const double> accuracy);

// m distinct targets, uniformly at random, sorted.
std::vector<int> random_selection(int n_targets, int m, Rng& rng);

StrategyProfile profile_from_selections(std::span<const RadarDecisionState> network, int n_targets);

// No duplicates, coverage gap <= 1 and no radar has an enabled move.
bool is_dynamics_fixed_point(std::span<const RadarDecisionState> network, int n_targets,
                             const AccuracyTable& accuracy);

// Synchronous best-response network. Slot 0 uses the initial selections; every
// k_reinit slots the selections are redrawn at random; otherwise all radars move
// at once using the coverage counts broadcast in the previous slot.
class BestResponseNetwork {
 public:
  BestResponseNetwork(std::vector<RadarDecisionState> initial, int n_targets, DynamicsConfig cfg);

  const StrategyProfile& step(int slot, const AccuracyTable& accuracy);

  std::span<const RadarDecisionState> states() const { return states_; }
  const StrategyProfile& profile() const { return profile_; }

 private:
  std::vector<RadarDecisionState> states_;
  int n_targets_;
  DynamicsConfig cfg_;
  NetworkShape shape_;
  std::vector<Rng> rngs_;
  StrategyProfile profile_;
};

// Frozen-accuracy trajectory of n_slots profiles.
std::vector<StrategyProfile> run_dynamics(std::vector<RadarDecisionState> network, int n_targets,
                                          const AccuracyTable& accuracy, const DynamicsConfig& cfg,
                                          int n_slots);

// ---------------------------------------------------------------- strategies

enum class Strategy {
  kStandalone,      // (a) own measurements only, round-robin targets
  kRandomPerEpoch,  // (b) shared, random selection redrawn every K slots
  kRandomPerSlot,   // (c) shared, random selection every slot
  kBestResponse,    // (d) shared, distributed best response
  kCentralized,     // (e) shared, exhaustive search every K slots
};

inline constexpr Strategy kAllStrategies[] = {Strategy::kStandalone, Strategy::kRandomPerEpoch,
                                              Strategy::kRandomPerSlot, Strategy::kBestResponse,
                                              Strategy::kCentralized};

std::string_view strategy_name(Strategy s);
Strategy parse_strategy(std::string_view name);
bool shares_measurements(Strategy s);

struct SlotContext {
  int slot = 0;
  std::span<const RadarSite> radars;
  // predicted[i][j]: radar i's predicted track of target j for this slot.
  const std::vector<std::vector<Track>>* predicted = nullptr;
  double c = 0.1;
};

class SelectionPolicy {
 public:
  virtual ~SelectionPolicy() = default;
  virtual StrategyProfile select(const SlotContext& ctx) = 0;
};

struct PolicySetup {
  int n_targets = 0;
  std::vector<int> beams;  // per radar
  DynamicsConfig dynamics;
  std::uint64_t seed = 0;
};

std::unique_ptr<SelectionPolicy> baseline_strategy(Strategy kind, const PolicySetup& setup);

// accuracy[i][j] = first gain increment of radar i on its predicted track of j.
AccuracyTable first_increments(std::span<const RadarSite> radars,
                               const std::vector<std::vector<Track>>& predicted);
// accuracy[i][j] = -b_ij.
AccuracyTable static_accuracy(std::span<const RadarSite> radars);

// Number of distinct-target profiles the centralized search scans.
std::uint64_t centralized_search_size(int n_targets, std::span<const int> beams);

// Maximizes sum_j (gain_j - c [uncovered]) over distinct-target profiles, with
// gain_j the trace reduction of the radars covering j applied in ascending order
// to `tracks[j]`. Ties keep the first profile in enumeration order.
StrategyProfile centralized_allocation(std::span<const RadarSite> radars,
                                       std::span<const Track> tracks, std::span<const int> beams,
                                       double c);

}  // namespace trackselect
