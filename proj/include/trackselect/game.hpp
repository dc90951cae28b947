#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace trackselect {

// Diminishing tracking-gain increments. increment(i, j, p) is the trace
// reduction of the p-th measurement (1-based) applied to target j when that
// measurement comes from radar i. A shared table has the same sequence for
// every radar; a radar-specific table lets accuracy differ per radar.
class GainTable {
 public:
  GainTable() = default;

  // per_target[j][p-1]
  static GainTable shared(std::vector<std::vector<double>> per_target, int n_radars);
  // per_radar[i][j][p-1]
  static GainTable radar_specific(std::vector<std::vector<std::vector<double>>> per_radar);

  int n_radars() const { return static_cast<int>(inc_.size()); }
  int n_targets() const { return inc_.empty() ? 0 : static_cast<int>(inc_.front().size()); }
  int depth() const { return depth_; }
  bool is_radar_specific() const { return radar_specific_; }

  double increment(int radar, int target, int level) const;
  std::span<const double> increments(int radar, int target) const;

  // Identical increment sequences for all radars and targets.
  bool is_case_a() const;
  // Level separation: min over (radar, target) of level p strictly exceeds max
  // of level p+1, and per radar the first increments differ across targets.
  bool is_case_b() const;

 private:
  std::vector<std::vector<std::vector<double>>> inc_;
  int depth_ = 0;
  bool radar_specific_ = false;
};

// Sum of the first m_t increments of a shared table; 0 for m_t = 0.
double gain(const GainTable& table, int target, int m_t);
// Gain of target j when `radars` measure it in that order (one entry per beam).
double gain(const GainTable& table, int target, std::span<const int> radars);

struct GameSpec {
  int n_radars = 0;
  int n_targets = 0;
  int m = 1;       // beams per radar
  double c = 0.1;  // delay importance
  GainTable gains;

  void validate() const;
};

// s[i][j] = number of beams radar i devotes to target j.
class StrategyProfile {
 public:
  StrategyProfile() = default;
  StrategyProfile(int n_radars, int n_targets);

  int n_radars() const { return n_radars_; }
  int n_targets() const { return n_targets_; }

  int beams(int radar, int target) const { return s_[radar * n_targets_ + target]; }
  void set_beams(int radar, int target, int count) { s_[radar * n_targets_ + target] = count; }
  void add_beam(int radar, int target) { ++s_[radar * n_targets_ + target]; }

  std::span<const int> row(int radar) const {
    return {s_.data() + radar * n_targets_, static_cast<std::size_t>(n_targets_)};
  }
  void set_row(int radar, std::span<const int> row);

  int row_sum(int radar) const;
  int coverage(int target) const;  // m_j^t
  std::vector<int> coverage() const;
  int total_beams() const;

  std::string to_string() const;

  bool operator==(const StrategyProfile&) const = default;

 private:
  int n_radars_ = 0;
  int n_targets_ = 0;
  std::vector<int> s_;
};

// Throws std::invalid_argument if the profile does not fit the game.
void validate_profile(const GameSpec& spec, const StrategyProfile& profile);

// sum_j ( gain_j - c * [m_j^t == 0] ). Gains of each target are accumulated over
// its beams in ascending radar order.
double utility(const GameSpec& spec, const StrategyProfile& profile, int radar);

// Utility tolerance used for strict-improvement and dominance tests.
inline constexpr double kUtilityTolerance = 1e-9;

enum class ProfileSpace {
  kAll,               // every row with at most m beams, repeats allowed
  kDistinctFullBeam,  // every row with exactly m beams on m distinct targets
};

inline constexpr std::uint64_t kMaxProfiles = 2'000'000;

std::vector<std::vector<int>> enumerate_rows(int n_targets, int m, ProfileSpace space);
// Saturates at UINT64_MAX.
std::uint64_t profile_count(const GameSpec& spec, ProfileSpace space);

// Calls visit(profile) for every profile exactly once, radar 0 varying slowest.
// Throws std::length_error above kMaxProfiles.
void for_each_profile(const GameSpec& spec, ProfileSpace space,
                      const std::function<void(const StrategyProfile&)>& visit);
std::vector<StrategyProfile> enumerate_profiles(const GameSpec& spec, ProfileSpace space);

struct Deviation {
  int radar = 0;
  std::vector<int> row;
  double improvement = 0.0;
};

struct NashCheck {
  bool is_nash = false;
  std::optional<Deviation> deviation;
};

// Unilateral deviations range over every row with at most m beams.
NashCheck is_nash(const GameSpec& spec, const StrategyProfile& profile);

// Parallel over profiles; output order follows enumeration order.
std::vector<StrategyProfile> nash_set(const GameSpec& spec,
                                      ProfileSpace space = ProfileSpace::kAll);
std::vector<StrategyProfile> nash_set_serial(const GameSpec& spec,
                                             ProfileSpace space = ProfileSpace::kAll);

bool pareto_dominates(const GameSpec& spec, const StrategyProfile& a, const StrategyProfile& b);
bool is_pareto_optimal(const GameSpec& spec, const StrategyProfile& profile,
                       std::span<const StrategyProfile> candidates);
// flags[k] = is_pareto_optimal(profiles[k], candidates); parallel over profiles.
std::vector<bool> pareto_flags(const GameSpec& spec, std::span<const StrategyProfile> profiles,
                               std::span<const StrategyProfile> candidates);

// Radars pick in ascending id order; each beam goes to a least-covered target the
// radar does not hold yet, preferring the radar's largest increment at the level
// the beam would occupy.
StrategyProfile greedy_accuracy_profile(const GameSpec& spec);

int coverage_levels(const GameSpec& spec);  // ceil(N m / T)

struct PropositionReport {
  int proposition = 0;
  bool holds = false;
  std::uint64_t profiles = 0;
  std::uint64_t nash = 0;
  std::uint64_t pareto_nash = 0;
  std::uint64_t predicted = 0;
  // Equilibria whose rows put m beams on m distinct targets, counted as profile
  // matrices and as ordered beam assignments (x (m!)^N).
  std::uint64_t distinct_full_nash = 0;
  std::uint64_t distinct_full_nash_ordered = 0;
  // T! / (T - N m)! when N m <= T, else 0.
  std::uint64_t ordered_formula = 0;
  // Level-filling check only.
  std::uint64_t level_filling_violations = 0;
  bool greedy_is_nash = true;
  std::vector<StrategyProfile> counterexamples;
  std::vector<std::string> findings;
};

// which = 1: the case-a balanced/distinct characterization.
// which = 2: case-b level filling and greedy accuracy top-up.
// Throws std::invalid_argument when the table does not satisfy the case flag or c < 0.
PropositionReport check_proposition(const GameSpec& spec, int which);

}  // namespace trackselect
