#include "trackselect/dynamics.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace trackselect {

namespace {

// Per-target beam count of the radar's own selection.
std::vector<int> own_counts(const RadarDecisionState& state, int n_targets) {
  std::vector<int> own(n_targets, 0);
  for (int j : state.selected) {
    if (j < 0 || j >= n_targets) {
      throw std::out_of_range("radar " + std::to_string(state.radar_id) + " selects unknown target");
    }
    ++own[j];
  }
  return own;
}

int argmin_outside(std::span<const int> counts, const std::vector<int>& own) {
  int best = -1;
  for (int l = 0; l < static_cast<int>(own.size()); ++l) {
    if (own[l] > 0) continue;
    if (best < 0 || counts[l] < counts[best]) best = l;
  }
  return best;
}

// Moves duplicate beams in place; returns the moves made.
std::vector<BeamMove> dedupe(std::vector<int>& own, std::vector<int>& counts) {
  std::vector<BeamMove> moves;
  std::vector<int> order(own.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return own[a] > own[b]; });
  for (int j : order) {
    while (own[j] > 1) {
      const int l = argmin_outside(counts, own);
      if (l < 0) return moves;
      --own[j];
      --counts[j];
      ++own[l];
      ++counts[l];
      moves.push_back({MoveKind::kDedupe, j, l});
    }
  }
  return moves;
}

std::optional<BeamMove> balancing_move(const std::vector<int>& own, std::span<const int> counts,
                                       std::span<const double> accuracy) {
  const int n = static_cast<int>(own.size());
  int low = -1;  // most accurate of the least covered outside targets
  int high = -1; // least accurate of the most covered own targets
  for (int t = 0; t < n; ++t) {
    if (own[t] == 0) {
      if (low < 0 || counts[t] < counts[low] ||
          (counts[t] == counts[low] && accuracy[t] > accuracy[low])) {
        low = t;
      }
    } else {
      if (high < 0 || counts[t] > counts[high] ||
          (counts[t] == counts[high] && accuracy[t] < accuracy[high])) {
        high = t;
      }
    }
  }
  if (low < 0 || high < 0) return std::nullopt;
  const int gap = counts[high] - counts[low];
  if (gap >= 2) return BeamMove{MoveKind::kOverCovered, high, low};
  if (gap == 1 && accuracy[low] > accuracy[high]) return BeamMove{MoveKind::kAccuracySwap, high, low};
  return std::nullopt;
}

void check_inputs(std::span<const int> counts, std::span<const double> accuracy) {
  if (counts.size() != accuracy.size()) {
    throw std::invalid_argument("best response: counts and accuracy sizes differ");
  }
}

std::vector<int> to_selection(const std::vector<int>& own) {
  std::vector<int> sel;
  for (int j = 0; j < static_cast<int>(own.size()); ++j) {
    for (int b = 0; b < own[j]; ++b) sel.push_back(j);
  }
  return sel;
}

}  // namespace

void DynamicsConfig::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in [0, 1]");
  if (k_reinit < 1) throw std::invalid_argument("k_reinit must be >= 1");
}

std::vector<BeamMove> plan_best_response(const RadarDecisionState& state,
                                         std::span<const int> counts,
                                         std::span<const double> accuracy,
                                         const NetworkShape& shape, const DynamicsConfig& cfg,
                                         Rng& rng) {
  (void)shape;
  check_inputs(counts, accuracy);
  const int n = static_cast<int>(counts.size());
  std::vector<int> own = own_counts(state, n);
  std::vector<int> view(counts.begin(), counts.end());
  std::vector<BeamMove> moves = dedupe(own, view);

  // Always consume one draw so stream positions do not depend on the state.
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  if (u < cfg.alpha) {
    if (auto mv = balancing_move(own, view, accuracy)) moves.push_back(*mv);
  }
  return moves;
}

RadarDecisionState best_response_step(const RadarDecisionState& state, std::span<const int> counts,
                                      std::span<const double> accuracy, const NetworkShape& shape,
                                      const DynamicsConfig& cfg, Rng& rng) {
  const auto moves = plan_best_response(state, counts, accuracy, shape, cfg, rng);
  std::vector<int> own = own_counts(state, static_cast<int>(counts.size()));
  for (const BeamMove& mv : moves) {
    --own[mv.from];
    ++own[mv.to];
  }
  RadarDecisionState next = state;
  next.selected = to_selection(own);
  next.last_known_counts.assign(counts.begin(), counts.end());
  return next;
}

bool has_enabled_move(const RadarDecisionState& state, std::span<const int> counts,
                      std::span<const double> accuracy) {
  check_inputs(counts, accuracy);
  std::vector<int> own = own_counts(state, static_cast<int>(counts.size()));
  std::vector<int> view(counts.begin(), counts.end());
  if (!dedupe(own, view).empty()) return true;
  return balancing_move(own, view, accuracy).has_value();
}

std::vector<int> random_selection(int n_targets, int m, Rng& rng) {
  if (m > n_targets) throw std::invalid_argument("random_selection: m exceeds target count");
  std::vector<int> pool(n_targets);
  std::iota(pool.begin(), pool.end(), 0);
  for (int k = 0; k < m; ++k) {
    std::uniform_int_distribution<int> pick(k, n_targets - 1);
    std::swap(pool[k], pool[pick(rng)]);
  }
  std::vector<int> out(pool.begin(), pool.begin() + m);
  std::sort(out.begin(), out.end());
  return out;
}

StrategyProfile profile_from_selections(std::span<const RadarDecisionState> network, int n_targets) {
  StrategyProfile s(static_cast<int>(network.size()), n_targets);
  for (std::size_t i = 0; i < network.size(); ++i) {
    for (int j : network[i].selected) s.add_beam(static_cast<int>(i), j);
  }
  return s;
}

bool is_dynamics_fixed_point(std::span<const RadarDecisionState> network, int n_targets,
                             const AccuracyTable& accuracy) {
  const StrategyProfile s = profile_from_selections(network, n_targets);
  const auto cov = s.coverage();
  const auto [lo, hi] = std::minmax_element(cov.begin(), cov.end());
  if (*hi - *lo > 1) return false;
  for (std::size_t i = 0; i < network.size(); ++i) {
    for (int v : s.row(static_cast<int>(i))) {
      if (v > 1) return false;
    }
    if (has_enabled_move(network[i], cov, accuracy[i])) return false;
  }
  return true;
}

// ---------------------------------------------------------------- BestResponseNetwork

BestResponseNetwork::BestResponseNetwork(std::vector<RadarDecisionState> initial, int n_targets,
                                         DynamicsConfig cfg)
    : states_(std::move(initial)), n_targets_(n_targets), cfg_(cfg) {
  cfg_.validate();
  shape_.n_targets = n_targets_;
  for (auto& st : states_) {
    std::sort(st.selected.begin(), st.selected.end());
    shape_.total_beams += static_cast<int>(st.selected.size());
    rngs_.push_back(make_rng(cfg_.seed, static_cast<std::uint64_t>(st.radar_id)));
  }
  profile_ = profile_from_selections(states_, n_targets_);
}

const StrategyProfile& BestResponseNetwork::step(int slot, const AccuracyTable& accuracy) {
  if (slot == 0) return profile_;
  if (slot % cfg_.k_reinit == 0) {
    for (std::size_t i = 0; i < states_.size(); ++i) {
      states_[i].selected = random_selection(
          n_targets_, static_cast<int>(states_[i].selected.size()), rngs_[i]);
    }
  } else {
    // Everyone reacts to the same broadcast counts.
    const std::vector<int> counts = profile_.coverage();
    std::vector<RadarDecisionState> next;
    next.reserve(states_.size());
    for (std::size_t i = 0; i < states_.size(); ++i) {
      next.push_back(best_response_step(states_[i], counts, accuracy[i], shape_, cfg_, rngs_[i]));
    }
    states_ = std::move(next);
  }
  profile_ = profile_from_selections(states_, n_targets_);
  return profile_;
}

std::vector<StrategyProfile> run_dynamics(std::vector<RadarDecisionState> network, int n_targets,
                                          const AccuracyTable& accuracy, const DynamicsConfig& cfg,
                                          int n_slots) {
  BestResponseNetwork net(std::move(network), n_targets, cfg);
  std::vector<StrategyProfile> out;
  out.reserve(n_slots);
  for (int k = 0; k < n_slots; ++k) out.push_back(net.step(k, accuracy));
  return out;
}

// ---------------------------------------------------------------- strategies

std::string_view strategy_name(Strategy s) {
  switch (s) {
    case Strategy::kStandalone: return "standalone";
    case Strategy::kRandomPerEpoch: return "random-k";
    case Strategy::kRandomPerSlot: return "random-slot";
    case Strategy::kBestResponse: return "best-response";
    case Strategy::kCentralized: return "centralized";
  }
  return "unknown";
}

Strategy parse_strategy(std::string_view name) {
  for (Strategy s : kAllStrategies) {
    if (strategy_name(s) == name) return s;
  }
  throw std::invalid_argument("unknown strategy '" + std::string(name) + "'");
}

bool shares_measurements(Strategy s) { return s != Strategy::kStandalone; }

AccuracyTable first_increments(std::span<const RadarSite> radars,
                               const std::vector<std::vector<Track>>& predicted) {
  AccuracyTable acc(radars.size());
  for (std::size_t i = 0; i < radars.size(); ++i) {
    const RadarSite* site = &radars[i];
    for (const Track& tr : predicted[i]) {
      acc[i].push_back(total_gain(hypothetical_update(tr, std::span(&site, 1))));
    }
  }
  return acc;
}

AccuracyTable static_accuracy(std::span<const RadarSite> radars) {
  AccuracyTable acc(radars.size());
  for (std::size_t i = 0; i < radars.size(); ++i) {
    for (double b : radars[i].b) acc[i].push_back(-b);
  }
  return acc;
}

std::uint64_t centralized_search_size(int n_targets, std::span<const int> beams) {
  std::uint64_t out = 1;
  for (int m : beams) {
    const auto rows = enumerate_rows(n_targets, m, ProfileSpace::kDistinctFullBeam).size();
    out *= rows;
    if (out > kMaxProfiles) return out;
  }
  return out;
}

StrategyProfile centralized_allocation(std::span<const RadarSite> radars,
                                       std::span<const Track> tracks, std::span<const int> beams,
                                       double c) {
  const int n_radars = static_cast<int>(radars.size());
  const int n_targets = static_cast<int>(tracks.size());
  if (static_cast<int>(beams.size()) != n_radars) {
    throw std::invalid_argument("centralized_allocation: beams/radars size mismatch");
  }
  if (n_radars > 16) throw std::length_error("centralized_allocation: too many radars");
  const std::uint64_t size = centralized_search_size(n_targets, beams);
  if (size > kMaxProfiles) {
    throw std::length_error("centralized_allocation: " + std::to_string(size) +
                            " profiles exceeds limit");
  }

  // value[j][mask]: utility contribution of target j when the radars in mask cover it.
  const std::size_t n_masks = std::size_t{1} << n_radars;
  std::vector<std::vector<double>> value(n_targets, std::vector<double>(n_masks, -c));
  std::vector<const RadarSite*> order;
  for (int j = 0; j < n_targets; ++j) {
    for (std::size_t mask = 1; mask < n_masks; ++mask) {
      order.clear();
      for (int i = 0; i < n_radars; ++i) {
        if (mask >> i & 1U) order.push_back(&radars[i]);
      }
      value[j][mask] = total_gain(hypothetical_update(tracks[j], order));
    }
  }

  std::vector<std::vector<std::vector<int>>> rows(n_radars);
  for (int i = 0; i < n_radars; ++i) {
    rows[i] = enumerate_rows(n_targets, beams[i], ProfileSpace::kDistinctFullBeam);
  }
  std::vector<std::size_t> idx(n_radars, 0), best_idx(n_radars, 0);
  double best = -std::numeric_limits<double>::infinity();
  std::vector<std::size_t> masks(n_targets);
  for (std::uint64_t k = 0; k < size; ++k) {
    std::fill(masks.begin(), masks.end(), 0);
    for (int i = 0; i < n_radars; ++i) {
      const auto& row = rows[i][idx[i]];
      for (int j = 0; j < n_targets; ++j) {
        if (row[j]) masks[j] |= std::size_t{1} << i;
      }
    }
    double u = 0.0;
    for (int j = 0; j < n_targets; ++j) u += value[j][masks[j]];
    if (u > best) {
      best = u;
      best_idx = idx;
    }
    // Mixed-radix increment, last radar fastest.
    for (int i = n_radars - 1; i >= 0; --i) {
      if (++idx[i] < rows[i].size()) break;
      idx[i] = 0;
    }
  }
  StrategyProfile s(n_radars, n_targets);
  for (int i = 0; i < n_radars; ++i) s.set_row(i, rows[i][best_idx[i]]);
  return s;
}

namespace {

StrategyProfile round_robin(int slot, int n_targets, std::span<const int> beams) {
  StrategyProfile s(static_cast<int>(beams.size()), n_targets);
  for (std::size_t i = 0; i < beams.size(); ++i) {
    for (int b = 0; b < beams[i]; ++b) {
      s.add_beam(static_cast<int>(i),
                 static_cast<int>((static_cast<long long>(slot) * beams[i] + b) % n_targets));
    }
  }
  return s;
}

class StandalonePolicy final : public SelectionPolicy {
 public:
  explicit StandalonePolicy(PolicySetup setup) : setup_(std::move(setup)) {}
  StrategyProfile select(const SlotContext& ctx) override {
    return round_robin(ctx.slot, setup_.n_targets, setup_.beams);
  }

 private:
  PolicySetup setup_;
};

class RandomPolicy final : public SelectionPolicy {
 public:
  RandomPolicy(PolicySetup setup, int period) : setup_(std::move(setup)), period_(period) {
    for (std::size_t i = 0; i < setup_.beams.size(); ++i) {
      rngs_.push_back(make_rng(setup_.seed, i));
    }
  }
  StrategyProfile select(const SlotContext& ctx) override {
    if (ctx.slot % period_ == 0 || current_.n_radars() == 0) {
      current_ = StrategyProfile(static_cast<int>(setup_.beams.size()), setup_.n_targets);
      for (std::size_t i = 0; i < setup_.beams.size(); ++i) {
        for (int j : random_selection(setup_.n_targets, setup_.beams[i], rngs_[i])) {
          current_.add_beam(static_cast<int>(i), j);
        }
      }
    }
    return current_;
  }

 private:
  PolicySetup setup_;
  int period_;
  std::vector<Rng> rngs_;
  StrategyProfile current_;
};

class BestResponsePolicy final : public SelectionPolicy {
 public:
  explicit BestResponsePolicy(PolicySetup setup) : setup_(std::move(setup)) {
    std::vector<RadarDecisionState> init;
    for (std::size_t i = 0; i < setup_.beams.size(); ++i) {
      Rng rng = make_rng(setup_.seed, 1000 + i);
      init.push_back({static_cast<int>(i), random_selection(setup_.n_targets, setup_.beams[i], rng), {}});
    }
    DynamicsConfig cfg = setup_.dynamics;
    cfg.seed = derive_seed(setup_.seed, 2000);
    network_ = std::make_unique<BestResponseNetwork>(std::move(init), setup_.n_targets, cfg);
  }
  StrategyProfile select(const SlotContext& ctx) override {
    const AccuracyTable acc = setup_.dynamics.static_ranks
                                  ? static_accuracy(ctx.radars)
                                  : first_increments(ctx.radars, *ctx.predicted);
    return network_->step(ctx.slot, acc);
  }

 private:
  PolicySetup setup_;
  std::unique_ptr<BestResponseNetwork> network_;
};

class CentralizedPolicy final : public SelectionPolicy {
 public:
  explicit CentralizedPolicy(PolicySetup setup) : setup_(std::move(setup)) {
    if (centralized_search_size(setup_.n_targets, setup_.beams) > kMaxProfiles) {
      throw std::length_error("centralized strategy: instance too large for exhaustive search");
    }
  }
  StrategyProfile select(const SlotContext& ctx) override {
    if (ctx.slot % setup_.dynamics.k_reinit == 0 || current_.n_radars() == 0) {
      // Every radar holds the same shared tracks; radar 0's view stands in.
      current_ = centralized_allocation(ctx.radars, (*ctx.predicted)[0], setup_.beams, ctx.c);
    }
    return current_;
  }

 private:
  PolicySetup setup_;
  StrategyProfile current_;
};

}  // namespace

std::unique_ptr<SelectionPolicy> baseline_strategy(Strategy kind, const PolicySetup& setup) {
  setup.dynamics.validate();
  switch (kind) {
    case Strategy::kStandalone: return std::make_unique<StandalonePolicy>(setup);
    case Strategy::kRandomPerEpoch: return std::make_unique<RandomPolicy>(setup, setup.dynamics.k_reinit);
    case Strategy::kRandomPerSlot: return std::make_unique<RandomPolicy>(setup, 1);
    case Strategy::kBestResponse: return std::make_unique<BestResponsePolicy>(setup);
    case Strategy::kCentralized: return std::make_unique<CentralizedPolicy>(setup);
  }
  throw std::invalid_argument("baseline_strategy: unknown kind");
}

}  // namespace trackselect
