#include "trackselect/game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace trackselect {

namespace {

bool all_finite_nonnegative(std::span<const double> xs) {
  return std::all_of(xs.begin(), xs.end(), [](double v) { return std::isfinite(v) && v >= 0.0; });
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return a * b;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t out = 1;
  for (std::uint64_t i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

// Utility shared by every radar; assumes a validated profile.
double common_utility(const GameSpec& spec, const StrategyProfile& s) {
  const GainTable& g = spec.gains;
  double u = 0.0;
  for (int j = 0; j < spec.n_targets; ++j) {
    int level = 0;
    double gain_j = 0.0;
    for (int i = 0; i < spec.n_radars; ++i) {
      for (int b = 0; b < s.beams(i, j); ++b) gain_j += g.increment(i, j, ++level);
    }
    u += level == 0 ? -spec.c : gain_j;
  }
  return u;
}

bool improves(double candidate, double base) {
  return candidate > base + kUtilityTolerance * (1.0 + std::abs(base));
}

StrategyProfile decode_profile(std::uint64_t index, const GameSpec& spec,
                               const std::vector<std::vector<int>>& rows) {
  StrategyProfile s(spec.n_radars, spec.n_targets);
  const std::uint64_t base = rows.size();
  for (int i = spec.n_radars - 1; i >= 0; --i) {
    s.set_row(i, rows[index % base]);
    index /= base;
  }
  return s;
}

NashCheck nash_check_with_rows(const GameSpec& spec, const StrategyProfile& profile,
                               const std::vector<std::vector<int>>& deviation_rows) {
  NashCheck out{true, std::nullopt};
  StrategyProfile trial = profile;
  for (int i = 0; i < spec.n_radars; ++i) {
    const double base = common_utility(spec, profile);
    const std::vector<int> own(profile.row(i).begin(), profile.row(i).end());
    for (const auto& row : deviation_rows) {
      if (row == own) continue;
      trial.set_row(i, row);
      const double u = common_utility(spec, trial);
      if (improves(u, base) && (!out.deviation || u - base > out.deviation->improvement)) {
        out.is_nash = false;
        out.deviation = Deviation{i, row, u - base};
      }
    }
    trial.set_row(i, own);
  }
  return out;
}

std::vector<StrategyProfile> nash_set_impl(const GameSpec& spec, ProfileSpace space,
                                           bool parallel) {
  spec.validate();
  const std::uint64_t count = profile_count(spec, space);
  if (count > kMaxProfiles) {
    throw std::length_error("nash_set: " + std::to_string(count) + " profiles exceeds limit");
  }
  const auto rows = enumerate_rows(spec.n_targets, spec.m, space);
  const auto deviation_rows = enumerate_rows(spec.n_targets, spec.m, ProfileSpace::kAll);
  const auto n = static_cast<std::int64_t>(count);
  std::vector<char> flags(count, 0);
#pragma omp parallel for schedule(dynamic, 64) if (parallel)
  for (std::int64_t k = 0; k < n; ++k) {
    const StrategyProfile s = decode_profile(static_cast<std::uint64_t>(k), spec, rows);
    flags[k] = nash_check_with_rows(spec, s, deviation_rows).is_nash ? 1 : 0;
  }
  std::vector<StrategyProfile> out;
  for (std::int64_t k = 0; k < n; ++k) {
    if (flags[k]) out.push_back(decode_profile(static_cast<std::uint64_t>(k), spec, rows));
  }
  return out;
}

std::vector<double> utility_vector(const GameSpec& spec, const StrategyProfile& s) {
  std::vector<double> u(spec.n_radars);
  for (int i = 0; i < spec.n_radars; ++i) u[i] = utility(spec, s, i);
  return u;
}

bool dominates(const std::vector<double>& a, const std::vector<double>& b) {
  bool strictly = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (improves(b[i], a[i])) return false;
    if (improves(a[i], b[i])) strictly = true;
  }
  return strictly;
}

bool full_beam(const GameSpec& spec, const StrategyProfile& s) {
  for (int i = 0; i < spec.n_radars; ++i) {
    if (s.row_sum(i) != spec.m) return false;
  }
  return true;
}

bool distinct_full_beam(const GameSpec& spec, const StrategyProfile& s) {
  if (!full_beam(spec, s)) return false;
  for (int i = 0; i < spec.n_radars; ++i) {
    for (int v : s.row(i)) {
      if (v > 1) return false;
    }
  }
  return true;
}

std::uint64_t factorial(int n) {
  std::uint64_t out = 1;
  for (int k = 2; k <= n; ++k) out = saturating_mul(out, static_cast<std::uint64_t>(k));
  return out;
}

}  // namespace

// ---------------------------------------------------------------- GainTable

GainTable GainTable::shared(std::vector<std::vector<double>> per_target, int n_radars) {
  if (n_radars < 1) throw std::invalid_argument("GainTable: n_radars < 1");
  std::vector<std::vector<std::vector<double>>> t(n_radars, per_target);
  GainTable out = radar_specific(std::move(t));
  out.radar_specific_ = false;
  return out;
}

GainTable GainTable::radar_specific(std::vector<std::vector<std::vector<double>>> per_radar) {
  if (per_radar.empty() || per_radar.front().empty()) {
    throw std::invalid_argument("GainTable: empty table");
  }
  const std::size_t n_targets = per_radar.front().size();
  const std::size_t depth = per_radar.front().front().size();
  for (const auto& radar : per_radar) {
    if (radar.size() != n_targets) throw std::invalid_argument("GainTable: ragged target count");
    for (const auto& seq : radar) {
      if (seq.size() != depth) throw std::invalid_argument("GainTable: ragged increment depth");
      if (!all_finite_nonnegative(seq)) {
        throw std::invalid_argument("GainTable: increments must be finite and >= 0");
      }
    }
  }
  GainTable out;
  out.inc_ = std::move(per_radar);
  out.depth_ = static_cast<int>(depth);
  out.radar_specific_ = true;
  return out;
}

double GainTable::increment(int radar, int target, int level) const {
  if (level < 1 || level > depth_) {
    throw std::out_of_range("GainTable: level " + std::to_string(level) + " beyond depth " +
                            std::to_string(depth_));
  }
  return inc_[radar][target][level - 1];
}

std::span<const double> GainTable::increments(int radar, int target) const {
  return inc_.at(radar).at(target);
}

bool GainTable::is_case_a() const {
  const auto& ref = inc_.front().front();
  for (const auto& radar : inc_) {
    for (const auto& seq : radar) {
      if (seq != ref) return false;
    }
  }
  return true;
}

bool GainTable::is_case_b() const {
  for (int p = 0; p + 1 < depth_; ++p) {
    double min_p = std::numeric_limits<double>::infinity();
    double max_next = -std::numeric_limits<double>::infinity();
    for (const auto& radar : inc_) {
      for (const auto& seq : radar) {
        min_p = std::min(min_p, seq[p]);
        max_next = std::max(max_next, seq[p + 1]);
      }
    }
    if (!(min_p > max_next)) return false;
  }
  for (const auto& radar : inc_) {
    for (std::size_t j = 0; j < radar.size(); ++j) {
      for (std::size_t l = j + 1; l < radar.size(); ++l) {
        if (radar[j][0] == radar[l][0]) return false;
      }
    }
  }
  return true;
}

double gain(const GainTable& table, int target, int m_t) {
  if (table.is_radar_specific()) {
    throw std::invalid_argument("gain: count-only gain needs a shared table");
  }
  if (m_t < 0 || m_t > table.depth()) {
    throw std::out_of_range("gain: m_t=" + std::to_string(m_t) + " exceeds table depth " +
                            std::to_string(table.depth()));
  }
  double g = 0.0;
  for (int p = 1; p <= m_t; ++p) g += table.increment(0, target, p);
  return g;
}

double gain(const GainTable& table, int target, std::span<const int> radars) {
  if (static_cast<int>(radars.size()) > table.depth()) {
    throw std::out_of_range("gain: more measurements than table depth");
  }
  double g = 0.0;
  int level = 0;
  for (int i : radars) g += table.increment(i, target, ++level);
  return g;
}

// ---------------------------------------------------------------- GameSpec

void GameSpec::validate() const {
  if (n_radars < 1) throw std::invalid_argument("GameSpec: n_radars < 1");
  if (n_targets < 1) throw std::invalid_argument("GameSpec: n_targets < 1");
  if (m < 1 || m >= n_targets) throw std::invalid_argument("GameSpec: need 1 <= m < n_targets");
  if (!std::isfinite(c)) throw std::invalid_argument("GameSpec: c must be finite");
  if (gains.n_radars() != n_radars || gains.n_targets() != n_targets) {
    throw std::invalid_argument("GameSpec: gain table shape does not match game");
  }
  if (gains.depth() < n_radars * m) {
    throw std::invalid_argument("GameSpec: gain table depth below n_radars * m");
  }
}

// ---------------------------------------------------------------- StrategyProfile

StrategyProfile::StrategyProfile(int n_radars, int n_targets)
    : n_radars_(n_radars), n_targets_(n_targets), s_(static_cast<std::size_t>(n_radars) * n_targets, 0) {}

void StrategyProfile::set_row(int radar, std::span<const int> row) {
  std::copy(row.begin(), row.end(), s_.begin() + radar * n_targets_);
}

int StrategyProfile::row_sum(int radar) const {
  const auto r = row(radar);
  int sum = 0;
  for (int v : r) sum += v;
  return sum;
}

int StrategyProfile::coverage(int target) const {
  int sum = 0;
  for (int i = 0; i < n_radars_; ++i) sum += beams(i, target);
  return sum;
}

std::vector<int> StrategyProfile::coverage() const {
  std::vector<int> out(n_targets_);
  for (int j = 0; j < n_targets_; ++j) out[j] = coverage(j);
  return out;
}

int StrategyProfile::total_beams() const {
  int sum = 0;
  for (int v : s_) sum += v;
  return sum;
}

std::string StrategyProfile::to_string() const {
  std::ostringstream os;
  os << '[';
  for (int i = 0; i < n_radars_; ++i) {
    if (i) os << ' ';
    os << '(';
    for (int j = 0; j < n_targets_; ++j) os << (j ? "," : "") << beams(i, j);
    os << ')';
  }
  os << ']';
  return os.str();
}

void validate_profile(const GameSpec& spec, const StrategyProfile& profile) {
  if (profile.n_radars() != spec.n_radars || profile.n_targets() != spec.n_targets) {
    throw std::invalid_argument("profile shape does not match game");
  }
  for (int i = 0; i < spec.n_radars; ++i) {
    for (int v : profile.row(i)) {
      if (v < 0) throw std::invalid_argument("profile has negative beam count");
    }
    if (profile.row_sum(i) > spec.m) {
      throw std::invalid_argument("radar " + std::to_string(i) + " uses more than m beams");
    }
  }
}

double utility(const GameSpec& spec, const StrategyProfile& profile, int radar) {
  validate_profile(spec, profile);
  if (radar < 0 || radar >= spec.n_radars) throw std::out_of_range("utility: unknown radar");
  return common_utility(spec, profile);
}

// ---------------------------------------------------------------- enumeration

std::vector<std::vector<int>> enumerate_rows(int n_targets, int m, ProfileSpace space) {
  std::vector<std::vector<int>> out;
  std::vector<int> row(n_targets, 0);
  // Depth-first over targets with remaining budget.
  std::function<void(int, int)> rec = [&](int j, int budget) {
    if (j == n_targets) {
      if (space == ProfileSpace::kAll || budget == 0) out.push_back(row);
      return;
    }
    const int max_here = space == ProfileSpace::kAll ? budget : std::min(budget, 1);
    for (int v = 0; v <= max_here; ++v) {
      row[j] = v;
      rec(j + 1, budget - v);
    }
    row[j] = 0;
  };
  rec(0, m);
  return out;
}

std::uint64_t profile_count(const GameSpec& spec, ProfileSpace space) {
  const auto t = static_cast<std::uint64_t>(spec.n_targets);
  const auto m = static_cast<std::uint64_t>(spec.m);
  const std::uint64_t rows = space == ProfileSpace::kAll ? binomial(t + m, m) : binomial(t, m);
  std::uint64_t out = 1;
  for (int i = 0; i < spec.n_radars; ++i) out = saturating_mul(out, rows);
  return out;
}

void for_each_profile(const GameSpec& spec, ProfileSpace space,
                      const std::function<void(const StrategyProfile&)>& visit) {
  spec.validate();
  const std::uint64_t count = profile_count(spec, space);
  if (count > kMaxProfiles) {
    throw std::length_error("enumerate_profiles: " + std::to_string(count) +
                            " profiles exceeds limit");
  }
  const auto rows = enumerate_rows(spec.n_targets, spec.m, space);
  for (std::uint64_t k = 0; k < count; ++k) visit(decode_profile(k, spec, rows));
}

std::vector<StrategyProfile> enumerate_profiles(const GameSpec& spec, ProfileSpace space) {
  std::vector<StrategyProfile> out;
  for_each_profile(spec, space, [&](const StrategyProfile& s) { out.push_back(s); });
  return out;
}

// ---------------------------------------------------------------- equilibria

NashCheck is_nash(const GameSpec& spec, const StrategyProfile& profile) {
  spec.validate();
  validate_profile(spec, profile);
  const std::uint64_t rows = profile_count(GameSpec{1, spec.n_targets, spec.m, spec.c, {}},
                                           ProfileSpace::kAll);
  if (saturating_mul(rows, static_cast<std::uint64_t>(spec.n_radars)) > kMaxProfiles) {
    throw std::length_error("is_nash: deviation space too large");
  }
  return nash_check_with_rows(spec, profile,
                              enumerate_rows(spec.n_targets, spec.m, ProfileSpace::kAll));
}

std::vector<StrategyProfile> nash_set(const GameSpec& spec, ProfileSpace space) {
  return nash_set_impl(spec, space, true);
}

std::vector<StrategyProfile> nash_set_serial(const GameSpec& spec, ProfileSpace space) {
  return nash_set_impl(spec, space, false);
}

bool pareto_dominates(const GameSpec& spec, const StrategyProfile& a, const StrategyProfile& b) {
  return dominates(utility_vector(spec, a), utility_vector(spec, b));
}

bool is_pareto_optimal(const GameSpec& spec, const StrategyProfile& profile,
                       std::span<const StrategyProfile> candidates) {
  if (candidates.size() > kMaxProfiles) throw std::length_error("is_pareto_optimal: too many candidates");
  const auto u = utility_vector(spec, profile);
  for (const auto& other : candidates) {
    if (dominates(utility_vector(spec, other), u)) return false;
  }
  return true;
}

std::vector<bool> pareto_flags(const GameSpec& spec, std::span<const StrategyProfile> profiles,
                               std::span<const StrategyProfile> candidates) {
  if (candidates.size() > kMaxProfiles) throw std::length_error("pareto_flags: too many candidates");
  std::vector<std::vector<double>> cand_u(candidates.size());
  for (std::size_t k = 0; k < candidates.size(); ++k) cand_u[k] = utility_vector(spec, candidates[k]);
  std::vector<char> flags(profiles.size(), 1);
  const auto n = static_cast<std::int64_t>(profiles.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t k = 0; k < n; ++k) {
    const auto u = utility_vector(spec, profiles[k]);
    for (const auto& other : cand_u) {
      if (dominates(other, u)) {
        flags[k] = 0;
        break;
      }
    }
  }
  return {flags.begin(), flags.end()};
}

StrategyProfile greedy_accuracy_profile(const GameSpec& spec) {
  spec.validate();
  StrategyProfile s(spec.n_radars, spec.n_targets);
  std::vector<int> cov(spec.n_targets, 0);
  for (int i = 0; i < spec.n_radars; ++i) {
    for (int beam = 0; beam < spec.m; ++beam) {
      int best = -1;
      for (int j = 0; j < spec.n_targets; ++j) {
        if (s.beams(i, j) > 0) continue;
        if (best < 0 || cov[j] < cov[best] ||
            (cov[j] == cov[best] &&
             spec.gains.increment(i, j, cov[j] + 1) > spec.gains.increment(i, best, cov[best] + 1))) {
          best = j;
        }
      }
      s.add_beam(i, best);
      ++cov[best];
    }
  }
  return s;
}

int coverage_levels(const GameSpec& spec) {
  return (spec.n_radars * spec.m + spec.n_targets - 1) / spec.n_targets;
}

PropositionReport check_proposition(const GameSpec& spec, int which) {
  spec.validate();
  if (which != 1 && which != 2) throw std::invalid_argument("check_proposition: which must be 1 or 2");
  if (spec.c < 0.0) throw std::invalid_argument("check_proposition: requires c >= 0");
  if (which == 1 && !spec.gains.is_case_a()) {
    throw std::invalid_argument("check_proposition(1): gain table is not case a");
  }
  if (which == 2 && !spec.gains.is_case_b()) {
    throw std::invalid_argument("check_proposition(2): gain table is not case b");
  }

  PropositionReport rep;
  rep.proposition = which;
  const auto all = enumerate_profiles(spec, ProfileSpace::kAll);
  const auto ne = nash_set(spec, ProfileSpace::kAll);
  const auto po = pareto_flags(spec, ne, all);
  rep.profiles = all.size();
  rep.nash = ne.size();
  rep.pareto_nash = static_cast<std::uint64_t>(std::count(po.begin(), po.end(), true));

  const int beams = spec.n_radars * spec.m;
  const std::uint64_t per_radar_orders = factorial(spec.m);
  for (const auto& s : ne) {
    if (distinct_full_beam(spec, s)) {
      ++rep.distinct_full_nash;
      std::uint64_t orders = 1;
      for (int i = 0; i < spec.n_radars; ++i) orders = saturating_mul(orders, per_radar_orders);
      rep.distinct_full_nash_ordered += orders;
    }
  }
  if (beams <= spec.n_targets) {
    rep.ordered_formula = 1;
    for (int k = 0; k < beams; ++k) {
      rep.ordered_formula = saturating_mul(rep.ordered_formula,
                                           static_cast<std::uint64_t>(spec.n_targets - k));
    }
  }
  bool ok = true;

  if (which == 1) {
    auto predicted = [&](const StrategyProfile& s) {
      if (!full_beam(spec, s)) return false;
      const auto cov = s.coverage();
      const auto [lo, hi] = std::minmax_element(cov.begin(), cov.end());
      return beams <= spec.n_targets ? *hi <= 1 : *hi - *lo <= 1;
    };
    for (const auto& s : all) {
      if (predicted(s)) ++rep.predicted;
    }
    std::uint64_t predicted_and_po_ne = 0;
    for (std::size_t k = 0; k < ne.size(); ++k) {
      const bool pred = predicted(ne[k]);
      if (pred && po[k]) ++predicted_and_po_ne;
      if (!pred || !po[k]) {
        ok = false;
        rep.counterexamples.push_back(ne[k]);
        rep.findings.push_back(ne[k].to_string() +
                               (pred ? " is NE but not Pareto optimal" : " is NE outside the predicted set"));
      }
    }
    if (predicted_and_po_ne != rep.predicted) {
      ok = false;
      for (const auto& s : all) {
        if (predicted(s) && std::find(ne.begin(), ne.end(), s) == ne.end()) {
          rep.counterexamples.push_back(s);
          rep.findings.push_back(s.to_string() + " is predicted but not an NE");
        }
      }
    }
  } else {
    const int levels = coverage_levels(spec);
    if (beams > spec.n_targets) {
      for (const auto& s : ne) {
        const auto cov = s.coverage();
        if (!full_beam(spec, s) || *std::min_element(cov.begin(), cov.end()) < levels - 1) {
          ok = false;
          ++rep.level_filling_violations;
          rep.counterexamples.push_back(s);
          rep.findings.push_back(s.to_string() + " is NE without the first " +
                                 std::to_string(levels - 1) + " levels filled");
        }
      }
    }
    const StrategyProfile greedy = greedy_accuracy_profile(spec);
    const NashCheck g = is_nash(spec, greedy);
    rep.greedy_is_nash = g.is_nash;
    if (!g.is_nash) {
      ok = false;
      rep.counterexamples.push_back(greedy);
      rep.findings.push_back("greedy accuracy profile " + greedy.to_string() +
                             " is not an NE (radar " + std::to_string(g.deviation->radar) +
                             " improves by " + std::to_string(g.deviation->improvement) + ")");
    }
    if (rep.pareto_nash == 0) {
      ok = false;
      rep.findings.push_back("no Pareto-optimal NE");
    }
    if (rep.pareto_nash < rep.nash) {
      rep.findings.push_back(std::to_string(rep.nash - rep.pareto_nash) +
                             " NE are not Pareto optimal");
    }
  }
  rep.holds = ok;
  return rep;
}

}  // namespace trackselect
