// One line per acceptance criterion; exit status is nonzero if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include <Eigen/Dense>
#include <omp.h>

#include "trackselect/dynamics.hpp"
#include "trackselect/game.hpp"
#include "trackselect/harness.hpp"
#include "trackselect/tracker.hpp"

using namespace trackselect;

namespace {

int failures = 0;

void verdict(int id, const char* name, bool pass, const std::string& detail) {
  std::printf("[%s] %d %s: %s\n", pass ? "PASS" : "FAIL", id, name, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

GameSpec shared_game(int n, int m, int t, std::vector<double> inc, double c) {
  GameSpec s{n, t, m, c, GainTable::shared(std::vector<std::vector<double>>(t, std::move(inc)), n)};
  s.validate();
  return s;
}

// Small shapes with N m > T and at most 1000 profiles.
constexpr int kShapes[][3] = {{3, 1, 2}, {4, 1, 2}, {5, 1, 2}, {6, 1, 2},
                              {2, 2, 3}, {4, 1, 3}, {3, 2, 3}};

// ------------------------------------------------------------------ 1
void equilibrium_count() {
  const int cases[][4] = {{2, 1, 3, 6}, {2, 1, 4, 12}, {3, 1, 4, 24}};
  bool ok = true;
  std::string detail;
  for (const auto& c : cases) {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<double> inc;
    for (int p = 0; p < c[0] * c[1]; ++p) inc.push_back(3.0 / (p + 1));
    const GameSpec g = shared_game(c[0], c[1], c[2], inc, 0.1);
    std::uint64_t ordered = 0;
    const std::uint64_t orders = 1;  // m = 1
    for (const auto& s : nash_set(g)) {
      bool distinct_full = true;
      for (int i = 0; i < g.n_radars; ++i) distinct_full &= s.row_sum(i) == g.m;
      for (int cov : s.coverage()) distinct_full &= cov <= 1;
      if (distinct_full) ordered += orders;
    }
    const double dt = seconds_since(t0);
    ok &= ordered == static_cast<std::uint64_t>(c[3]) && dt < 1.0;
    detail += fmt("(%d,%d,%d)->%llu/%d in %.3fs ", c[0], c[1], c[2],
                  static_cast<unsigned long long>(ordered), c[3], dt);
  }
  verdict(1, "equilibrium count", ok, detail);
}

// ------------------------------------------------------------------ 2
void balanced_equilibria() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(derive_seed(2024, 2));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uint64_t bad = 0, total_ne = 0;
  int instances = 0;
  for (; instances < 50; ++instances) {
    const auto& sh = kShapes[instances % std::size(kShapes)];
    const int depth = sh[0] * sh[1];
    // Strictly decreasing positive increments shared by every target.
    std::vector<double> steps(depth);
    for (auto& v : steps) v = 0.05 + u(rng);
    std::vector<double> inc(depth);
    double acc = 0.0;
    for (int p = depth - 1; p >= 0; --p) inc[p] = (acc += steps[p]);
    const GameSpec g = shared_game(sh[0], sh[1], sh[2], inc, 0.01 + u(rng));
    const auto all = enumerate_profiles(g, ProfileSpace::kAll);
    const auto ne = nash_set(g);
    const auto po = pareto_flags(g, ne, all);
    total_ne += ne.size();
    for (std::size_t k = 0; k < ne.size(); ++k) {
      bool full = true;
      for (int i = 0; i < g.n_radars; ++i) full &= ne[k].row_sum(i) == g.m;
      const auto cov = ne[k].coverage();
      const auto [lo, hi] = std::minmax_element(cov.begin(), cov.end());
      if (!full || *hi - *lo > 1 || !po[k]) ++bad;
    }
    if (!check_proposition(g, 1).holds) ++bad;
  }
  const double dt = seconds_since(t0);
  verdict(2, "balanced equilibria", bad == 0 && total_ne > 0 && dt < 30.0,
          fmt("%d instances, %llu NE, %llu counterexamples, %.2fs", instances,
              static_cast<unsigned long long>(total_ne), static_cast<unsigned long long>(bad), dt));
}

// ------------------------------------------------------------------ 3
void level_filling() {
  Rng rng(derive_seed(2024, 3));
  std::uniform_real_distribution<double> u(0.0, 0.9);
  std::uint64_t fill_bad = 0, greedy_bad = 0;
  int no_po = 0, with_non_po = 0;
  for (int k = 0; k < 20; ++k) {
    const auto& sh = kShapes[k % std::size(kShapes)];
    const int n = sh[0], m = sh[1], t = sh[2], depth = n * m;
    // Level p of every (radar, target) lies in [depth - p, depth - p + 0.9).
    std::vector<std::vector<std::vector<double>>> inc(n, std::vector<std::vector<double>>(t));
    for (auto& r : inc) {
      for (auto& seq : r) {
        for (int p = 0; p < depth; ++p) seq.push_back(depth - p + u(rng));
      }
    }
    GameSpec g{n, t, m, 0.1, GainTable::radar_specific(std::move(inc))};
    const PropositionReport rep = check_proposition(g, 2);
    fill_bad += rep.level_filling_violations;
    greedy_bad += rep.greedy_is_nash ? 0 : 1;
    if (rep.pareto_nash == 0) ++no_po;
    if (rep.nash > rep.pareto_nash) ++with_non_po;
  }
  verdict(3, "level filling", fill_bad == 0 && no_po == 0 && with_non_po > 0,
          fmt("level-filling counterexamples %llu, instances without PO NE %d, instances with "
              "non-PO NE %d/20, greedy top-up not NE in %llu/20",
              static_cast<unsigned long long>(fill_bad), no_po, with_non_po,
              static_cast<unsigned long long>(greedy_bad)));
}

// ------------------------------------------------------------------ 4
void sequential_batch() {
  Rng rng(derive_seed(2024, 4));
  std::normal_distribution<double> n01;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    Mat4 a;
    for (int i = 0; i < 16; ++i) a(i) = n01(rng);
    const Track t{0, Vec4(n01(rng), n01(rng), n01(rng), n01(rng)),
                  a * a.transpose() + Mat4::Identity() * 0.1};
    const int m = 1 + trial % 5;
    std::vector<LinearObservation> obs(m);
    Eigen::MatrixXd h(2 * m, 4);
    Eigen::VectorXd z(2 * m);
    Eigen::MatrixXd r = Eigen::MatrixXd::Zero(2 * m, 2 * m);
    for (int k = 0; k < m; ++k) {
      for (int i = 0; i < 8; ++i) obs[k].h(i) = n01(rng);
      obs[k].z = Vec2(n01(rng), n01(rng));
      Mat2 b;
      for (int i = 0; i < 4; ++i) b(i) = n01(rng);
      obs[k].r = b * b.transpose() + Mat2::Identity() * 0.05;
      h.block<2, 4>(2 * k, 0) = obs[k].h;
      z.segment<2>(2 * k) = obs[k].z;
      r.block<2, 2>(2 * k, 2 * k) = obs[k].r;
    }
    const Eigen::MatrixXd s = h * t.cov * h.transpose() + r;
    const Eigen::MatrixXd gain = t.cov * h.transpose() * s.inverse();
    const Mat4 batch = (Mat4::Identity() - gain * h) * t.cov;
    const Mat4 seq = update_cyclic_linear(t, obs).track.cov;
    worst = std::max(worst, (seq - batch).norm() / batch.norm());
  }
  verdict(4, "sequential equals batch", worst <= 1e-9,
          fmt("100 instances, worst relative Frobenius error %.3e", worst));
}

// ------------------------------------------------------------------ 5, 6, 8
std::string csv_of(const std::vector<MonteCarloResult>& res) {
  std::ostringstream os;
  write_metrics_csv(os, res);
  return os.str();
}

std::vector<MonteCarloResult> scenario_criteria() {
  const ScenarioConfig cfg = default_scenario();
  const auto t0 = std::chrono::steady_clock::now();
  const auto res = compare_strategies(cfg);
  const double dt = seconds_since(t0);

  std::uint64_t steps = 0, violations = 0;
  double max_increase = -1e300;
  for (const auto& r : res) {
    steps += r.updates.steps;
    violations += r.updates.violations;
    max_increase = std::max(max_increase, r.updates.max_trace_increase);
  }
  verdict(5, "covariance monotonicity", violations == 0 && steps > 0,
          fmt("%llu update steps over %d runs x %d slots x 5 strategies, %llu violations, largest "
              "trace change %+.3e",
              static_cast<unsigned long long>(steps), cfg.n_runs, cfg.horizon,
              static_cast<unsigned long long>(violations), max_increase));

  auto at = [&](Strategy s) -> const SeriesSummary& {
    for (const auto& r : res) {
      if (r.strategy == s) return r.summary;
    }
    throw std::logic_error("missing strategy");
  };
  const auto& a = at(Strategy::kStandalone);
  const auto& b = at(Strategy::kRandomPerEpoch);
  const auto& c = at(Strategy::kRandomPerSlot);
  const auto& d = at(Strategy::kBestResponse);
  const auto& e = at(Strategy::kCentralized);
  const bool order = a.tail_mean > b.tail_mean && b.tail_mean > c.tail_mean && c.tail_mean > d.tail_mean;
  const bool near_central = d.tail_mean <= 1.15 * e.tail_mean;
  const bool separated = d.tail_mean + d.tail_stderr < c.tail_mean - c.tail_stderr &&
                         d.tail_mean + d.tail_stderr < b.tail_mean - b.tail_stderr;
  verdict(6, "strategy ordering", order && near_central && separated && dt < 300.0,
          fmt("tail means a=%.4e b=%.4e c=%.4e(+-%.1e) d=%.4e(+-%.1e) e=%.4e, d/e=%.3f, %.1fs",
              a.tail_mean, b.tail_mean, c.tail_mean, c.tail_stderr, d.tail_mean, d.tail_stderr,
              e.tail_mean, d.tail_mean / e.tail_mean, dt));

  return res;
}

void determinism(const std::vector<MonteCarloResult>& res) {
  const ScenarioConfig cfg = default_scenario();
  const std::string base = csv_of(res);
  const int max_threads = omp_get_max_threads();
  omp_set_num_threads(1);
  const std::string one = csv_of(compare_strategies(cfg));
  omp_set_num_threads(4);
  const std::string four = csv_of(compare_strategies(cfg));
  omp_set_num_threads(max_threads);
  verdict(8, "determinism", base == one && one == four && !base.empty(),
          fmt("%zu CSV bytes identical across runs with %d, 1 and 4 threads", base.size(), max_threads));
}

// ------------------------------------------------------------------ 7
void absorption() {
  constexpr int n_radars = 3, n_targets = 5, m = 2, horizon = 100, deadline = 50;
  int absorbed = 0, worst_slot = 0;
  for (int seed = 0; seed < 100; ++seed) {
    const std::uint64_t s = derive_seed(2024, 700 + seed);
    ScenarioConfig cfg = default_scenario();
    std::vector<RadarSite> radars = cfg.radars;
    const auto b = draw_b_factors(cfg, s);
    for (int i = 0; i < n_radars; ++i) radars[i].b = b[i];
    const AccuracyTable acc = static_accuracy(radars);

    // Even seeds may start with duplicate beams.
    Rng init = make_rng(s, 1);
    std::vector<RadarDecisionState> net;
    std::uniform_int_distribution<int> pick(0, n_targets - 1);
    for (int i = 0; i < n_radars; ++i) {
      std::vector<int> sel = seed % 2 ? random_selection(n_targets, m, init)
                                      : std::vector<int>{pick(init), pick(init)};
      std::sort(sel.begin(), sel.end());
      net.push_back({i, sel, {}});
    }
    DynamicsConfig dyn;
    dyn.alpha = 0.4;
    dyn.k_reinit = horizon;  // no reinitialization inside the window
    dyn.seed = s;
    BestResponseNetwork network(net, n_targets, dyn);
    int first = -1;
    bool stayed = true;
    StrategyProfile held;
    for (int slot = 0; slot < horizon; ++slot) {
      const StrategyProfile& p = network.step(slot, acc);
      const bool fixed = is_dynamics_fixed_point(network.states(), n_targets, acc);
      if (first < 0 && fixed) {
        first = slot;
        held = p;
      } else if (first >= 0 && (!fixed || !(p == held))) {
        stayed = false;
      }
    }
    if (first >= 0 && first <= deadline && stayed) ++absorbed;
    worst_slot = std::max(worst_slot, first < 0 ? horizon : first);
  }
  verdict(7, "dynamics absorption", absorbed == 100,
          fmt("%d/100 seeds absorbed by slot %d and held to slot %d; slowest at slot %d", absorbed,
              deadline, horizon - 1, worst_slot));
}

}  // namespace

int main() {
  try {
    equilibrium_count();
    balanced_equilibria();
    level_filling();
    sequential_batch();
    const auto res = scenario_criteria();
    absorption();
    determinism(res);
  } catch (const std::exception& e) {
    std::printf("[FAIL] aborted: %s\n", e.what());
    return 2;
  }
  std::printf("%s: %d failing criteria\n", failures ? "FAILED" : "OK", failures);
  return failures ? 1 : 0;
}
