// Parallel kernels against their serial references.
#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>

#include <omp.h>

#include "trackselect/game.hpp"
#include "trackselect/harness.hpp"

using namespace trackselect;

namespace {

double seconds(const std::function<void()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void report(const char* name, double serial, double parallel) {
  std::printf("%-22s serial %8.3f s  parallel %8.3f s  speedup %5.2fx\n", name, serial, parallel,
              serial / parallel);
}

}  // namespace

int main(int argc, char** argv) {
  const bool quick = argc > 1 && std::strcmp(argv[1], "--quick") == 0;
  std::printf("threads: %d\n", omp_get_max_threads());

  GameSpec game;
  game.n_radars = 3;
  game.m = 2;
  game.n_targets = quick ? 4 : 6;
  game.c = 0.1;
  game.gains = GainTable::shared(
      std::vector<std::vector<double>>(game.n_targets, {3, 2, 1, 0.5, 0.25, 0.125}), 3);
  std::size_t n_serial = 0, n_parallel = 0;
  const double gs = seconds([&] { n_serial = nash_set_serial(game).size(); });
  const double gp = seconds([&] { n_parallel = nash_set(game).size(); });
  report("nash_set", gs, gp);
  if (n_serial != n_parallel) {
    std::fprintf(stderr, "nash_set mismatch: %zu vs %zu\n", n_serial, n_parallel);
    return 1;
  }

  ScenarioConfig cfg = default_scenario();
  cfg.strategy = Strategy::kCentralized;
  cfg.n_runs = quick ? 4 : 32;
  cfg.horizon = quick ? 40 : 240;
  MonteCarloResult ser, par;
  const double ms = seconds([&] { ser = run_monte_carlo_serial(cfg); });
  const double mp = seconds([&] { par = run_monte_carlo(cfg); });
  report("run_monte_carlo", ms, mp);
  if (ser.summary.mean != par.summary.mean) {
    std::fprintf(stderr, "run_monte_carlo mismatch\n");
    return 1;
  }
  return 0;
}
