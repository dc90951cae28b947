// Command-line front end: simulate, compare, equilibria, default-config.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <omp.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "trackselect/game.hpp"
#include "trackselect/game_io.hpp"
#include "trackselect/harness.hpp"

namespace ts = trackselect;
using nlohmann::json;

namespace {

struct RunFlags {
  std::string config;
  std::string strategy;
  std::optional<int> runs;
  std::optional<int> horizon;
  std::optional<std::uint64_t> seed;
  std::optional<double> alpha;
  std::optional<int> k_reinit;
  std::string out;
  int threads = 0;
};

void add_run_flags(CLI::App* cmd, RunFlags& f, bool with_strategy) {
  cmd->add_option("--config", f.config, "scenario JSON (default: built-in scenario)")
      ->check(CLI::ExistingFile);
  if (with_strategy) {
    cmd->add_option("--strategy", f.strategy,
                    "standalone|random-k|random-slot|best-response|centralized");
  }
  cmd->add_option("--runs", f.runs, "Monte Carlo realizations")->check(CLI::PositiveNumber);
  cmd->add_option("--horizon", f.horizon, "slots per run")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", f.seed, "master seed");
  cmd->add_option("--alpha", f.alpha, "best-response reallocation probability")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--k-reinit", f.k_reinit, "reinitialization period")->check(CLI::PositiveNumber);
  cmd->add_option("--out", f.out, "metrics CSV path; summary goes next to it");
  cmd->add_option("--threads", f.threads, "OpenMP threads (0 = runtime default)");
}

ts::ScenarioConfig resolve(const RunFlags& f) {
  ts::ScenarioConfig cfg = f.config.empty() ? ts::default_scenario() : ts::load_config(f.config);
  if (!f.strategy.empty()) cfg.strategy = ts::parse_strategy(f.strategy);
  if (f.runs) cfg.n_runs = *f.runs;
  if (f.horizon) cfg.horizon = *f.horizon;
  if (f.seed) cfg.seed = *f.seed;
  if (f.alpha) cfg.dynamics.alpha = *f.alpha;
  if (f.k_reinit) cfg.dynamics.k_reinit = *f.k_reinit;
  if (!f.out.empty()) cfg.output = f.out;
  cfg.validate();
  if (f.threads > 0) omp_set_num_threads(f.threads);
  return cfg;
}

std::string summary_path(const std::string& csv) {
  std::filesystem::path p(csv);
  p.replace_extension(".summary.json");
  return p.string();
}

void write_outputs(const ts::ScenarioConfig& cfg, const std::vector<ts::MonteCarloResult>& results) {
  std::ofstream csv(cfg.output, std::ios::binary);
  if (!csv) throw std::runtime_error("cannot write '" + cfg.output + "'");
  ts::write_metrics_csv(csv, results);
  const std::string summary = summary_path(cfg.output);
  std::ofstream js(summary, std::ios::binary);
  if (!js) throw std::runtime_error("cannot write '" + summary + "'");
  js << ts::summary_to_json(results).dump(2) << '\n';

  for (const auto& r : results) {
    std::printf("%-14s tail mean %.6e  stderr %.2e  (violations %llu / %llu steps)\n",
                std::string(ts::strategy_name(r.strategy)).c_str(), r.summary.tail_mean,
                r.summary.tail_stderr, static_cast<unsigned long long>(r.updates.violations),
                static_cast<unsigned long long>(r.updates.steps));
  }
  std::printf("wrote %s and %s\n", cfg.output.c_str(), summary.c_str());
}

json equilibria_report(const ts::GameSpec& spec, ts::ProfileSpace space) {
  const auto ne = ts::nash_set(spec, space);
  const auto all = ts::enumerate_profiles(spec, ts::ProfileSpace::kAll);
  const auto po = ts::pareto_flags(spec, ne, all);
  json list = json::array();
  for (std::size_t k = 0; k < ne.size(); ++k) {
    list.push_back({{"profile", ts::profile_to_json(ne[k])},
                    {"utility", ts::utility(spec, ne[k], 0)},
                    {"pareto_optimal", static_cast<bool>(po[k])}});
  }
  json out = {{"game", ts::game_to_json(spec)},
              {"case_a", spec.gains.is_case_a()},
              {"case_b", spec.gains.is_case_b()},
              {"space", space == ts::ProfileSpace::kAll ? "all" : "distinct"},
              {"profiles_examined", ts::profile_count(spec, space)},
              {"nash_count", ne.size()},
              {"nash", std::move(list)}};
  json props = json::array();
  if (spec.c >= 0.0 && spec.gains.is_case_a()) props.push_back(ts::report_to_json(ts::check_proposition(spec, 1)));
  if (spec.c >= 0.0 && spec.gains.is_case_b()) props.push_back(ts::report_to_json(ts::check_proposition(spec, 2)));
  out["propositions"] = std::move(props);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Track selection in a multifunction radar network"};
  app.require_subcommand(1);

  RunFlags sim_flags;
  auto* simulate = app.add_subcommand("simulate", "run one strategy over the scenario");
  add_run_flags(simulate, sim_flags, true);

  RunFlags cmp_flags;
  auto* compare = app.add_subcommand("compare", "run every strategy into one CSV");
  add_run_flags(compare, cmp_flags, false);

  std::string game_path, eq_out, space_name = "all";
  auto* equilibria = app.add_subcommand("equilibria", "enumerate Nash equilibria of a game JSON");
  equilibria->add_option("game", game_path, "game JSON")->required()->check(CLI::ExistingFile);
  equilibria->add_option("--space", space_name, "profile space to scan: all|distinct")
      ->check(CLI::IsMember({"all", "distinct"}));
  equilibria->add_option("--out", eq_out, "report path (default: stdout)");

  std::string cfg_out;
  auto* defaults = app.add_subcommand("default-config", "print the built-in scenario as JSON");
  defaults->add_option("--out", cfg_out, "output path (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) {
      const auto cfg = resolve(sim_flags);
      write_outputs(cfg, {ts::run_monte_carlo(cfg)});
    } else if (*compare) {
      const auto cfg = resolve(cmp_flags);
      write_outputs(cfg, ts::compare_strategies(cfg));
    } else if (*equilibria) {
      std::ifstream in(game_path);
      json j;
      in >> j;
      const auto spec = ts::game_from_json(j);
      const auto space = space_name == "all" ? ts::ProfileSpace::kAll : ts::ProfileSpace::kDistinctFullBeam;
      const std::string text = equilibria_report(spec, space).dump(2) + "\n";
      if (eq_out.empty()) {
        std::cout << text;
      } else {
        std::ofstream(eq_out, std::ios::binary) << text;
      }
    } else if (*defaults) {
      const std::string text = ts::config_to_json(ts::default_scenario()).dump(2) + "\n";
      if (cfg_out.empty()) {
        std::cout << text;
      } else {
        std::ofstream(cfg_out, std::ios::binary) << text;
      }
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
