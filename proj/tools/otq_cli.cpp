// Command-line front end: comparative training runs and standalone OT checks.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "otq/harness.hpp"

namespace {

struct TrainingArgs {
  std::string config_path;
  std::string out_dir = "out";
  std::vector<std::uint64_t> seeds;  // empty: keep the config's seeds
  int episodes = 0;                  // 0: keep the config's episode count
  std::string mode;                  // run only; empty: keep the config's mode
};

void apply_overrides(otq::ExperimentConfig& config, const TrainingArgs& args) {
  if (!args.seeds.empty()) config.seeds = args.seeds;
  if (args.episodes > 0) config.episodes = args.episodes;
  if (!args.mode.empty()) config.agent.mode = otq::parse_mode(args.mode);
  config.validate();
}

int run_training(const TrainingArgs& args, bool compare) {
  otq::ExperimentConfig config = otq::ExperimentConfig::from_file(args.config_path);
  apply_overrides(config, args);

  const std::vector<otq::AgentMode> modes =
      compare ? std::vector<otq::AgentMode>{otq::AgentMode::Baseline, otq::AgentMode::OtAssisted}
              : std::vector<otq::AgentMode>{config.agent.mode};
  const otq::ComparisonResult result = otq::run_and_export(config, modes, args.out_dir);

  for (const otq::RunFailure& f : result.failures) {
    std::cerr << "run failed (seed=" << f.seed << ", mode=" << otq::to_string(f.mode)
              << "): " << f.message << '\n';
  }
  if (!result.records.empty()) {
    std::cout << result.records.size() << " episode records -> " << args.out_dir
              << "/episodes.csv (with episodes_smoothed.csv, summary.json)\n";
  }
  return result.failures.empty() ? 0 : 2;
}

void add_training_options(CLI::App& sub, TrainingArgs& args, bool with_mode) {
  sub.add_option("--config", args.config_path, "experiment config JSON")->required();
  sub.add_option("--out", args.out_dir, "output directory (default: out)");
  sub.add_option("--seeds", args.seeds, "override config seeds, e.g. --seeds 0,1,2")
      ->delimiter(',');
  sub.add_option("--episodes", args.episodes, "override episode count")
      ->check(CLI::PositiveNumber);
  if (with_mode) {
    sub.add_option("--mode", args.mode, "baseline or ot_assisted (default: config's mode)");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tabular Q-learning with optimal-transport reward shaping"};
  app.require_subcommand(1);

  TrainingArgs run_args;
  CLI::App* run = app.add_subcommand("run", "train one agent mode across the configured seeds");
  add_training_options(*run, run_args, /*with_mode=*/true);

  TrainingArgs compare_args;
  CLI::App* compare =
      app.add_subcommand("compare", "train baseline and ot_assisted agents on matched seeds");
  add_training_options(*compare, compare_args, /*with_mode=*/false);

  std::string source_path, target_path, coords_path;
  std::string ot_method = "exact";
  double reg = 1e-2, sinkhorn_tol = 1e-6, p = 1.0;
  int max_iter = 10000;
  CLI::App* check = app.add_subcommand("ot-check", "solve and verify one transport problem");
  check->add_option("--source", source_path, "JSON array of source masses")->required();
  check->add_option("--target", target_path, "JSON array of target masses")->required();
  check->add_option("--coords", coords_path, "JSON array of [x, y] cell coordinates")->required();
  check->add_option("--method", ot_method, "exact or sinkhorn (default: exact)");
  check->add_option("--reg", reg, "sinkhorn regularization");
  check->add_option("--tol", sinkhorn_tol, "sinkhorn stopping tolerance");
  check->add_option("--max-iter", max_iter, "sinkhorn iteration cap");
  check->add_option("--p", p, "wasserstein order (default: 1)");

  try {
    app.parse(argc, argv);

    if (run->parsed()) return run_training(run_args, /*compare=*/false);
    if (compare->parsed()) return run_training(compare_args, /*compare=*/true);

    otq::OtSolverConfig config;
    if (ot_method == "exact") {
      config.method = otq::OtMethod::Exact;
    } else if (ot_method == "sinkhorn") {
      config.method = otq::OtMethod::Sinkhorn;
    } else {
      throw std::invalid_argument("unknown --method \"" + ot_method + "\"");
    }
    config.sinkhorn_reg = reg;
    config.sinkhorn_tol = sinkhorn_tol;
    config.sinkhorn_max_iter = max_iter;

    const otq::OtCheckResult result =
        otq::ot_check(source_path, target_path, coords_path, config, p);
    std::printf("objective %.12g\n", result.objective);
    std::printf("wasserstein(p=%g) %.12g\n", p, result.wasserstein);
    std::printf("max_marginal_violation %.12g\n", result.max_violation);
    std::printf("feasible %s\n", result.feasible ? "yes" : "no");
    return result.feasible ? 0 : 2;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // --help exits 0; any parse problem is a usage error
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
