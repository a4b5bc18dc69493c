#pragma once

// Experiment orchestration: config files, multi-seed comparative training,
// convergence detection, and plot-ready exports.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "otq/agent.hpp"
#include "otq/gridworld.hpp"
#include "otq/risk_model.hpp"

namespace otq {

inline AgentMode parse_mode(const std::string& text) {
  if (text == "baseline") return AgentMode::Baseline;
  if (text == "ot_assisted") return AgentMode::OtAssisted;
  throw std::invalid_argument("unknown agent mode \"" + text +
                              "\" (expected \"baseline\" or \"ot_assisted\")");
}

/// Everything a comparative experiment needs, with defaults matching the
/// shipped configuration. One JSON document under keys `env`, `risk`,
/// `agent`, `ot`, `stationary`, `train`.
struct ExperimentConfig {
  GridworldEnv env;
  RiskSpec risk;
  AgentConfig agent;  // seed and mode are overwritten per run
  OtSolverConfig ot;
  StationaryConfig stationary;
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};
  int episodes = 500;
  double wasserstein_p = 1.0;
  bool log_wasserstein = true;

  void validate() const {
    agent.validate();
    ot.validate();
    stationary.validate();
    risk.validate();
    if (seeds.empty()) throw std::invalid_argument("ExperimentConfig: seeds must be non-empty");
    if (episodes < 1) throw std::invalid_argument("ExperimentConfig: episodes must be >= 1");
    if (wasserstein_p < 1.0) {
      throw std::invalid_argument("ExperimentConfig: wasserstein_p must be >= 1");
    }
  }

  static ExperimentConfig from_json(const nlohmann::json& j, const std::string& base_dir = "");
  static ExperimentConfig from_file(const std::string& path);
};

namespace detail {

inline void expect_object(const nlohmann::json& j, const char* what) {
  if (!j.is_object()) {
    throw std::invalid_argument(std::string("config: ") + what + " must be a JSON object");
  }
}

}  // namespace detail

inline ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j,
                                                    const std::string& base_dir) {
  detail::expect_object(j, "document root");
  if (!j.contains("env")) throw std::invalid_argument("config: missing required key \"env\"");

  ExperimentConfig config;
  const auto& env_node = j["env"];
  if (env_node.is_string()) {
    std::filesystem::path path(env_node.get<std::string>());
    if (path.is_relative() && !base_dir.empty()) path = std::filesystem::path(base_dir) / path;
    config.env = load_env_file(path.string());
  } else {
    config.env = load_env(env_node);
  }

  if (j.contains("risk")) {
    const auto& r = j["risk"];
    detail::expect_object(r, "risk");
    config.risk.base_safety = r.value("base_safety", config.risk.base_safety);
    config.risk.adjacency_penalty = r.value("adjacency_penalty", config.risk.adjacency_penalty);
    config.risk.goal_safety = r.value("goal_safety", config.risk.goal_safety);
    config.risk.floor = r.value("floor", config.risk.floor);
  }

  if (j.contains("agent")) {
    const auto& a = j["agent"];
    detail::expect_object(a, "agent");
    config.agent.alpha = a.value("alpha", config.agent.alpha);
    config.agent.gamma = a.value("gamma", config.agent.gamma);
    config.agent.beta = a.value("beta", config.agent.beta);
    if (a.contains("epsilon")) {
      const auto& e = a["epsilon"];
      detail::expect_object(e, "agent.epsilon");
      config.agent.epsilon.initial = e.value("initial", config.agent.epsilon.initial);
      config.agent.epsilon.decay = e.value("decay", config.agent.epsilon.decay);
      config.agent.epsilon.minimum = e.value("min", config.agent.epsilon.minimum);
    }
    if (a.contains("mode")) config.agent.mode = parse_mode(a["mode"].get<std::string>());
  }

  if (j.contains("ot")) {
    const auto& o = j["ot"];
    detail::expect_object(o, "ot");
    if (o.contains("method")) {
      const std::string method = o["method"].get<std::string>();
      if (method == "exact") {
        config.ot.method = OtMethod::Exact;
      } else if (method == "sinkhorn") {
        config.ot.method = OtMethod::Sinkhorn;
      } else {
        throw std::invalid_argument("config: unknown ot.method \"" + method + "\"");
      }
    }
    config.ot.sinkhorn_reg = o.value("sinkhorn_reg", config.ot.sinkhorn_reg);
    config.ot.sinkhorn_tol = o.value("sinkhorn_tol", config.ot.sinkhorn_tol);
    config.ot.sinkhorn_max_iter = o.value("sinkhorn_max_iter", config.ot.sinkhorn_max_iter);
  }

  if (j.contains("stationary")) {
    const auto& s = j["stationary"];
    detail::expect_object(s, "stationary");
    if (s.contains("method")) {
      const std::string method = s["method"].get<std::string>();
      if (method == "empirical") {
        config.stationary.method = StationaryMethod::Empirical;
      } else if (method == "power") {
        config.stationary.method = StationaryMethod::Power;
      } else {
        throw std::invalid_argument("config: unknown stationary.method \"" + method + "\"");
      }
    }
    if (s.contains("window")) {
      const std::string window = s["window"].get<std::string>();
      if (window == "last_episode") {
        config.stationary.window = VisitWindow::LastEpisode;
      } else if (window == "all_episodes") {
        config.stationary.window = VisitWindow::AllEpisodes;
      } else {
        throw std::invalid_argument("config: unknown stationary.window \"" + window + "\"");
      }
    }
    config.stationary.smoothing = s.value("smoothing", config.stationary.smoothing);
    config.stationary.damping = s.value("damping", config.stationary.damping);
    config.stationary.tol = s.value("tol", config.stationary.tol);
    config.stationary.max_iter = s.value("max_iter", config.stationary.max_iter);
  }

  if (j.contains("train")) {
    const auto& t = j["train"];
    detail::expect_object(t, "train");
    config.episodes = t.value("episodes", config.episodes);
    if (t.contains("seeds")) {
      config.seeds.clear();
      for (const auto& s : t["seeds"]) config.seeds.push_back(s.get<std::uint64_t>());
    }
    config.wasserstein_p = t.value("wasserstein_p", config.wasserstein_p);
    config.log_wasserstein = t.value("log_wasserstein", config.log_wasserstein);
  }

  config.validate();
  return config;
}

inline ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument("config: " + path + ": " + e.what());
  }
  return from_json(j, std::filesystem::path(path).parent_path().string());
}

/// The fully resolved configuration, defaults included, for provenance.
inline nlohmann::json config_to_json(const ExperimentConfig& config) {
  nlohmann::json env{
      {"width", config.env.width},
      {"height", config.env.height},
      {"start", {config.env.start.x, config.env.start.y}},
      {"goal", {config.env.goal.x, config.env.goal.y}},
      {"rewards",
       {{"step", config.env.reward_step},
        {"obstacle", config.env.reward_obstacle},
        {"goal", config.env.reward_goal}}},
      {"max_steps", config.env.max_steps},
  };
  auto obstacles = nlohmann::json::array();
  for (const GridCoord& c : config.env.obstacles) obstacles.push_back({c.x, c.y});
  env["obstacles"] = std::move(obstacles);

  auto seeds = nlohmann::json::array();
  for (std::uint64_t s : config.seeds) seeds.push_back(s);

  return nlohmann::json{
      {"env", std::move(env)},
      {"risk",
       {{"base_safety", config.risk.base_safety},
        {"adjacency_penalty", config.risk.adjacency_penalty},
        {"goal_safety", config.risk.goal_safety},
        {"floor", config.risk.floor}}},
      {"agent",
       {{"alpha", config.agent.alpha},
        {"gamma", config.agent.gamma},
        {"beta", config.agent.beta},
        {"epsilon",
         {{"initial", config.agent.epsilon.initial},
          {"decay", config.agent.epsilon.decay},
          {"min", config.agent.epsilon.minimum}}},
        {"mode", to_string(config.agent.mode)}}},
      {"ot",
       {{"method", config.ot.method == OtMethod::Exact ? "exact" : "sinkhorn"},
        {"sinkhorn_reg", config.ot.sinkhorn_reg},
        {"sinkhorn_tol", config.ot.sinkhorn_tol},
        {"sinkhorn_max_iter", config.ot.sinkhorn_max_iter}}},
      {"stationary",
       {{"method",
         config.stationary.method == StationaryMethod::Empirical ? "empirical" : "power"},
        {"window",
         config.stationary.window == VisitWindow::LastEpisode ? "last_episode" : "all_episodes"},
        {"smoothing", config.stationary.smoothing},
        {"damping", config.stationary.damping},
        {"tol", config.stationary.tol},
        {"max_iter", config.stationary.max_iter}}},
      {"train",
       {{"episodes", config.episodes},
        {"seeds", std::move(seeds)},
        {"wasserstein_p", config.wasserstein_p},
        {"log_wasserstein", config.log_wasserstein}}},
  };
}

struct RunFailure {
  std::uint64_t seed = 0;
  AgentMode mode = AgentMode::Baseline;
  std::string message;
};

struct ComparisonResult {
  std::vector<EpisodeRecord> records;  // ordered by (seed, mode, episode)
  std::vector<RunFailure> failures;
};

/// Trains the requested modes for every seed. A failing run is captured with
/// its seed/mode context; the remaining runs still complete.
inline ComparisonResult run_modes(const ExperimentConfig& config,
                                  const std::vector<AgentMode>& modes) {
  config.validate();
  const ProbabilityVector risk = build_risk_distribution(config.env, config.risk);
  const CostMatrix cost = build_cost_matrix(state_coords(config.env));
  TrainOptions options;
  options.log_wasserstein = config.log_wasserstein;
  options.wasserstein_p = config.wasserstein_p;

  ComparisonResult result;
  for (std::uint64_t seed : config.seeds) {
    for (AgentMode mode : modes) {
      AgentConfig agent = config.agent;
      agent.seed = seed;
      agent.mode = mode;
      try {
        TrainResult run = train(config.env, risk, cost, agent, config.ot, config.episodes,
                                config.stationary, options);
        result.records.insert(result.records.end(), run.records.begin(), run.records.end());
      } catch (const std::exception& e) {
        result.failures.push_back({seed, mode, e.what()});
      }
    }
  }
  return result;
}

inline ComparisonResult run_comparison(const ExperimentConfig& config) {
  return run_modes(config, {AgentMode::Baseline, AgentMode::OtAssisted});
}

/// First episode after which the moving-average return stays within the
/// tolerance band around the final-`reference_window` mean. Returns the
/// episode count when the average never settles, and the first episode with
/// a defined moving average when it never leaves the band.
inline int convergence_episode(const std::vector<double>& returns, int window = 20,
                               double tolerance_fraction = 0.05, int reference_window = 100) {
  const int n = static_cast<int>(returns.size());
  if (n == 0) throw std::invalid_argument("convergence_episode: empty return sequence");
  if (window < 1) throw std::invalid_argument("convergence_episode: window must be >= 1");
  if (n < window) return n;

  const int ref_count = std::min(reference_window, n);
  double ref = 0.0;
  for (int e = n - ref_count; e < n; ++e) ref += returns[e];
  ref /= ref_count;
  // Relative band, guarded for near-zero references.
  const double tol = tolerance_fraction * std::max(std::abs(ref), 1.0);

  double window_sum = 0.0;
  for (int e = 0; e < window; ++e) window_sum += returns[e];
  int last_violation = -1;
  for (int e = window - 1;; ++e) {
    if (std::abs(window_sum / window - ref) > tol) last_violation = e;
    if (e + 1 >= n) break;
    window_sum += returns[e + 1] - returns[e + 1 - window];
  }
  if (last_violation == n - 1) return n;       // still outside the band at the end
  if (last_violation < 0) return window - 1;   // never left the band
  return last_violation + 1;
}

namespace detail {

/// %.6g rendering used for every real in the CSV outputs.
inline std::string format_real(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.6g", value);
  return buffer;
}

struct SeriesStats {
  std::vector<double> mean, stddev;
};

/// Cross-seed mean and population standard deviation per episode.
inline SeriesStats cross_seed_stats(const std::vector<std::vector<double>>& by_seed) {
  SeriesStats stats;
  if (by_seed.empty()) return stats;
  const std::size_t episodes = by_seed.front().size();
  stats.mean.assign(episodes, 0.0);
  stats.stddev.assign(episodes, 0.0);
  for (std::size_t e = 0; e < episodes; ++e) {
    double sum = 0.0;
    for (const auto& series : by_seed) sum += series[e];
    const double mean = sum / static_cast<double>(by_seed.size());
    double var = 0.0;
    for (const auto& series : by_seed) {
      const double d = series[e] - mean;
      var += d * d;
    }
    stats.mean[e] = mean;
    stats.stddev[e] = std::sqrt(var / static_cast<double>(by_seed.size()));
  }
  return stats;
}

/// Trailing moving average with partial windows at the start.
inline std::vector<double> moving_average(const std::vector<double>& series, int window) {
  std::vector<double> out(series.size());
  double sum = 0.0;
  for (std::size_t e = 0; e < series.size(); ++e) {
    sum += series[e];
    if (e >= static_cast<std::size_t>(window)) sum -= series[e - window];
    const std::size_t count = std::min<std::size_t>(e + 1, window);
    out[e] = sum / static_cast<double>(count);
  }
  return out;
}

/// Records grouped as [mode][metric][seed][episode], seeds in first-seen
/// order. Metrics: return, length, collisions, wasserstein.
struct GroupedRecords {
  std::vector<AgentMode> modes;  // in first-seen order
  std::map<int, std::vector<std::vector<std::vector<double>>>> by_mode;
  std::map<int, std::vector<std::uint64_t>> seeds_by_mode;
};

inline GroupedRecords group_records(const std::vector<EpisodeRecord>& records) {
  GroupedRecords grouped;
  for (const EpisodeRecord& r : records) {
    const int mode = static_cast<int>(r.mode);
    auto [it, inserted] = grouped.by_mode.try_emplace(mode);
    if (inserted) {
      it->second.resize(4);
      grouped.modes.push_back(r.mode);
    }
    auto& seeds = grouped.seeds_by_mode[mode];
    if (seeds.empty() || seeds.back() != r.seed) {
      seeds.push_back(r.seed);
      for (auto& metric : it->second) metric.emplace_back();
    }
    auto& metrics = it->second;
    metrics[0].back().push_back(r.return_undiscounted);
    metrics[1].back().push_back(static_cast<double>(r.length));
    metrics[2].back().push_back(static_cast<double>(r.collisions));
    metrics[3].back().push_back(r.wasserstein);
  }
  // Stable presentation order: baseline before ot_assisted.
  std::sort(grouped.modes.begin(), grouped.modes.end(),
            [](AgentMode a, AgentMode b) { return static_cast<int>(a) < static_cast<int>(b); });
  return grouped;
}

}  // namespace detail

/// Raw per-episode records: one row each, 6-significant-digit reals, LF ends.
inline void export_csv(const std::vector<EpisodeRecord>& records, const std::string& path) {
  if (records.empty()) throw std::invalid_argument("export_csv: no records to write");
  std::ofstream out(path, std::ios::binary);  // binary: keep LF on every platform
  if (!out) throw std::runtime_error("export_csv: cannot open " + path + " for writing");
  out << "episode,seed,mode,return,return_discounted,length,collisions,epsilon,wasserstein\n";
  for (const EpisodeRecord& r : records) {
    out << r.episode << ',' << r.seed << ',' << to_string(r.mode) << ','
        << detail::format_real(r.return_undiscounted) << ','
        << detail::format_real(r.return_discounted) << ',' << r.length << ',' << r.collisions
        << ',' << detail::format_real(r.epsilon) << ',' << detail::format_real(r.wasserstein)
        << '\n';
  }
  if (!out.flush()) throw std::runtime_error("export_csv: write to " + path + " failed");
}

/// Seed-averaged curves smoothed with a trailing moving average, one row per
/// (mode, episode): mean and cross-seed standard deviation per metric.
inline void export_smoothed_csv(const std::vector<EpisodeRecord>& records, const std::string& path,
                                int window = 10) {
  if (records.empty()) throw std::invalid_argument("export_smoothed_csv: no records to write");
  if (window < 1) throw std::invalid_argument("export_smoothed_csv: window must be >= 1");
  const detail::GroupedRecords grouped = detail::group_records(records);

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("export_smoothed_csv: cannot open " + path + " for writing");
  out << "episode,mode,return_mean,return_std,length_mean,length_std,"
         "collisions_mean,collisions_std,wasserstein_mean,wasserstein_std\n";
  for (AgentMode mode : grouped.modes) {
    const auto& metrics = grouped.by_mode.at(static_cast<int>(mode));
    std::vector<detail::SeriesStats> stats;
    stats.reserve(metrics.size());
    for (const auto& metric : metrics) {
      detail::SeriesStats s = detail::cross_seed_stats(metric);
      s.mean = detail::moving_average(s.mean, window);
      s.stddev = detail::moving_average(s.stddev, window);
      stats.push_back(std::move(s));
    }
    const std::size_t episodes = stats.front().mean.size();
    for (std::size_t e = 0; e < episodes; ++e) {
      out << e << ',' << to_string(mode);
      for (const auto& s : stats) {
        out << ',' << detail::format_real(s.mean[e]) << ',' << detail::format_real(s.stddev[e]);
      }
      out << '\n';
    }
  }
  if (!out.flush()) throw std::runtime_error("export_smoothed_csv: write to " + path + " failed");
}

/// Cross-seed aggregates per mode, mirrored into summary.json.
struct ModeSummary {
  long long total_collisions = 0;
  double mean_return_final_100 = 0.0;
  double mean_wasserstein_final_50 = 0.0;
  std::vector<std::pair<std::uint64_t, int>> convergence_by_seed;
  double mean_convergence_episode = 0.0;
};

inline std::map<std::string, ModeSummary> summarize_modes(
    const std::vector<EpisodeRecord>& records) {
  const detail::GroupedRecords grouped = detail::group_records(records);
  std::map<std::string, ModeSummary> summaries;
  for (AgentMode mode : grouped.modes) {
    const auto& metrics = grouped.by_mode.at(static_cast<int>(mode));
    const auto& seeds = grouped.seeds_by_mode.at(static_cast<int>(mode));
    ModeSummary summary;

    const auto& returns = metrics[0];
    const auto& collisions = metrics[2];
    const auto& wasserstein = metrics[3];
    double convergence_sum = 0.0;
    for (std::size_t k = 0; k < seeds.size(); ++k) {
      for (double c : collisions[k]) summary.total_collisions += static_cast<long long>(c);
      const int conv = convergence_episode(returns[k]);
      summary.convergence_by_seed.emplace_back(seeds[k], conv);
      convergence_sum += conv;
    }
    summary.mean_convergence_episode = convergence_sum / static_cast<double>(seeds.size());

    auto tail_mean = [](const std::vector<std::vector<double>>& by_seed, int tail) {
      double sum = 0.0;
      long long count = 0;
      for (const auto& series : by_seed) {
        const int n = static_cast<int>(series.size());
        for (int e = std::max(0, n - tail); e < n; ++e) {
          sum += series[e];
          ++count;
        }
      }
      return count == 0 ? 0.0 : sum / static_cast<double>(count);
    };
    summary.mean_return_final_100 = tail_mean(returns, 100);
    summary.mean_wasserstein_final_50 = tail_mean(wasserstein, 50);
    summaries[to_string(mode)] = summary;
  }
  return summaries;
}

/// summary.json: resolved config, per-mode aggregates, and any run failures.
inline void write_summary(const ComparisonResult& result, const ExperimentConfig& config,
                          const std::string& path) {
  nlohmann::json aggregates = nlohmann::json::object();
  for (const auto& [mode, s] : summarize_modes(result.records)) {
    nlohmann::json convergence = nlohmann::json::object();
    for (const auto& [seed, episode] : s.convergence_by_seed) {
      convergence[std::to_string(seed)] = episode;
    }
    aggregates[mode] = {
        {"total_collisions", s.total_collisions},
        {"mean_return_final_100", s.mean_return_final_100},
        {"mean_wasserstein_final_50", s.mean_wasserstein_final_50},
        {"convergence_episode_by_seed", std::move(convergence)},
        {"mean_convergence_episode", s.mean_convergence_episode},
    };
  }
  nlohmann::json failures = nlohmann::json::array();
  for (const RunFailure& f : result.failures) {
    failures.push_back(
        {{"seed", f.seed}, {"mode", to_string(f.mode)}, {"message", f.message}});
  }
  const nlohmann::json summary{
      {"config", config_to_json(config)},
      {"aggregates", std::move(aggregates)},
      {"failures", std::move(failures)},
  };
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_summary: cannot open " + path + " for writing");
  out << summary.dump(2) << '\n';
  if (!out.flush()) throw std::runtime_error("write_summary: write to " + path + " failed");
}

/// Convenience wrapper used by the CLI: runs, then writes episodes.csv,
/// episodes_smoothed.csv, and summary.json under `out_dir`.
inline ComparisonResult run_and_export(const ExperimentConfig& config,
                                       const std::vector<AgentMode>& modes,
                                       const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const ComparisonResult result = run_modes(config, modes);
  if (!result.records.empty()) {
    const std::filesystem::path base(out_dir);
    export_csv(result.records, (base / "episodes.csv").string());
    export_smoothed_csv(result.records, (base / "episodes_smoothed.csv").string());
    write_summary(result, config, (base / "summary.json").string());
  }
  return result;
}

/// Standalone OT check between two user-supplied distributions.
struct OtCheckResult {
  TransportPlan plan;
  double objective = 0.0;
  double wasserstein = 0.0;
  double max_violation = 0.0;
  bool feasible = false;
};

namespace detail {

inline nlohmann::json parse_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(path + ": " + std::string(e.what()));
  }
  return j;
}

inline std::vector<double> parse_mass_array(const nlohmann::json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) {
    throw std::invalid_argument(what + ": expected a non-empty JSON array of numbers");
  }
  std::vector<double> mass;
  mass.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number()) throw std::invalid_argument(what + ": non-numeric entry");
    mass.push_back(v.get<double>());
  }
  return mass;
}

}  // namespace detail

/// Loads `source` and `target` (JSON arrays of masses) and `coords` (JSON
/// array of [x, y] pairs), solves the OT problem, and reports plan quality.
inline OtCheckResult ot_check(const std::string& source_path, const std::string& target_path,
                              const std::string& coords_path, const OtSolverConfig& config,
                              double p = 1.0) {
  const std::vector<double> source =
      detail::parse_mass_array(detail::parse_json_file(source_path), source_path);
  const std::vector<double> target =
      detail::parse_mass_array(detail::parse_json_file(target_path), target_path);

  const nlohmann::json coords_json = detail::parse_json_file(coords_path);
  if (!coords_json.is_array()) {
    throw std::invalid_argument(coords_path + ": expected a JSON array of [x, y] pairs");
  }
  std::vector<GridCoord> coords;
  coords.reserve(coords_json.size());
  for (const auto& c : coords_json) coords.push_back(detail::parse_coord(c, "coords entry"));

  if (source.size() != coords.size() || target.size() != coords.size()) {
    throw std::invalid_argument("ot-check: source, target, and coords sizes disagree");
  }
  const CostMatrix cost = build_cost_matrix(coords);

  OtCheckResult result;
  result.plan = solve_ot(ProbabilityVector{source}, ProbabilityVector{target}, cost, config);
  result.objective = plan_objective(result.plan, cost);
  result.wasserstein = wasserstein_distance(result.plan, cost, p);
  result.max_violation = max_marginal_violation(result.plan);
  result.feasible = verify_plan(result.plan, kMarginalTolerance);
  return result;
}

}  // namespace otq
