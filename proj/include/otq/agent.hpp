#pragma once

// Tabular Q-learning with an optional optimal-transport shaping term.
//
// Baseline mode is the plain Bellman-optimality update. OtAssisted mode adds
// beta * bonus(s, s') inside the TD bracket, where bonus = flow * cost from
// the transport plan between the policy's state distribution and the risk
// distribution, recomputed after every episode. Both modes run the same
// update code path; Baseline simply keeps an all-zero shaping table, so
// beta = 0 reproduces Baseline bit for bit on a shared seed.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "otq/gridworld.hpp"
#include "otq/ot_solver.hpp"
#include "otq/policy_analysis.hpp"
#include "otq/qtable.hpp"
#include "otq/rng.hpp"

namespace otq {

struct EpsilonSchedule {
  double initial = 1.0;
  double decay = 0.995;
  double minimum = 0.01;

  void validate() const {
    if (!(initial >= 0.0 && initial <= 1.0)) {
      throw std::invalid_argument("EpsilonSchedule: initial must lie in [0, 1]");
    }
    if (!(decay > 0.0 && decay <= 1.0)) {
      throw std::invalid_argument("EpsilonSchedule: decay must lie in (0, 1]");
    }
    if (!(minimum >= 0.0 && minimum <= initial)) {
      throw std::invalid_argument("EpsilonSchedule: minimum must lie in [0, initial]");
    }
  }

  /// epsilon for episode t (0-based): max(minimum, initial * decay^t).
  double at(int episode) const {
    return std::max(minimum, initial * std::pow(decay, static_cast<double>(episode)));
  }
};

/// Per-transition shaping bonuses for the current episode. Each entry is
/// consumed (zeroed) on first application so no ordered state pair is
/// rewarded twice between rebuilds.
struct ShapingTable {
  int n = 0;
  std::vector<double> bonus;  // row-major, n*n

  static ShapingTable zeros(int n) {
    ShapingTable t;
    t.n = n;
    t.bonus.assign(static_cast<std::size_t>(n) * n, 0.0);
    return t;
  }

  /// bonus[s][s'] = flow[s][s'] * cost[s][s'] (elementwise).
  void rebuild(const TransportPlan& plan, const CostMatrix& cost) {
    if (plan.n != n || cost.n != n) {
      throw std::invalid_argument("ShapingTable: plan/cost dimensions do not match");
    }
    for (std::size_t k = 0; k < bonus.size(); ++k) bonus[k] = plan.flow[k] * cost.entries[k];
  }

  void clear() { std::fill(bonus.begin(), bonus.end(), 0.0); }

  /// Reads and zeroes the entry for (s, s_next).
  double take(int s, int s_next) {
    double& b = bonus[static_cast<std::size_t>(s) * n + s_next];
    const double value = b;
    b = 0.0;
    return value;
  }
};

enum class AgentMode { Baseline, OtAssisted };

inline const char* to_string(AgentMode mode) {
  return mode == AgentMode::Baseline ? "baseline" : "ot_assisted";
}

struct AgentConfig {
  double alpha = 0.1;
  double gamma = 0.95;
  double beta = 1.0;
  EpsilonSchedule epsilon;
  AgentMode mode = AgentMode::Baseline;
  std::uint64_t seed = 0;

  void validate() const {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("AgentConfig: alpha must lie in (0, 1]");
    if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("AgentConfig: gamma must lie in (0, 1)");
    if (!(beta >= 0.0)) throw std::invalid_argument("AgentConfig: beta must be >= 0");
    epsilon.validate();
  }
};

/// Per-episode metrics in output order.
struct EpisodeRecord {
  int episode = 0;
  std::uint64_t seed = 0;
  AgentMode mode = AgentMode::Baseline;
  double return_undiscounted = 0.0;
  double return_discounted = 0.0;
  int length = 0;
  int collisions = 0;
  double epsilon = 0.0;
  double wasserstein = 0.0;
};

/// Epsilon-greedy: explore uniformly with probability epsilon, otherwise act
/// greedily. Consumes one uniform01 draw, plus one raw draw when exploring.
inline Action select_action(const QTable& q, int state, double epsilon, DeterministicRng& rng) {
  if (rng.uniform01() < epsilon) {
    return static_cast<Action>(rng.next() >> 62);  // top two bits: exactly uniform over 4
  }
  return greedy_action(q, state);
}

/// Hook for instrumenting individual updates (testing/diagnostics).
struct UpdateObserver {
  virtual ~UpdateObserver() = default;
  virtual void on_update(int episode, int s, Action a, int s_next, double bonus_applied) = 0;
};

/// One TD update: Q(s,a) += alpha * (r + gamma*maxQ(s') - Q(s,a) +
/// beta*bonus(s,s')). The bonus entry is consumed; its value is returned for
/// instrumentation.
inline double q_update(QTable& q, int s, Action a, double reward, int s_next, bool terminal,
                       double beta, ShapingTable& shaping) {
  const double bonus = shaping.take(s, s_next);
  const double target_max = terminal ? 0.0 : q.max_value(s_next);
  double& value = q.at(s, static_cast<int>(a));
  value += q.alpha * (reward + q.gamma * target_max - value + beta * bonus);
  return bonus;
}

/// Runs one episode from start, updating Q in place and tallying visits
/// (start counted once, then every next_state). Returns the episode metrics;
/// `epsilon` is held fixed for the whole episode.
inline EpisodeRecord run_episode(const GridworldEnv& env, QTable& q, const AgentConfig& config,
                                 ShapingTable& shaping, DeterministicRng& rng, int episode_index,
                                 VisitCounter& visits, UpdateObserver* observer = nullptr) {
  EpisodeRecord record;
  record.episode = episode_index;
  record.seed = config.seed;
  record.mode = config.mode;
  record.epsilon = config.epsilon.at(episode_index);

  int state = env.start_index();
  visits.record(state);
  double discount = 1.0;
  for (int t = 0; t < env.max_steps; ++t) {
    const Action action = select_action(q, state, record.epsilon, rng);
    const StepOutcome outcome = step(env, state, action);
    const double bonus = q_update(q, state, action, outcome.reward, outcome.next_state,
                                  outcome.terminal, config.beta, shaping);
    if (observer != nullptr) {
      observer->on_update(episode_index, state, action, outcome.next_state, bonus);
    }

    record.return_undiscounted += outcome.reward;
    record.return_discounted += discount * outcome.reward;
    discount *= q.gamma;
    record.length += 1;
    record.collisions += outcome.collided ? 1 : 0;
    visits.record(outcome.next_state);
    state = outcome.next_state;
    if (outcome.terminal) break;
  }
  return record;
}

/// Extra knobs for train() that do not affect learning dynamics.
struct TrainOptions {
  /// Log W_p(P^pi, P^s) on every record. OtAssisted solves OT per episode
  /// anyway; for Baseline this adds diagnostic-only solves and leaves the
  /// action stream and Q trajectory untouched.
  bool log_wasserstein = true;
  double wasserstein_p = 1.0;
  UpdateObserver* observer = nullptr;
};

struct TrainResult {
  std::vector<EpisodeRecord> records;
  QTable qtable;
};

/// Full training loop: Q starts at zero, the first episode runs unshaped,
/// and after each episode P^pi is re-estimated and the OT plan against the
/// risk distribution is resolved (OtAssisted rebuilds the shaping table from
/// it; Baseline performs OT work only when Wasserstein logging asks for it).
inline TrainResult train(const GridworldEnv& env, const ProbabilityVector& risk,
                         const CostMatrix& cost, const AgentConfig& config,
                         const OtSolverConfig& ot_config, int episodes,
                         const StationaryConfig& stationary = {}, const TrainOptions& options = {}) {
  config.validate();
  ot_config.validate();
  stationary.validate();
  if (episodes < 1) throw std::invalid_argument("train: episodes must be >= 1");
  if (risk.size() != env.state_count() || cost.n != env.state_count()) {
    throw std::invalid_argument("train: risk/cost dimensions do not match env");
  }
  if (options.wasserstein_p < 1.0) {
    throw std::invalid_argument("train: wasserstein_p must be >= 1");
  }

  TrainResult result{{}, QTable(env.state_count(), config.alpha, config.gamma)};
  result.records.reserve(static_cast<std::size_t>(episodes));
  ShapingTable shaping = ShapingTable::zeros(env.state_count());
  DeterministicRng rng(config.seed);
  const VisitWindow window =
      stationary.method == StationaryMethod::Empirical ? stationary.window : VisitWindow::LastEpisode;
  VisitCounter visits(env.state_count(), window);

  for (int e = 0; e < episodes; ++e) {
    if (visits.window == VisitWindow::LastEpisode) visits.reset();
    EpisodeRecord record = run_episode(env, result.qtable, config, shaping, rng, e, visits,
                                       options.observer);

    const bool need_plan = config.mode == AgentMode::OtAssisted || options.log_wasserstein;
    if (need_plan) {
      const ProbabilityVector policy_dist = estimate_policy_distribution(
          env, result.qtable, visits, stationary);
      const TransportPlan plan = solve_ot(policy_dist, risk, cost, ot_config);
      if (options.log_wasserstein) {
        record.wasserstein = wasserstein_distance(plan, cost, options.wasserstein_p);
      }
      if (config.mode == AgentMode::OtAssisted) {
        shaping.rebuild(plan, cost);
      }
    }
    result.records.push_back(record);
  }
  return result;
}

}  // namespace otq
