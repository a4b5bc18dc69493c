#pragma once

// Estimators for P^pi, the state distribution a policy induces on the grid.
//
// Two routes: empirical visitation counts (cheap, policy-faithful during
// exploration) and the exact stationary distribution of the greedy-policy
// Markov chain with the goal redirected back to start (restart closure).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "otq/gridworld.hpp"
#include "otq/probability.hpp"
#include "otq/qtable.hpp"

namespace otq {

enum class VisitWindow { LastEpisode, AllEpisodes };

struct VisitCounter {
  std::vector<std::int64_t> counts;
  VisitWindow window = VisitWindow::LastEpisode;

  explicit VisitCounter(int n, VisitWindow w = VisitWindow::LastEpisode)
      : counts(static_cast<std::size_t>(n), 0), window(w) {}

  int size() const { return static_cast<int>(counts.size()); }
  void record(int state) { ++counts[state]; }
  void reset() { std::fill(counts.begin(), counts.end(), 0); }
};

/// Normalized visit frequencies; smoothing mass is spread over non-obstacle
/// cells only, so obstacle states keep exactly zero probability.
inline ProbabilityVector empirical_distribution(const VisitCounter& counter,
                                                const GridworldEnv& env, double smoothing) {
  if (counter.size() != env.state_count()) {
    throw std::invalid_argument("empirical_distribution: counter size does not match env");
  }
  if (smoothing < 0.0) {
    throw std::invalid_argument("empirical_distribution: smoothing must be >= 0");
  }
  std::vector<double> raw(counter.counts.size(), 0.0);
  for (int s = 0; s < counter.size(); ++s) {
    const bool reachable = !env.is_obstacle(s);
    raw[s] = static_cast<double>(counter.counts[s]) + (reachable ? smoothing : 0.0);
  }
  return ProbabilityVector::normalized(std::move(raw));  // throws when all mass is zero
}

/// Row-stochastic transition matrix of a deterministic chain over the state
/// index space. Obstacle rows self-loop; `free_mask` marks non-obstacle cells.
struct PolicyMatrix {
  int n = 0;
  std::vector<double> entries;  // row-major, n*n
  std::vector<char> free_mask;  // 1 = non-obstacle

  double at(int i, int j) const { return entries[static_cast<std::size_t>(i) * n + j]; }
  double& at(int i, int j) { return entries[static_cast<std::size_t>(i) * n + j]; }

  void validate(double tol = 1e-9) const {
    if (n <= 0 || entries.size() != static_cast<std::size_t>(n) * n ||
        free_mask.size() != static_cast<std::size_t>(n)) {
      throw std::invalid_argument("PolicyMatrix: inconsistent dimensions");
    }
    for (int i = 0; i < n; ++i) {
      double row_sum = 0.0;
      for (int j = 0; j < n; ++j) {
        if (at(i, j) < 0.0) throw std::invalid_argument("PolicyMatrix: negative entry");
        row_sum += at(i, j);
      }
      if (std::abs(row_sum - 1.0) > tol) {
        throw std::invalid_argument("PolicyMatrix: row " + std::to_string(i) +
                                    " sums to " + std::to_string(row_sum));
      }
    }
  }
};

/// Markov chain of the greedy policy: each free state follows its argmax
/// action deterministically, the goal restarts at start, obstacles self-loop.
inline PolicyMatrix induced_chain(const GridworldEnv& env, const QTable& q) {
  if (q.n_states != env.state_count()) {
    throw std::invalid_argument("induced_chain: QTable size does not match env");
  }
  const int n = env.state_count();
  PolicyMatrix chain;
  chain.n = n;
  chain.entries.assign(static_cast<std::size_t>(n) * n, 0.0);
  chain.free_mask.assign(static_cast<std::size_t>(n), 0);
  for (int s = 0; s < n; ++s) {
    if (env.is_obstacle(s)) {
      chain.at(s, s) = 1.0;
      continue;
    }
    chain.free_mask[s] = 1;
    if (s == env.goal_index()) {
      chain.at(s, env.start_index()) = 1.0;  // restart closure
      continue;
    }
    chain.at(s, step(env, s, greedy_action(q, s)).next_state) = 1.0;
  }
  return chain;
}

/// Thrown when power iteration fails to reach the residual tolerance.
struct PowerIterationError : std::runtime_error {
  double residual;

  PowerIterationError(double res, int iters)
      : std::runtime_error("power iteration did not converge within " + std::to_string(iters) +
                           " iterations; last residual " + std::to_string(res)),
        residual(res) {}
};

enum class StationaryMethod { Empirical, Power };

/// How P^pi is estimated after each episode.
struct StationaryConfig {
  StationaryMethod method = StationaryMethod::Empirical;
  VisitWindow window = VisitWindow::LastEpisode;
  double smoothing = 1e-6;  // empirical estimator, spread over free cells
  double damping = 0.05;    // power iteration, pull toward uniform-over-free
  double tol = 1e-8;
  int max_iter = 10000;

  void validate() const {
    if (smoothing < 0.0) throw std::invalid_argument("StationaryConfig: smoothing must be >= 0");
    if (!(damping >= 0.0 && damping < 1.0)) {
      throw std::invalid_argument("StationaryConfig: damping must lie in [0, 1)");
    }
    if (!(tol > 0.0)) throw std::invalid_argument("StationaryConfig: tol must be > 0");
    if (max_iter < 1) throw std::invalid_argument("StationaryConfig: max_iter must be >= 1");
  }
};

/// Stationary distribution by damped power iteration from the uniform
/// distribution over free cells: v <- (1-damping)*v^T M + damping*u.
///
/// The returned v satisfies ||step(v) - v||_1 <= tol for that damped update;
/// with damping = 0 this is the plain fixed-point residual ||v^T M - v^T||_1.
/// Deterministic greedy chains are periodic, hence the default damping.
inline ProbabilityVector stationary_distribution(const PolicyMatrix& chain, double tol = 1e-8,
                                                 int max_iter = 10000, double damping = 0.05) {
  chain.validate();
  if (!(tol > 0.0)) throw std::invalid_argument("stationary_distribution: tol must be > 0");
  if (max_iter < 1) throw std::invalid_argument("stationary_distribution: max_iter must be >= 1");
  if (!(damping >= 0.0 && damping < 1.0)) {
    throw std::invalid_argument("stationary_distribution: damping must lie in [0, 1)");
  }
  const int n = chain.n;
  int free_cells = 0;
  for (char f : chain.free_mask) free_cells += f;
  if (free_cells == 0) {
    throw std::invalid_argument("stationary_distribution: chain has no free states");
  }

  std::vector<double> uniform(n, 0.0);
  for (int s = 0; s < n; ++s) {
    if (chain.free_mask[s]) uniform[s] = 1.0 / free_cells;
  }

  std::vector<double> v = uniform, w(n);
  double residual = 0.0;
  for (int iter = 0; iter < max_iter; ++iter) {
    std::fill(w.begin(), w.end(), 0.0);
    for (int i = 0; i < n; ++i) {
      const double vi = v[i];
      if (vi == 0.0) continue;
      const double* row = chain.entries.data() + static_cast<std::size_t>(i) * n;
      for (int j = 0; j < n; ++j) w[j] += vi * row[j];
    }
    residual = 0.0;
    for (int j = 0; j < n; ++j) {
      w[j] = (1.0 - damping) * w[j] + damping * uniform[j];
      residual += std::abs(w[j] - v[j]);
    }
    if (residual <= tol) {
      return ProbabilityVector::normalized(std::move(v));  // v's own residual is `residual`
    }
    v.swap(w);
  }
  throw PowerIterationError(residual, max_iter);
}

/// Dispatches to the configured estimator: visit frequencies or the exact
/// stationary distribution of the current greedy chain.
inline ProbabilityVector estimate_policy_distribution(const GridworldEnv& env, const QTable& q,
                                                      const VisitCounter& visits,
                                                      const StationaryConfig& config) {
  config.validate();
  if (config.method == StationaryMethod::Empirical) {
    return empirical_distribution(visits, env, config.smoothing);
  }
  return stationary_distribution(induced_chain(env, q), config.tol, config.max_iter,
                                 config.damping);
}

}  // namespace otq
