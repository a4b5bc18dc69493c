#pragma once

// Tabular action values with the learning hyperparameters that drive their
// updates.

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "otq/gridworld.hpp"

namespace otq {

struct QTable {
  int n_states = 0;
  double alpha = 0.1;
  double gamma = 0.95;
  std::vector<double> values;  // n_states * kActionCount, zero-initialized

  QTable(int n_states_, double alpha_, double gamma_)
      : n_states(n_states_), alpha(alpha_), gamma(gamma_) {
    if (n_states <= 0) throw std::invalid_argument("QTable: state count must be positive");
    if (!(alpha > 0.0 && alpha <= 1.0)) {
      throw std::invalid_argument("QTable: alpha must lie in (0, 1]");
    }
    if (!(gamma > 0.0 && gamma < 1.0)) {
      throw std::invalid_argument("QTable: gamma must lie in (0, 1)");
    }
    values.assign(static_cast<std::size_t>(n_states) * kActionCount, 0.0);
  }

  double at(int state, int action) const {
    return values[static_cast<std::size_t>(state) * kActionCount + action];
  }
  double& at(int state, int action) {
    return values[static_cast<std::size_t>(state) * kActionCount + action];
  }

  double max_value(int state) const {
    const double* row = values.data() + static_cast<std::size_t>(state) * kActionCount;
    return *std::max_element(row, row + kActionCount);
  }
};

/// Greedy argmax with ties broken toward the lowest action index
/// (Up < Down < Left < Right), so policies are reproducible.
inline Action greedy_action(const QTable& q, int state) {
  const double* row = q.values.data() + static_cast<std::size_t>(state) * kActionCount;
  int best = 0;
  for (int a = 1; a < kActionCount; ++a) {
    if (row[a] > row[best]) best = a;
  }
  return static_cast<Action>(best);
}

}  // namespace otq
