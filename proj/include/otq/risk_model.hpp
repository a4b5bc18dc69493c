#pragma once

// Expert risk (safety-preference) distribution over states.
//
// Free cells start at base safety and lose adjacency_penalty per hazardous
// von-Neumann neighbor (grid border or obstacle), clamped below at a small
// floor. The goal keeps full safety regardless of surroundings; obstacle
// cells get zero. Raw values are then normalized into a distribution.

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "otq/gridworld.hpp"
#include "otq/probability.hpp"

namespace otq {

struct RiskSpec {
  double base_safety = 1.0;
  double adjacency_penalty = 0.3;
  double goal_safety = 1.0;
  double floor = 0.05;

  void validate() const {
    if (!(base_safety > 0.0)) throw std::invalid_argument("RiskSpec: base_safety must be > 0");
    if (!(adjacency_penalty >= 0.0)) {
      throw std::invalid_argument("RiskSpec: adjacency_penalty must be >= 0");
    }
    if (!(floor > 0.0)) throw std::invalid_argument("RiskSpec: floor must be > 0");
  }
};

/// Unnormalized safety value of one state under the adjacency rule.
inline double raw_safety(const GridworldEnv& env, const RiskSpec& spec, int state) {
  if (state < 0 || state >= env.state_count()) {
    throw std::invalid_argument("raw_safety: state index " + std::to_string(state) +
                                " out of range");
  }
  if (state == env.goal_index()) return spec.goal_safety;
  if (env.is_obstacle(state)) return 0.0;
  const GridCoord here = env.coord_of(state);
  int hazards = 0;
  for (const GridCoord& delta : kActionDelta) {
    const GridCoord neighbor{here.x + delta.x, here.y + delta.y};
    if (!env.in_bounds(neighbor) || env.is_obstacle(env.index_of(neighbor))) ++hazards;
  }
  return std::max(spec.base_safety - spec.adjacency_penalty * hazards, spec.floor);
}

/// P^s: raw safety values over all states, normalized to unit mass.
inline ProbabilityVector build_risk_distribution(const GridworldEnv& env, const RiskSpec& spec) {
  spec.validate();
  std::vector<double> raw(static_cast<std::size_t>(env.state_count()));
  for (int s = 0; s < env.state_count(); ++s) raw[s] = raw_safety(env, spec, s);
  return ProbabilityVector::normalized(std::move(raw));
}

}  // namespace otq
