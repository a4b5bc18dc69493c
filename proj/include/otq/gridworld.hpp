#pragma once

// Deterministic Gridworld MDP: bounded grid, static obstacles, single goal.
//
// States are indexed row-major (index = y*width + x) over every cell, obstacle
// cells included, so state indices line up with cost-matrix and plan indices.

#include <array>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "otq/cost_matrix.hpp"

namespace otq {

enum class Action { Up = 0, Down = 1, Left = 2, Right = 3 };

inline constexpr int kActionCount = 4;

/// Displacement per action; y grows downward (row 0 is the top row).
inline constexpr std::array<GridCoord, kActionCount> kActionDelta{
    GridCoord{0, -1}, GridCoord{0, 1}, GridCoord{-1, 0}, GridCoord{1, 0}};

struct StepOutcome {
  int next_state = 0;
  double reward = 0.0;
  bool terminal = false;
  bool collided = false;  // attempted move targeted an obstacle cell
};

struct GridworldEnv {
  int width = 0;
  int height = 0;
  std::vector<GridCoord> obstacles;
  GridCoord start;
  GridCoord goal;
  double reward_step = -1.0;
  double reward_obstacle = -10.0;
  double reward_goal = 10.0;
  int max_steps = 500;

  std::vector<char> obstacle_mask;  // width*height, filled by validate()

  int state_count() const { return width * height; }
  bool in_bounds(GridCoord c) const { return c.x >= 0 && c.x < width && c.y >= 0 && c.y < height; }
  int index_of(GridCoord c) const { return c.y * width + c.x; }
  GridCoord coord_of(int state) const { return {state % width, state / width}; }
  bool is_obstacle(int state) const { return obstacle_mask[state] != 0; }
  int start_index() const { return index_of(start); }
  int goal_index() const { return index_of(goal); }

  /// Enforces the type invariants and builds the obstacle mask.
  void validate() {
    if (width <= 0 || height <= 0) {
      throw std::invalid_argument("GridworldEnv: width and height must be positive");
    }
    if (max_steps <= 0) {
      throw std::invalid_argument("GridworldEnv: max_steps must be positive");
    }
    obstacle_mask.assign(static_cast<std::size_t>(state_count()), 0);
    for (const GridCoord& c : obstacles) {
      if (!in_bounds(c)) {
        throw std::invalid_argument("GridworldEnv: obstacle (" + std::to_string(c.x) + "," +
                                    std::to_string(c.y) + ") is outside the grid");
      }
      char& cell = obstacle_mask[index_of(c)];
      if (cell != 0) {
        throw std::invalid_argument("GridworldEnv: duplicate obstacle (" + std::to_string(c.x) +
                                    "," + std::to_string(c.y) + ")");
      }
      cell = 1;
    }
    if (!in_bounds(start)) throw std::invalid_argument("GridworldEnv: start is outside the grid");
    if (!in_bounds(goal)) throw std::invalid_argument("GridworldEnv: goal is outside the grid");
    if (is_obstacle(start_index())) {
      throw std::invalid_argument("GridworldEnv: start lies on an obstacle");
    }
    if (is_obstacle(goal_index())) {
      throw std::invalid_argument("GridworldEnv: goal lies on an obstacle");
    }
    if (start == goal) throw std::invalid_argument("GridworldEnv: start and goal coincide");
  }
};

/// One deterministic transition. `state` must be a live (non-obstacle,
/// non-goal) index; obstacle and off-grid moves bounce the agent back.
inline StepOutcome step(const GridworldEnv& env, int state, Action action) {
  if (state < 0 || state >= env.state_count()) {
    throw std::invalid_argument("step: state index " + std::to_string(state) + " out of range");
  }
  if (env.is_obstacle(state)) {
    throw std::invalid_argument("step: state " + std::to_string(state) + " is an obstacle cell");
  }
  if (state == env.goal_index()) {
    throw std::invalid_argument("step: episode already terminal at the goal");
  }
  const GridCoord here = env.coord_of(state);
  const GridCoord delta = kActionDelta[static_cast<int>(action)];
  const GridCoord target{here.x + delta.x, here.y + delta.y};
  if (!env.in_bounds(target)) {
    return {state, env.reward_step, false, false};
  }
  const int target_index = env.index_of(target);
  if (target_index == env.goal_index()) {
    return {target_index, env.reward_goal, true, false};
  }
  if (env.is_obstacle(target_index)) {
    return {state, env.reward_obstacle, false, true};
  }
  return {target_index, env.reward_step, false, false};
}

/// All cell coordinates in state-index order; feeds build_cost_matrix.
inline std::vector<GridCoord> state_coords(const GridworldEnv& env) {
  std::vector<GridCoord> coords;
  coords.reserve(static_cast<std::size_t>(env.state_count()));
  for (int y = 0; y < env.height; ++y) {
    for (int x = 0; x < env.width; ++x) coords.push_back({x, y});
  }
  return coords;
}

namespace detail {

inline GridCoord parse_coord(const nlohmann::json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer()) {
    throw std::invalid_argument(std::string("load_env: ") + what + " must be an [x, y] integer pair");
  }
  return {j[0].get<int>(), j[1].get<int>()};
}

}  // namespace detail

/// Parses and validates an environment description:
///   {"width": W, "height": H, "obstacles": [[x,y], ...],
///    "start": [x,y], "goal": [x,y],
///    "rewards": {"step": r, "obstacle": r, "goal": r},   (optional)
///    "max_steps": N}                                      (optional)
inline GridworldEnv load_env(const nlohmann::json& description) {
  if (!description.is_object()) {
    throw std::invalid_argument("load_env: environment description must be a JSON object");
  }
  for (const char* key : {"width", "height", "obstacles", "start", "goal"}) {
    if (!description.contains(key)) {
      throw std::invalid_argument(std::string("load_env: missing required key \"") + key + "\"");
    }
  }
  GridworldEnv env;
  if (!description["width"].is_number_integer() || !description["height"].is_number_integer()) {
    throw std::invalid_argument("load_env: width and height must be integers");
  }
  env.width = description["width"].get<int>();
  env.height = description["height"].get<int>();
  if (!description["obstacles"].is_array()) {
    throw std::invalid_argument("load_env: obstacles must be an array of [x, y] pairs");
  }
  for (const auto& entry : description["obstacles"]) {
    env.obstacles.push_back(detail::parse_coord(entry, "obstacle"));
  }
  env.start = detail::parse_coord(description["start"], "start");
  env.goal = detail::parse_coord(description["goal"], "goal");
  if (description.contains("rewards")) {
    const auto& r = description["rewards"];
    if (!r.is_object()) throw std::invalid_argument("load_env: rewards must be an object");
    env.reward_step = r.value("step", env.reward_step);
    env.reward_obstacle = r.value("obstacle", env.reward_obstacle);
    env.reward_goal = r.value("goal", env.reward_goal);
  }
  if (description.contains("max_steps")) {
    if (!description["max_steps"].is_number_integer()) {
      throw std::invalid_argument("load_env: max_steps must be an integer");
    }
    env.max_steps = description["max_steps"].get<int>();
  }
  env.validate();
  return env;
}

inline GridworldEnv load_env_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("load_env_file: cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument("load_env_file: " + path + ": " + e.what());
  }
  return load_env(j);
}

}  // namespace otq
