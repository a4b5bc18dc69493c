#pragma once

// Ground cost between grid states: squared Euclidean distance in cell units.

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace otq {

struct GridCoord {
  int x = 0;
  int y = 0;

  bool operator==(const GridCoord&) const = default;
};

/// Symmetric n x n matrix of nonnegative transport costs with a zero diagonal.
struct CostMatrix {
  int n = 0;
  std::vector<double> entries;  // row-major, n*n

  double at(int i, int j) const { return entries[static_cast<std::size_t>(i) * n + j]; }
  double& at(int i, int j) { return entries[static_cast<std::size_t>(i) * n + j]; }

  double max_entry() const {
    return entries.empty() ? 0.0 : *std::max_element(entries.begin(), entries.end());
  }
};

/// Builds the squared-Euclidean cost matrix over a list of grid coordinates.
inline CostMatrix build_cost_matrix(const std::vector<GridCoord>& coords) {
  if (coords.empty()) {
    throw std::invalid_argument("build_cost_matrix: empty coordinate list (degenerate state space)");
  }
  const int n = static_cast<int>(coords.size());
  CostMatrix cost;
  cost.n = n;
  cost.entries.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double dx = coords[i].x - coords[j].x;
      const double dy = coords[i].y - coords[j].y;
      const double c = dx * dx + dy * dy;
      cost.at(i, j) = c;
      cost.at(j, i) = c;
    }
  }
  return cost;
}

}  // namespace otq
