#pragma once

// Transport plans: nonnegative couplings with prescribed marginals.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "otq/cost_matrix.hpp"
#include "otq/probability.hpp"

namespace otq {

/// Marginal tolerance guaranteed by the exact solver.
inline constexpr double kMarginalTolerance = 1e-7;

/// An n x n coupling: flow[i][j] is the mass moved from state i to state j.
/// Row sums match `source`, column sums match `target`.
struct TransportPlan {
  int n = 0;
  std::vector<double> flow;  // row-major, n*n
  ProbabilityVector source;
  ProbabilityVector target;

  double at(int i, int j) const { return flow[static_cast<std::size_t>(i) * n + j]; }
  double& at(int i, int j) { return flow[static_cast<std::size_t>(i) * n + j]; }

  std::vector<double> row_sums() const {
    std::vector<double> r(n, 0.0);
    for (int i = 0; i < n; ++i) {
      const double* row = flow.data() + static_cast<std::size_t>(i) * n;
      double acc = 0.0;
      for (int j = 0; j < n; ++j) acc += row[j];
      r[i] = acc;
    }
    return r;
  }

  std::vector<double> col_sums() const {
    std::vector<double> c(n, 0.0);
    for (int i = 0; i < n; ++i) {
      const double* row = flow.data() + static_cast<std::size_t>(i) * n;
      for (int j = 0; j < n; ++j) c[j] += row[j];
    }
    return c;
  }
};

/// Total cost of a plan: sum_ij flow[i][j] * cost[i][j].
inline double plan_objective(const TransportPlan& plan, const CostMatrix& cost) {
  if (plan.n != cost.n) {
    throw std::invalid_argument("plan_objective: plan and cost dimensions disagree");
  }
  double acc = 0.0;
  for (std::size_t k = 0; k < plan.flow.size(); ++k) acc += plan.flow[k] * cost.entries[k];
  return acc;
}

/// p-th root of the plan's total cost.
inline double wasserstein_distance(const TransportPlan& plan, const CostMatrix& cost, double p) {
  if (p < 1.0) {
    throw std::invalid_argument("wasserstein_distance: order p must be >= 1");
  }
  const double objective = plan_objective(plan, cost);
  // Objective is nonnegative for nonnegative flow and cost; guard rounding dust.
  return std::pow(std::max(objective, 0.0), 1.0 / p);
}

/// True iff the plan is nonnegative and both marginal constraints hold within tol.
inline bool verify_plan(const TransportPlan& plan, double tol) {
  if (plan.n <= 0 || plan.source.size() != plan.n || plan.target.size() != plan.n) return false;
  for (double f : plan.flow) {
    if (f < -tol) return false;
  }
  const std::vector<double> rows = plan.row_sums();
  const std::vector<double> cols = plan.col_sums();
  for (int i = 0; i < plan.n; ++i) {
    if (std::abs(rows[i] - plan.source.mass[i]) > tol) return false;
    if (std::abs(cols[i] - plan.target.mass[i]) > tol) return false;
  }
  return true;
}

/// Largest absolute marginal deviation, useful in diagnostics.
inline double max_marginal_violation(const TransportPlan& plan) {
  const std::vector<double> rows = plan.row_sums();
  const std::vector<double> cols = plan.col_sums();
  double worst = 0.0;
  for (int i = 0; i < plan.n; ++i) {
    worst = std::max(worst, std::abs(rows[i] - plan.source.mass[i]));
    worst = std::max(worst, std::abs(cols[i] - plan.target.mass[i]));
  }
  return worst;
}

}  // namespace otq
