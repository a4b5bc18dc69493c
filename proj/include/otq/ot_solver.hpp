#pragma once

// Discrete optimal transport solvers.
//
// Exact: primal-dual shortest augmenting paths on the bipartite
// transportation network. Node potentials keep every Dijkstra on nonnegative
// reduced costs, and each Dijkstra is followed by a blocking sweep that
// drains the tight residual subgraph, so degenerate inputs (many near-zero
// masses, heavily tied costs) stay cheap. Equivalent to network simplex in
// exactness.
//
// Sinkhorn: entropic regularization iterated in the log domain, followed by a
// rounding step that restores the true marginals.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "otq/cost_matrix.hpp"
#include "otq/probability.hpp"
#include "otq/transport_plan.hpp"

namespace otq {

enum class OtMethod { Exact, Sinkhorn };

struct OtSolverConfig {
  OtMethod method = OtMethod::Exact;
  double sinkhorn_reg = 1e-2;
  double sinkhorn_tol = 1e-6;
  int sinkhorn_max_iter = 10000;

  void validate() const {
    if (!(sinkhorn_reg > 0.0)) throw std::invalid_argument("OtSolverConfig: sinkhorn_reg must be > 0");
    if (!(sinkhorn_tol > 0.0)) throw std::invalid_argument("OtSolverConfig: sinkhorn_tol must be > 0");
    if (sinkhorn_max_iter < 1) throw std::invalid_argument("OtSolverConfig: sinkhorn_max_iter must be >= 1");
  }
};

/// Thrown when Sinkhorn fails to reach the marginal tolerance in time.
struct SinkhornDivergedError : std::runtime_error {
  double marginal_violation;

  SinkhornDivergedError(double violation, int iters)
      : std::runtime_error("Sinkhorn did not converge within " + std::to_string(iters) +
                           " iterations; final marginal violation " + std::to_string(violation)),
        marginal_violation(violation) {}
};

namespace detail {

/// Exact transportation solve: primal-dual with blocking augmentation.
///
/// Node layout: sources 0..n-1, sinks 0..n-1 (separate arrays). Forward arcs
/// (i -> j) are uncapacitated; backward arcs exist where flow is positive.
/// Each phase runs one Dijkstra on the reduced costs, raises the potentials,
/// and then pushes as many augmenting paths as the tight (zero-reduced-cost)
/// residual subgraph admits via a pointer-based depth-first sweep. Flow only
/// ever moves along tight arcs, so every intermediate solution stays optimal
/// for the mass shipped so far; highly degenerate marginals (many near-zero
/// masses, tied grid costs) cost extra sweep work instead of extra Dijkstras.
inline std::vector<double> solve_exact_transport(const std::vector<double>& supply,
                                                 const std::vector<double>& demand,
                                                 const CostMatrix& cost) {
  const int n = static_cast<int>(supply.size());
  const double kInf = std::numeric_limits<double>::infinity();
  const double kMassEps = 1e-15;

  std::vector<double> flow(static_cast<std::size_t>(n) * n, 0.0);
  std::vector<double> rem_supply = supply;
  std::vector<double> rem_demand = demand;
  std::vector<double> pot_src(n, 0.0), pot_snk(n, 0.0);

  // Positive-flow arcs grouped by sink, with lazy deletion of zeroed entries.
  std::vector<std::vector<int>> col_support(n);

  std::vector<double> dist_src(n), dist_snk(n);
  std::vector<int> parent_src(n), parent_snk(n);  // node on the other side we came from
  std::vector<char> done_src(n), done_snk(n);

  // Per-phase sweep state.
  std::vector<int> fwd_ptr(n), back_ptr(n);
  std::vector<char> live_src(n), live_snk(n), on_path_src(n), on_path_snk(n);
  std::vector<int> path_src, path_snk;
  path_src.reserve(n);
  path_snk.reserve(n);

  double total_deficit = 0.0;
  for (double d : demand) total_deficit += d;
  double total_supply = 0.0;
  for (double s : supply) total_supply += s;

  // (distance, node); node < n encodes a source, node >= n a sink.
  using HeapEntry = std::pair<double, int>;
  std::priority_queue<HeapEntry, std::vector<HeapEntry>, std::greater<HeapEntry>> heap;

  const int max_phases = 6 * n + 64;
  int phases = 0;

  const auto apply_path = [&](double bottleneck, int origin, int target) {
    for (std::size_t t = 0; t < path_snk.size(); ++t) {
      double& f = flow[static_cast<std::size_t>(path_src[t]) * n + path_snk[t]];
      if (f == 0.0) col_support[path_snk[t]].push_back(path_src[t]);
      f += bottleneck;
      if (t + 1 < path_src.size()) {
        double& back = flow[static_cast<std::size_t>(path_src[t + 1]) * n + path_snk[t]];
        back -= bottleneck;
        if (back < kMassEps) back = 0.0;
      }
    }
    rem_demand[target] -= bottleneck;
    if (rem_demand[target] < kMassEps) rem_demand[target] = 0.0;
    rem_supply[origin] -= bottleneck;
    if (rem_supply[origin] < kMassEps) rem_supply[origin] = 0.0;
    total_deficit -= bottleneck;
    total_supply -= bottleneck;
  };

  while (total_deficit > kMassEps && total_supply > kMassEps) {
    if (++phases > max_phases) {
      throw std::runtime_error("exact OT solver: phase limit exceeded");
    }

    // ---- Dijkstra on reduced costs, settling every node up to the nearest
    // deficit's distance so tied alternatives all land in the tight graph.
    std::fill(dist_src.begin(), dist_src.end(), kInf);
    std::fill(dist_snk.begin(), dist_snk.end(), kInf);
    std::fill(done_src.begin(), done_src.end(), 0);
    std::fill(done_snk.begin(), done_snk.end(), 0);
    heap = {};

    for (int i = 0; i < n; ++i) {
      if (rem_supply[i] > 0.0) {
        dist_src[i] = 0.0;
        parent_src[i] = -1;
        heap.emplace(0.0, i);
      }
    }

    int target = -1;
    double target_dist = kInf;
    while (!heap.empty()) {
      const auto [d, node] = heap.top();
      if (d > target_dist) break;  // everything within the deficit distance is settled
      heap.pop();
      if (node < n) {
        const int i = node;
        if (done_src[i] || d > dist_src[i]) continue;
        done_src[i] = 1;
        const double* cost_row = cost.entries.data() + static_cast<std::size_t>(i) * n;
        const double base = d + pot_src[i];
        for (int j = 0; j < n; ++j) {
          if (done_snk[j]) continue;
          const double rc = cost_row[j] + base - pot_snk[j];
          const double nd = rc < d ? d : rc;  // reduced cost clamped at 0
          if (nd < dist_snk[j]) {
            dist_snk[j] = nd;
            parent_snk[j] = i;
            heap.emplace(nd, n + j);
          }
        }
      } else {
        const int j = node - n;
        if (done_snk[j] || d > dist_snk[j]) continue;
        done_snk[j] = 1;
        if (rem_demand[j] > 0.0 && target < 0) {
          target = j;
          target_dist = d;
        }
        // Residual (backward) arcs have zero reduced cost along the support.
        auto& support = col_support[j];
        std::size_t keep = 0;
        for (std::size_t k = 0; k < support.size(); ++k) {
          const int i = support[k];
          if (flow[static_cast<std::size_t>(i) * n + j] <= 0.0) continue;
          support[keep++] = i;
          if (!done_src[i]) {
            const double rc = -(cost.at(i, j) + pot_src[i] - pot_snk[j]);
            const double nd = d + (rc > 0.0 ? rc : 0.0);
            if (nd < dist_src[i]) {
              dist_src[i] = nd;
              parent_src[i] = j;
              heap.emplace(nd, i);
            }
          }
        }
        support.resize(keep);
      }
    }

    if (target < 0) {
      // Complete bipartite graph: unreachable deficit means supply is exhausted.
      break;
    }

    double scale = 1.0 + cost.max_entry();
    for (int v = 0; v < n; ++v) {
      pot_src[v] += std::min(dist_src[v], target_dist);
      pot_snk[v] += std::min(dist_snk[v], target_dist);
      scale = std::max({scale, std::abs(pot_src[v]), std::abs(pot_snk[v])});
    }
    // Arcs within one rounding unit of tight; admitting them costs at most
    // tight_eps of objective per unit mass.
    const double tight_eps = std::ldexp(scale, -44);

    // ---- Blocking sweep: exhaust the tight residual graph built from the
    // settled nodes. Pointers never rewind, so each arc is scanned O(1) times.
    for (int v = 0; v < n; ++v) {
      live_src[v] = done_src[v];
      live_snk[v] = done_snk[v];
      fwd_ptr[v] = 0;
      back_ptr[v] = 0;
      on_path_src[v] = 0;
      on_path_snk[v] = 0;
    }
    bool progressed = false;

    for (int origin = 0; origin < n; ++origin) {
      while (rem_supply[origin] > 0.0 && live_src[origin]) {
        path_src.assign(1, origin);
        path_snk.clear();
        on_path_src[origin] = 1;
        bool augmented = false;

        while (!path_src.empty()) {
          if (path_src.size() > path_snk.size()) {
            // Extend with a tight forward arc from the path's last source.
            const int i = path_src.back();
            const double* cost_row = cost.entries.data() + static_cast<std::size_t>(i) * n;
            int& p = fwd_ptr[i];
            bool extended = false;
            for (; p < n; ++p) {
              const int j = p;
              if (!live_snk[j] || on_path_snk[j]) continue;
              if (cost_row[j] + pot_src[i] - pot_snk[j] > tight_eps) continue;
              path_snk.push_back(j);
              on_path_snk[j] = 1;
              extended = true;
              break;
            }
            if (!extended) {
              live_src[i] = 0;
              on_path_src[i] = 0;
              path_src.pop_back();
              continue;
            }
            const int j = path_snk.back();
            if (rem_demand[j] > 0.0) {
              double bottleneck = std::min(rem_supply[origin], rem_demand[j]);
              for (std::size_t t = 0; t + 1 < path_src.size(); ++t) {
                bottleneck = std::min(
                    bottleneck, flow[static_cast<std::size_t>(path_src[t + 1]) * n + path_snk[t]]);
              }
              apply_path(bottleneck, origin, j);
              for (int s : path_src) on_path_src[s] = 0;
              for (int s : path_snk) on_path_snk[s] = 0;
              progressed = true;
              augmented = true;
              break;
            }
          } else {
            // Extend with a backward support arc from the path's last sink.
            const int j = path_snk.back();
            auto& support = col_support[j];
            int& p = back_ptr[j];
            bool extended = false;
            for (; p < static_cast<int>(support.size()); ++p) {
              const int i = support[p];
              if (!live_src[i] || on_path_src[i]) continue;
              if (flow[static_cast<std::size_t>(i) * n + j] <= 0.0) continue;
              path_src.push_back(i);
              on_path_src[i] = 1;
              extended = true;
              break;
            }
            if (!extended) {
              live_snk[j] = 0;
              on_path_snk[j] = 0;
              path_snk.pop_back();
            }
          }
        }

        if (!augmented) break;  // origin is exhausted for this phase
      }
    }

    if (!progressed) {
      // The sweep's pruning can starve in rare tied configurations; fall back
      // to one textbook augmentation along the Dijkstra tree so every phase
      // is guaranteed to move mass.
      path_src.clear();
      path_snk.clear();
      int origin = -1;
      double bottleneck = rem_demand[target];
      for (int j = target;;) {
        const int i = parent_snk[j];
        path_snk.push_back(j);
        path_src.push_back(i);
        const int prev_sink = parent_src[i];
        if (prev_sink < 0) {
          bottleneck = std::min(bottleneck, rem_supply[i]);
          origin = i;
          break;
        }
        bottleneck = std::min(bottleneck, flow[static_cast<std::size_t>(i) * n + prev_sink]);
        j = prev_sink;
      }
      std::reverse(path_src.begin(), path_src.end());
      std::reverse(path_snk.begin(), path_snk.end());
      apply_path(bottleneck, origin, target);
    }
  }

  return flow;
}

inline double log_sum_exp(const std::vector<double>& terms) {
  double m = -std::numeric_limits<double>::infinity();
  for (double t : terms) m = std::max(m, t);
  if (!std::isfinite(m)) return m;
  double acc = 0.0;
  for (double t : terms) acc += std::exp(t - m);
  return m + std::log(acc);
}

/// Entropic OT in the log domain. Returns the unrounded plan.
inline std::vector<double> solve_sinkhorn(const std::vector<double>& p,
                                          const std::vector<double>& q,
                                          const CostMatrix& cost, const OtSolverConfig& config,
                                          double* final_violation) {
  const int n = static_cast<int>(p.size());
  const double reg = config.sinkhorn_reg;

  std::vector<double> log_p(n), log_q(n);
  for (int i = 0; i < n; ++i) log_p[i] = std::log(p[i]);
  for (int j = 0; j < n; ++j) log_q[j] = std::log(q[j]);

  std::vector<double> f(n, 0.0), g(n, 0.0);
  std::vector<double> scratch(n);

  double violation = std::numeric_limits<double>::infinity();
  bool converged = false;
  for (int iter = 0; iter < config.sinkhorn_max_iter; ++iter) {
    // f-update makes the row marginals exact for the current g.
    for (int i = 0; i < n; ++i) {
      const double* cost_row = cost.entries.data() + static_cast<std::size_t>(i) * n;
      for (int j = 0; j < n; ++j) scratch[j] = (g[j] - cost_row[j]) / reg;
      f[i] = reg * (log_p[i] - log_sum_exp(scratch));
    }
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) scratch[i] = (f[i] - cost.at(i, j)) / reg;
      g[j] = reg * (log_q[j] - log_sum_exp(scratch));
    }
    // After the g-update columns are exact; measure the row violation.
    violation = 0.0;
    for (int i = 0; i < n; ++i) {
      const double* cost_row = cost.entries.data() + static_cast<std::size_t>(i) * n;
      double row = 0.0;
      for (int j = 0; j < n; ++j) {
        row += std::exp((f[i] + g[j] - cost_row[j]) / reg);
      }
      violation += std::abs(row - p[i]);
    }
    if (violation <= config.sinkhorn_tol) {
      converged = true;
      break;
    }
  }
  if (final_violation != nullptr) *final_violation = violation;
  if (!converged) {
    throw SinkhornDivergedError(violation, config.sinkhorn_max_iter);
  }

  std::vector<double> flow(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    const double* cost_row = cost.entries.data() + static_cast<std::size_t>(i) * n;
    for (int j = 0; j < n; ++j) {
      flow[static_cast<std::size_t>(i) * n + j] = std::exp((f[i] + g[j] - cost_row[j]) / reg);
    }
  }
  return flow;
}

/// Rounds a near-feasible nonnegative plan onto the exact marginals (p, q):
/// scale rows down, scale columns down, then spread the leftover mass as a
/// rank-one correction. Nonnegativity is preserved.
inline void round_to_marginals(std::vector<double>& flow, const std::vector<double>& p,
                               const std::vector<double>& q) {
  const int n = static_cast<int>(p.size());
  std::vector<double> row(n, 0.0), col(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j = 0; j < n; ++j) acc += flow[static_cast<std::size_t>(i) * n + j];
    row[i] = acc;
  }
  for (int i = 0; i < n; ++i) {
    const double scale = (row[i] > p[i] && row[i] > 0.0) ? p[i] / row[i] : 1.0;
    if (scale != 1.0) {
      for (int j = 0; j < n; ++j) flow[static_cast<std::size_t>(i) * n + j] *= scale;
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) col[j] += flow[static_cast<std::size_t>(i) * n + j];
  }
  for (int j = 0; j < n; ++j) {
    const double scale = (col[j] > q[j] && col[j] > 0.0) ? q[j] / col[j] : 1.0;
    if (scale != 1.0) {
      for (int i = 0; i < n; ++i) flow[static_cast<std::size_t>(i) * n + j] *= scale;
    }
  }
  std::vector<double> err_r(n, 0.0), err_c(n, 0.0);
  double total_err = 0.0;
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j = 0; j < n; ++j) acc += flow[static_cast<std::size_t>(i) * n + j];
    err_r[i] = p[i] - acc;
    total_err += err_r[i];
  }
  for (int j = 0; j < n; ++j) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += flow[static_cast<std::size_t>(i) * n + j];
    err_c[j] = q[j] - acc;
  }
  if (total_err > 1e-300) {
    for (int i = 0; i < n; ++i) {
      if (err_r[i] <= 0.0) continue;
      for (int j = 0; j < n; ++j) {
        flow[static_cast<std::size_t>(i) * n + j] += err_r[i] * err_c[j] / total_err;
      }
    }
  }
}

}  // namespace detail

/// Solves the discrete OT problem between `source` and `target` under `cost`.
///
/// The returned plan couples the canonically renormalized marginals (inputs
/// are accepted when their mass is within 1e-6 of 1 and rescaled to sum to
/// exactly 1); its row/column sums match them within 1e-7.
inline TransportPlan solve_ot(const ProbabilityVector& source, const ProbabilityVector& target,
                              const CostMatrix& cost, const OtSolverConfig& config) {
  config.validate();
  const int n = cost.n;
  if (source.size() != n || target.size() != n) {
    throw std::invalid_argument("solve_ot: source/target/cost dimensions disagree");
  }
  source.validate(kInputMassTolerance);
  target.validate(kInputMassTolerance);

  std::vector<double> p = source.mass;
  std::vector<double> q = target.mass;
  const double sp = source.sum();
  const double sq = target.sum();
  for (double& v : p) v /= sp;
  for (double& v : q) v /= sq;

  TransportPlan plan;
  plan.n = n;
  plan.source = ProbabilityVector{p};
  plan.target = ProbabilityVector{q};

  if (config.method == OtMethod::Exact) {
    plan.flow = detail::solve_exact_transport(p, q, cost);
  } else {
    // Zero masses are floored and renormalized so the log-domain iteration is
    // well defined; rounding afterwards restores the true marginals.
    std::vector<double> pf = p, qf = q;
    const double floor = 1e-12;
    double sum_pf = 0.0, sum_qf = 0.0;
    for (double& v : pf) {
      v = std::max(v, floor);
      sum_pf += v;
    }
    for (double& v : qf) {
      v = std::max(v, floor);
      sum_qf += v;
    }
    for (double& v : pf) v /= sum_pf;
    for (double& v : qf) v /= sum_qf;
    plan.flow = detail::solve_sinkhorn(pf, qf, cost, config, nullptr);
    detail::round_to_marginals(plan.flow, p, q);
  }
  return plan;
}

}  // namespace otq
