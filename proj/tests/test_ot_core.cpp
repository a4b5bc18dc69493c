#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "otq/ot_solver.hpp"

using namespace otq;

namespace {

ProbabilityVector pv(std::vector<double> mass) { return ProbabilityVector{std::move(mass)}; }

TransportPlan solve_exact(const ProbabilityVector& p, const ProbabilityVector& q,
                          const CostMatrix& cost) {
  OtSolverConfig config;
  config.method = OtMethod::Exact;
  return solve_ot(p, q, cost, config);
}

}  // namespace

TEST_CASE("cost matrix entries are squared Euclidean distances", "[ot_core]") {
  SECTION("unit vertical step") {
    const CostMatrix c = build_cost_matrix({{0, 0}, {0, 1}});
    CHECK(c.n == 2);
    CHECK(c.at(0, 1) == 1.0);
  }
  SECTION("single state degenerates to [[0]]") {
    const CostMatrix c = build_cost_matrix({{2, 3}});
    CHECK(c.n == 1);
    CHECK(c.entries == std::vector<double>{0.0});
  }
  SECTION("3-4-5 triangle") {
    const CostMatrix c = build_cost_matrix({{0, 0}, {3, 4}});
    CHECK(c.at(0, 1) == 25.0);
  }
  SECTION("empty coordinate list is rejected") {
    CHECK_THROWS_AS(build_cost_matrix({}), std::invalid_argument);
  }
}

TEST_CASE("cost matrix invariants hold on random coordinate sets", "[ot_core]") {
  std::mt19937_64 rng(7u);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 14);
    const CostMatrix c = build_cost_matrix(oracle::random_coords(rng, n, 12));
    for (int i = 0; i < n; ++i) {
      REQUIRE(c.at(i, i) == 0.0);
      for (int j = 0; j < n; ++j) {
        REQUIRE(c.at(i, j) >= 0.0);
        REQUIRE(c.at(i, j) == c.at(j, i));
      }
    }
  }
}

TEST_CASE("probability vector construction and validation", "[ot_core]") {
  SECTION("normalized() rescales raw weights") {
    const ProbabilityVector v = ProbabilityVector::normalized({2.0, 2.0});
    CHECK(v.mass == std::vector<double>{0.5, 0.5});
  }
  SECTION("negative weights are rejected") {
    CHECK_THROWS_AS(ProbabilityVector::normalized({1.0, -0.5}), std::invalid_argument);
  }
  SECTION("all-zero weights are rejected") {
    CHECK_THROWS_AS(ProbabilityVector::normalized({0.0, 0.0}), std::invalid_argument);
  }
  SECTION("from_mass enforces the unit-mass invariant") {
    CHECK_THROWS_AS(ProbabilityVector::from_mass({0.6, 0.5}), std::invalid_argument);
    CHECK_NOTHROW(ProbabilityVector::from_mass({0.5, 0.5}));
  }
  SECTION("total variation") {
    CHECK(total_variation(pv({0.5, 0.5}), pv({0.5, 0.5})) == 0.0);
    CHECK(total_variation(pv({1.0, 0.0}), pv({0.0, 1.0})) == 1.0);
    CHECK_THROWS_AS(total_variation(pv({1.0}), pv({0.5, 0.5})), std::invalid_argument);
  }
}

TEST_CASE("identical marginals need no transport", "[ot_core]") {
  const CostMatrix cost = build_cost_matrix({{0, 0}, {0, 1}});
  const TransportPlan plan = solve_exact(pv({0.5, 0.5}), pv({0.5, 0.5}), cost);
  CHECK(verify_plan(plan, kMarginalTolerance));
  CHECK(plan_objective(plan, cost) == Catch::Approx(0.0).margin(1e-12));
  // For this cost the zero-objective plan is unique: all mass stays put.
  CHECK(plan.at(0, 0) == Catch::Approx(0.5).margin(1e-12));
  CHECK(plan.at(1, 1) == Catch::Approx(0.5).margin(1e-12));
}

TEST_CASE("point masses force the plan", "[ot_core]") {
  const CostMatrix cost = build_cost_matrix({{0, 0}, {3, 4}});
  const TransportPlan plan = solve_exact(pv({1.0, 0.0}), pv({0.0, 1.0}), cost);
  CHECK(verify_plan(plan, kMarginalTolerance));
  CHECK(plan.at(0, 1) == Catch::Approx(1.0).margin(1e-12));
  CHECK(plan.at(0, 0) == 0.0);
  CHECK(plan.at(1, 0) == 0.0);
  CHECK(plan.at(1, 1) == 0.0);
  CHECK(plan_objective(plan, cost) == Catch::Approx(25.0).margin(1e-12));
  CHECK(wasserstein_distance(plan, cost, 1.0) == Catch::Approx(25.0).margin(1e-12));
}

TEST_CASE("three-state line instance matches the brute-force optimum", "[ot_core]") {
  // States at x = 0, 1, 2; shifting the two left masses one cell right is
  // optimal. Confirmed against exhaustive vertex enumeration of the LP below.
  const CostMatrix cost = build_cost_matrix({{0, 0}, {1, 0}, {2, 0}});
  REQUIRE(cost.at(0, 1) == 1.0);
  REQUIRE(cost.at(1, 2) == 1.0);
  REQUIRE(cost.at(0, 2) == 4.0);

  const std::vector<double> source{0.5, 0.5, 0.0};
  const std::vector<double> target{0.0, 0.5, 0.5};
  const oracle::BruteForceResult best = oracle::transport_brute_force(source, target, cost);
  REQUIRE(best.objective == Catch::Approx(1.0).margin(1e-12));

  const TransportPlan plan = solve_exact(pv(source), pv(target), cost);
  CHECK(verify_plan(plan, kMarginalTolerance));
  CHECK(plan_objective(plan, cost) == Catch::Approx(best.objective).margin(1e-9));
  // This instance has a unique optimal vertex, so the flows are pinned too.
  CHECK(plan.at(0, 1) == Catch::Approx(0.5).margin(1e-9));
  CHECK(plan.at(1, 2) == Catch::Approx(0.5).margin(1e-9));
  CHECK(wasserstein_distance(plan, cost, 2.0) == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("wasserstein distance rejects p below 1", "[ot_core]") {
  const CostMatrix cost = build_cost_matrix({{0, 0}, {0, 1}});
  const TransportPlan plan = solve_exact(pv({0.5, 0.5}), pv({0.5, 0.5}), cost);
  CHECK_THROWS_AS(wasserstein_distance(plan, cost, 0.5), std::invalid_argument);
}

TEST_CASE("verify_plan flags infeasible couplings", "[ot_core]") {
  const CostMatrix cost = build_cost_matrix({{0, 0}, {0, 1}});
  TransportPlan plan = solve_exact(pv({0.5, 0.5}), pv({0.5, 0.5}), cost);
  REQUIRE(verify_plan(plan, 1e-7));

  SECTION("negative flow") {
    plan.at(0, 0) = -0.01;
    CHECK_FALSE(verify_plan(plan, 1e-7));
  }
  SECTION("row sum off by 0.01") {
    plan.at(0, 0) = 0.49;
    CHECK_FALSE(verify_plan(plan, 1e-7));
  }
}

TEST_CASE("solve_ot validates its inputs", "[ot_core]") {
  const CostMatrix cost = build_cost_matrix({{0, 0}, {0, 1}});
  OtSolverConfig config;
  SECTION("dimension mismatch") {
    CHECK_THROWS_AS(solve_ot(pv({1.0}), pv({0.5, 0.5}), cost, config), std::invalid_argument);
  }
  SECTION("unnormalized marginals") {
    CHECK_THROWS_AS(solve_ot(pv({0.6, 0.5}), pv({0.5, 0.5}), cost, config), std::invalid_argument);
    CHECK_THROWS_AS(solve_ot(pv({0.5, 0.5}), pv({0.4, 0.5}), cost, config), std::invalid_argument);
  }
  SECTION("bad solver configuration") {
    OtSolverConfig bad = config;
    bad.sinkhorn_reg = 0.0;
    CHECK_THROWS_AS(solve_ot(pv({0.5, 0.5}), pv({0.5, 0.5}), cost, bad), std::invalid_argument);
    bad = config;
    bad.sinkhorn_tol = -1.0;
    CHECK_THROWS_AS(solve_ot(pv({0.5, 0.5}), pv({0.5, 0.5}), cost, bad), std::invalid_argument);
    bad = config;
    bad.sinkhorn_max_iter = 0;
    CHECK_THROWS_AS(solve_ot(pv({0.5, 0.5}), pv({0.5, 0.5}), cost, bad), std::invalid_argument);
  }
}

TEST_CASE("exact solver matches brute force on small random instances", "[ot_core]") {
  std::mt19937_64 rng(11u);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 3);  // 2..4
    const double zero_fraction = (trial % 3 == 0) ? 0.4 : 0.0;
    const std::vector<double> p = oracle::random_distribution(rng, n, zero_fraction);
    const std::vector<double> q = oracle::random_distribution(rng, n, zero_fraction);
    const CostMatrix cost = build_cost_matrix(oracle::random_coords(rng, n, 6));

    const oracle::BruteForceResult best = oracle::transport_brute_force(p, q, cost);
    REQUIRE(std::isfinite(best.objective));

    const TransportPlan plan = solve_exact(pv(p), pv(q), cost);
    INFO("trial " << trial << " n=" << n);
    REQUIRE(verify_plan(plan, kMarginalTolerance));
    REQUIRE(plan_objective(plan, cost) == Catch::Approx(best.objective).margin(1e-9));
  }
}

TEST_CASE("plan objective never beats the independent coupling", "[ot_core]") {
  std::mt19937_64 rng(13u);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 15);
    const std::vector<double> p = oracle::random_distribution(rng, n);
    const std::vector<double> q = oracle::random_distribution(rng, n);
    const CostMatrix cost = build_cost_matrix(oracle::random_coords(rng, n, 10));

    double product_objective = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) product_objective += p[i] * q[j] * cost.at(i, j);
    }
    const TransportPlan plan = solve_exact(pv(p), pv(q), cost);
    REQUIRE(plan_objective(plan, cost) <= product_objective + 1e-9);
  }
}

TEST_CASE("transporting a distribution onto itself costs nothing", "[ot_core]") {
  std::mt19937_64 rng(17u);
  for (int trial = 0; trial < 15; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 15);
    const std::vector<double> p = oracle::random_distribution(rng, n, 0.2);
    const CostMatrix cost = build_cost_matrix(oracle::random_coords(rng, n, 10));
    const TransportPlan plan = solve_exact(pv(p), pv(p), cost);
    REQUIRE(wasserstein_distance(plan, cost, 2.0) == Catch::Approx(0.0).margin(1e-9));
  }
}

TEST_CASE("wasserstein distance is symmetric for symmetric costs", "[ot_core]") {
  std::mt19937_64 rng(19u);
  for (int trial = 0; trial < 15; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 15);
    const std::vector<double> p = oracle::random_distribution(rng, n, 0.15);
    const std::vector<double> q = oracle::random_distribution(rng, n, 0.15);
    const CostMatrix cost = build_cost_matrix(oracle::random_coords(rng, n, 10));
    const double forward = wasserstein_distance(solve_exact(pv(p), pv(q), cost), cost, 2.0);
    const double backward = wasserstein_distance(solve_exact(pv(q), pv(p), cost), cost, 2.0);
    REQUIRE(std::abs(forward - backward) <= 1e-7);
  }
}

TEST_CASE("sinkhorn tracks the exact objective at small regularization", "[ot_core]") {
  std::mt19937_64 rng(23u);
  OtSolverConfig config;
  config.method = OtMethod::Sinkhorn;
  config.sinkhorn_reg = 1e-3;
  config.sinkhorn_tol = 1e-8;
  config.sinkhorn_max_iter = 200000;

  for (int trial = 0; trial < 8; ++trial) {
    const int n = 5 + static_cast<int>(rng() % 16);  // 5..20
    const std::vector<double> p = oracle::random_distribution(rng, n);
    const std::vector<double> q = oracle::random_distribution(rng, n);
    CostMatrix cost = build_cost_matrix(oracle::random_coords(rng, n, 8));
    const double scale = cost.max_entry();
    REQUIRE(scale > 0.0);
    for (double& e : cost.entries) e /= scale;  // costs in [0, 1]

    const double exact = plan_objective(solve_exact(pv(p), pv(q), cost), cost);
    const TransportPlan approx = solve_ot(pv(p), pv(q), cost, config);
    INFO("trial " << trial << " n=" << n << " exact=" << exact);
    REQUIRE(verify_plan(approx, 1e-6));
    const double entropic = plan_objective(approx, cost);
    REQUIRE(entropic >= exact - 1e-9);  // rounded plan is feasible
    REQUIRE(entropic <= exact * 1.02 + 1e-9);
  }
}

TEST_CASE("sinkhorn handles zero-mass entries via flooring", "[ot_core]") {
  OtSolverConfig config;
  config.method = OtMethod::Sinkhorn;
  config.sinkhorn_reg = 0.1;
  CostMatrix cost = build_cost_matrix({{0, 0}, {1, 0}, {2, 0}});
  const double scale = cost.max_entry();
  for (double& e : cost.entries) e /= scale;  // [0, 1] costs keep the kernel well conditioned
  const TransportPlan plan = solve_ot(pv({0.5, 0.5, 0.0}), pv({0.0, 0.5, 0.5}), cost, config);
  CHECK(verify_plan(plan, 1e-6));
  // Marginals of the returned plan are the true ones, zeros included.
  CHECK(plan.row_sums()[2] == Catch::Approx(0.0).margin(1e-9));
  CHECK(plan.col_sums()[0] == Catch::Approx(0.0).margin(1e-9));
}

TEST_CASE("sinkhorn reports non-convergence with the final violation", "[ot_core]") {
  OtSolverConfig config;
  config.method = OtMethod::Sinkhorn;
  config.sinkhorn_reg = 1e-3;
  config.sinkhorn_tol = 1e-14;
  config.sinkhorn_max_iter = 1;
  const CostMatrix cost = build_cost_matrix({{0, 0}, {3, 0}, {0, 4}});
  try {
    solve_ot(pv({0.7, 0.2, 0.1}), pv({0.1, 0.3, 0.6}), cost, config);
    FAIL("expected SinkhornDivergedError");
  } catch (const SinkhornDivergedError& e) {
    CHECK(e.marginal_violation > 1e-14);
  }
}
