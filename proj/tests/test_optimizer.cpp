#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "test_util.hpp"
#include "xyqaoa/optimizer.hpp"

using namespace xyqaoa;

TEST(Seeds, DerivedSeedsDiffer) {
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
  EXPECT_EQ(derive_seed(9, 4), derive_seed(9, 4));
}

TEST(Simplex, RandomPointsLieOnSimplex) {
  Rng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const auto x = random_simplex_point(1 + trial % 12, 3.5, rng);
    EXPECT_NEAR(std::accumulate(x.begin(), x.end(), 0.0), 3.5, 1e-12);
    for (double v : x) EXPECT_GE(v, 0.0);
  }
}

TEST(Simplex, RandomPointsAreUniform) {
  // Marginal of a uniform point on the 2-simplex (dim 3) has mean total/3 and P(x_0 < t/2) = 3/4.
  Rng rng(6);
  const int draws = 200000;
  double mean = 0.0;
  int below = 0;
  for (int i = 0; i < draws; ++i) {
    const auto x = random_simplex_point(3, 1.0, rng);
    mean += x[0];
    below += x[0] < 0.5 ? 1 : 0;
  }
  EXPECT_NEAR(mean / draws, 1.0 / 3.0, 3e-3);
  EXPECT_NEAR(static_cast<double>(below) / draws, 0.75, 3e-3);
}

TEST(Simplex, ProjectionSatisfiesOptimalityConditions) {
  // y = P(x) iff y = max(x - theta, 0) with sum y = total.
  std::mt19937_64 rng(12);
  std::normal_distribution<double> g(0.0, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> x(1 + trial % 9);
    for (double& v : x) v = g(rng);
    const double total = 0.5 + (trial % 5);
    std::vector<double> y = x;
    SimplexProjector{total}.project(y);
    EXPECT_NEAR(std::accumulate(y.begin(), y.end(), 0.0), total, 1e-10);
    double theta = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i)
      if (y[i] > 0.0) theta = x[i] - y[i];
    for (std::size_t i = 0; i < y.size(); ++i) EXPECT_NEAR(y[i], std::max(x[i] - theta, 0.0), 1e-10);
  }
}

TEST(Simplex, ProjectionIsClosestPointAmongSamples) {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> g;
  Rng sample_rng(22);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> x(4);
    for (double& v : x) v = g(rng);
    std::vector<double> y = x;
    SimplexProjector{2.0}.project(y);
    auto dist = [&](const std::vector<double>& z) {
      double s = 0.0;
      for (std::size_t i = 0; i < z.size(); ++i) s += (z[i] - x[i]) * (z[i] - x[i]);
      return s;
    };
    const double best = dist(y);
    for (int s = 0; s < 2000; ++s) EXPECT_GE(dist(random_simplex_point(4, 2.0, sample_rng)), best - 1e-12);
  }
}

TEST(Ascent, ConcaveQuadraticOnBox) {
  // max -(x-a)^2 over x >= 0 has solution max(a, 0)
  const std::vector<double> a{1.5, -2.0, 0.3, -0.1, 4.0};
  auto objective = [&](std::span<const double> x, std::span<double> g) {
    double f = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      f -= (x[i] - a[i]) * (x[i] - a[i]) * (1.0 + i);
      g[i] = -2.0 * (x[i] - a[i]) * (1.0 + i);
    }
    return f;
  };
  const auto r = projected_lbfgs_ascent(objective, BoxProjector{}, std::vector<double>(5, 1.0), AscentOptions{});
  EXPECT_TRUE(r.converged);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(r.x[i], std::max(a[i], 0.0), 1e-8);
}

TEST(Ascent, LinearObjectiveOnSimplexPicksLargestWeight) {
  const std::vector<double> w{0.2, 1.3, 0.7};
  auto objective = [&](std::span<const double> x, std::span<double> g) {
    std::copy(w.begin(), w.end(), g.begin());
    return std::inner_product(x.begin(), x.end(), w.begin(), 0.0);
  };
  const auto r = projected_lbfgs_ascent(objective, SimplexProjector{2.0}, {1.0, 0.5, 0.5}, AscentOptions{});
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.x[1], 2.0, 1e-10);
  EXPECT_NEAR(r.value, 2.6, 1e-10);
}

TEST(Ascent, AcceptedValuesNeverDecrease) {
  std::mt19937_64 rng(31);
  const SubspaceSimulator sim(6);
  auto objective = [&](std::span<const double> x, std::span<double> g) { return sim.fidelity_and_gradient(x, g); };
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> history;
    const auto x0 = test::random_schedule(rng, 4, 2.0).flat();
    double start_value;
    {
      std::vector<double> g(x0.size());
      start_value = sim.fidelity_and_gradient(x0, g);
    }
    history.push_back(start_value);
    projected_lbfgs_ascent(objective, BoxProjector{}, x0, AscentOptions{},
                           [&](double v) { history.push_back(v); });
    for (std::size_t i = 1; i < history.size(); ++i) EXPECT_GE(history[i], history[i - 1] - 1e-15);
  }
}

TEST(PadSchedule, PreservesUnitary) {
  std::mt19937_64 rng(2);
  const auto s = test::random_schedule(rng, 3);
  const auto padded = pad_schedule(s, 7);
  EXPECT_EQ(padded.depth(), 7U);
  EXPECT_NEAR(fidelity(s, 5), fidelity(padded, 5), 1e-14);
  EXPECT_THROW(pad_schedule(s, 2), InvalidDimension);
}

TEST(OptimizeFree, TwoSitesReachesPerfectTransfer) {
  OptimizerConfig cfg;
  cfg.restarts = 10;
  cfg.rng_seed = 3;
  const auto r = optimize_free(2, 1, cfg);
  EXPECT_NEAR(r.best_fidelity, 1.0, 1e-10);
  EXPECT_EQ(r.restart_records.size(), 10U);
  EXPECT_NEAR(fidelity(r.best_schedule, 2), r.best_fidelity, 1e-14);
}

TEST(OptimizeFree, ThreeSitesDepthOneReachesPerfectTransfer) {
  // Hop of pi/(2 sqrt 2) maps |1> to -|3> on the three-site chain.
  OptimizerConfig cfg;
  cfg.restarts = 20;
  cfg.rng_seed = 1;
  const auto r = optimize_free(3, 1, cfg);
  EXPECT_NEAR(r.best_fidelity, 1.0, 1e-10);
  EXPECT_NEAR(fidelity(Schedule({{std::numbers::pi / (2 * std::sqrt(2.0)), 0.0}}), 3), 1.0, 1e-14);
}

TEST(OptimizeFixed, RespectsTotalTime) {
  OptimizerConfig cfg;
  cfg.restarts = 8;
  cfg.rng_seed = 5;
  const auto r = optimize_fixed_tf(4, 3, 2.5, cfg);
  EXPECT_NEAR(r.best_schedule.total_time(), 2.5, 1e-10);
  for (double v : r.best_schedule.flat()) EXPECT_GE(v, 0.0);
  EXPECT_THROW(optimize_fixed_tf(4, 3, 0.0, cfg), InvalidConstraint);
}

TEST(OptimizeFixed, LongerTimeNeverHurtsWithSeeding) {
  OptimizerConfig cfg;
  cfg.restarts = 6;
  cfg.rng_seed = 9;
  const auto shorter = optimize_fixed_tf(4, 3, 2.0, cfg);
  OptimizerConfig seeded = cfg;
  seeded.seed_schedules = {shorter.best_schedule};
  // Any schedule of total 2.0 can be stretched by idling in H_C, which leaves |c_N| unchanged.
  auto stretched = shorter.best_schedule.pairs();
  stretched.back().phase += 1.0;
  seeded.seed_schedules = {Schedule(stretched)};
  const auto longer = optimize_fixed_tf(4, 3, 3.0, seeded);
  EXPECT_GE(longer.best_fidelity, shorter.best_fidelity - 1e-12);
}

TEST(OptimizeFixed, SeedsRunFirstAndCanStopTheSearch) {
  OptimizerConfig cfg;
  cfg.restarts = 30;
  cfg.rng_seed = 4;
  const auto first = optimize_fixed_tf(3, 3, 3.0, cfg);
  ASSERT_GT(first.best_fidelity, 0.99);

  OptimizerConfig seeded = cfg;
  seeded.threads = 1;
  seeded.seed_schedules = {first.best_schedule};
  seeded.stop_at_fidelity = first.best_fidelity - 1e-9;
  const auto again = optimize_fixed_tf(3, 3, 3.0, seeded);
  ASSERT_EQ(again.restart_records.size(), 1U);
  EXPECT_EQ(again.restart_records[0].seed_index, 0);
  EXPECT_GE(again.best_fidelity, first.best_fidelity - 1e-9);
}

TEST(Optimize, DeterministicAcrossThreadCounts) {
  OptimizerConfig cfg;
  cfg.restarts = 12;
  cfg.rng_seed = 77;
  cfg.threads = 1;
  const auto a = optimize_free(5, 3, cfg);
  cfg.threads = 4;
  const auto b = optimize_free(5, 3, cfg);
  EXPECT_EQ(a.best_schedule, b.best_schedule);
  EXPECT_EQ(a.best_fidelity, b.best_fidelity);
  EXPECT_EQ(a.restart_records, b.restart_records);
}

TEST(Optimize, DispatchesOnFixedTime) {
  OptimizerConfig cfg;
  cfg.restarts = 4;
  cfg.fixed_total_time = 1.7;
  const auto r = optimize(3, 2, cfg);
  EXPECT_NEAR(r.best_schedule.total_time(), 1.7, 1e-10);
  EXPECT_THROW(optimize_free(3, 2, cfg), InvalidConstraint);
}

TEST(Optimize, RejectsBadConfig) {
  OptimizerConfig cfg;
  cfg.restarts = 0;
  EXPECT_THROW(optimize_free(3, 2, cfg), InvalidConstraint);
  cfg.restarts = 1;
  EXPECT_THROW(optimize_free(3, 0, cfg), InvalidDimension);
  EXPECT_THROW(optimize_free(1, 2, cfg), InvalidDimension);
}
