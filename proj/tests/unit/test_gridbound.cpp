#include <gtest/gtest.h>

#include <random>

#include "collab/bounds.hpp"
#include "collab/errors.hpp"
#include "collab/gridbound.hpp"
#include "oracles.hpp"

using namespace collab;

namespace {

GridSearchConfig standard_config(ClosenessParams params) {
  GridSearchConfig cfg;
  cfg.zeta = 0.05;
  cfg.mu = {0.6, 0.7, 0.8};
  cfg.params = params;
  return cfg;
}

const ClosenessParams kWideWedge{0.31, 0.38, 0.005, 0.008};
const ClosenessParams kNarrowWedge{0.0, 0.25, 0.005, 0.005};

}  // namespace

TEST(GridBound, WideWedge) {
  auto r = max_residual_grid(standard_config(kWideWedge));
  EXPECT_NEAR(r.max_value, 0.084, 0.01);
  EXPECT_GE(r.certified_upper, r.max_value);
}

TEST(GridBound, NarrowWedge) {
  auto r = max_residual_grid(standard_config(kNarrowWedge));
  EXPECT_NEAR(r.max_value, 0.045, 0.008);
}

TEST(GridBound, ExactClosenessGivesZero) {
  GridSearchConfig cfg;
  cfg.mu = {0.6, 0.7, 0.8};
  auto r = max_residual_grid(cfg);
  EXPECT_NEAR(r.max_value, 0.0, 1e-12);
  EXPECT_NEAR(r.certified_upper, 0.0, 1e-12);
  EXPECT_EQ(r.p_points, 1u);
}

TEST(GridBound, Halved) {
  auto cfg = standard_config(kWideWedge);
  EXPECT_DOUBLE_EQ(halved_bound(cfg), max_residual_grid(cfg).max_value / 2.0);
  EXPECT_NEAR(halved_bound(cfg), 0.042, 0.005);
  EXPECT_NEAR(halved_bound(standard_config(kNarrowWedge)), 0.0225, 0.004);
  GridSearchConfig zero;
  zero.mu = {0.6, 0.7, 0.8};
  EXPECT_NEAR(halved_bound(zero), 0.0, 1e-12);
}

TEST(GridBound, WitnessSatisfiesConstraintsAndAttainsMax) {
  for (auto params : {kWideWedge, kNarrowWedge}) {
    auto cfg = standard_config(params);
    auto r = max_residual_grid(cfg);
    EXPECT_TRUE(witness_violations(cfg, r.p, r.q).empty());
    EXPECT_NEAR(residual_from_triplets(r.p, r.q), r.max_value, 1e-12);
    EXPECT_NEAR(oracle::residual_by_accuracies(r.p, r.q), r.max_value, 1e-12);
  }
}

TEST(GridBound, WitnessCheckerCatchesBadWitness) {
  auto cfg = standard_config(kWideWedge);
  auto r = max_residual_grid(cfg);
  auto q = r.q;
  q.p1 += 0.2;
  q.p_none -= 0.2;
  EXPECT_FALSE(witness_violations(cfg, r.p, q).empty());
}

TEST(GridBound, RefinementNeverDecreases) {
  for (auto params : {kWideWedge, kNarrowWedge}) {
    auto cfg = standard_config(params);
    double previous = -1.0;
    for (auto [step, points] : {std::pair{0.025, std::size_t{3}}, {0.0125, 5}, {0.00625, 9}}) {
      cfg.p_grid_step = step;
      cfg.q_grid_points = points;
      const double v = max_residual_grid(cfg).max_value;
      EXPECT_GE(v, previous - 1e-15) << step;
      previous = v;
    }
  }
}

TEST(GridBound, MatchesBoxVertexOracleWithoutQDominance) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 10; ++rep) {
    GridSearchConfig cfg;
    cfg.zeta = 0.02 + 0.04 * u(rng);
    const double m1 = 0.5 + 0.1 * u(rng);
    const double m2 = m1 + 0.1 * u(rng);
    cfg.mu = {m1, m2, m2 + 0.05 + 0.1 * u(rng)};
    cfg.params = {0.3 * u(rng), 0.3 * u(rng), 0.01 * u(rng), 0.01 * u(rng)};
    cfg.p_grid_step = 0.01;
    cfg.q_grid_points = 2 + rep % 3;
    cfg.q_dominance = false;
    auto oracle_result = oracle::box_vertex_grid_max(cfg);
    ASSERT_FALSE(oracle_result.sum_binds);
    EXPECT_NEAR(max_residual_grid(cfg).max_value, oracle_result.max_value, 1e-12) << rep;
  }
}

TEST(GridBound, OrderedCaseBelowAnalyticBound) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 20; ++rep) {
    GridSearchConfig cfg;
    const double m1 = 0.3 + 0.3 * u(rng);
    const double m2 = m1 + 0.15 * u(rng);
    cfg.mu = {m1, m2, m2 + 0.01 + 0.2 * u(rng)};
    cfg.params = {0.4 * u(rng), 0.4 * u(rng), 0.01 * u(rng), 0.01 * u(rng)};
    cfg.q_grid_points = 9;
    const double grid = max_residual_grid(cfg).max_value;
    EXPECT_LE(grid, prop1_bound(cfg.mu[0], cfg.mu[1], cfg.mu[2], cfg.params).bound_value + 1e-12);
  }
}

TEST(GridBound, ThreadIndependent) {
  auto cfg = standard_config(kWideWedge);
  cfg.threads = 1;
  auto one = max_residual_grid(cfg);
  cfg.threads = 7;
  auto many = max_residual_grid(cfg);
  EXPECT_EQ(one.max_value, many.max_value);
  EXPECT_EQ(one.certified_upper, many.certified_upper);
  EXPECT_EQ(one.p.to_string(), many.p.to_string());
  EXPECT_EQ(one.q.to_string(), many.q.to_string());
  EXPECT_EQ(one.q_points, many.q_points);
}

TEST(GridBound, LowSegmentOnlyWidens) {
  auto cfg = standard_config(kNarrowWedge);
  const double base = max_residual_grid(cfg).max_value;
  cfg.params.low_segment = LowProbabilitySegment{0.05, 1.0, 0.01};
  EXPECT_GE(max_residual_grid(cfg).max_value, base);
}

TEST(GridBound, Validation) {
  GridSearchConfig cfg;
  cfg.mu = {0.7, 0.6, 0.8};
  EXPECT_THROW(max_residual_grid(cfg), ValidationError);
  cfg.mu = {0.6, 0.6, 0.6};
  EXPECT_THROW(max_residual_grid(cfg), DegenerateError);
  cfg.mu = {0.6, 0.7, 0.8};
  cfg.q_grid_points = 1;
  EXPECT_THROW(max_residual_grid(cfg), ValidationError);
  cfg.q_grid_points = 5;
  cfg.p_grid_step = 0.0;
  EXPECT_THROW(max_residual_grid(cfg), ValidationError);
  cfg.p_grid_step = 0.01;
  cfg.zeta = -0.1;
  EXPECT_THROW(max_residual_grid(cfg), ValidationError);
}

TEST(GridBound, OrderedPointAlwaysFeasible) {
  // p1 = p2 = p12 = p13 = 0 meets every constraint of a valid config, so the
  // search region is never empty.
  for (std::array<double, 3> mu : {std::array{0.0, 1.0, 1.0}, {0.5, 0.5, 1.0}, {0.0, 0.0, 0.01}}) {
    GridSearchConfig cfg;
    cfg.mu = mu;
    cfg.zeta = 0.3;
    auto r = max_residual_grid(cfg);
    EXPECT_GE(r.p_points, 1u);
    EXPECT_TRUE(witness_violations(cfg, r.p, r.q).empty());
  }
}

TEST(GridBoundCache, MemoizesIdenticalConfigs) {
  GridBoundCache cache;
  auto cfg = standard_config(kNarrowWedge);
  cfg.p_grid_step = 0.025;
  const double a = cache.max_value(cfg);
  const double b = cache.max_value(cfg);
  EXPECT_EQ(a, b);
  EXPECT_EQ(cache.size(), 1u);
  EXPECT_EQ(cache.hits(), 1u);
  cfg.q_dominance = false;
  cache.max_value(cfg);
  EXPECT_EQ(cache.size(), 2u);
}
