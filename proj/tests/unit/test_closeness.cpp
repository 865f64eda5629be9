#include <gtest/gtest.h>

#include <random>

#include "collab/closeness.hpp"
#include "collab/errors.hpp"
#include "collab/synth.hpp"

using namespace collab;

namespace {

const ClosenessParams kWideWedge{0.31, 0.38, 0.005, 0.008};

std::vector<TripletPoint> example2_cells() {
  const auto s = example2();
  std::vector<TripletPoint> pts;
  for (unsigned pattern = 1; pattern < 8; ++pattern) {
    pts.push_back({0, 1, 2, static_cast<std::uint8_t>(pattern), s.p.cell(pattern), s.q.cell(pattern)});
  }
  return pts;
}

std::vector<TripletPoint> random_points(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 0.3);
  std::normal_distribution<double> noise(0.0, 0.02);
  std::vector<TripletPoint> pts;
  for (std::size_t x = 0; x < n; ++x) {
    const double p = u(rng);
    pts.push_back({0, 1, 2, 6, p, std::max(0.0, p + noise(rng))});
  }
  return pts;
}

}  // namespace

TEST(Wedge, BoundsAndAdmission) {
  EXPECT_NEAR(kWideWedge.upper_bound(0.1), 0.146, 1e-15);
  EXPECT_FALSE(kWideWedge.admits(0.1, 0.2));
  // p = 0 is admitted iff -nu1 <= q <= nu2.
  EXPECT_TRUE(kWideWedge.admits(0.0, 0.008));
  EXPECT_FALSE(kWideWedge.admits(0.0, 0.0081));
  EXPECT_TRUE(kWideWedge.admits(0.0, 0.0));
}

TEST(Wedge, LowSegment) {
  ClosenessParams p{0.1, 0.1, 0.0, 0.0, 1.0, LowProbabilitySegment{0.05, 1.0, 0.01}};
  EXPECT_NEAR(p.upper_bound(0.04), 0.01 + 2.0 * 0.04, 1e-15);
  EXPECT_NEAR(p.upper_bound(0.06), 1.1 * 0.06, 1e-15);
  EXPECT_DOUBLE_EQ(p.max_upper_slope(), 2.0);
  EXPECT_EQ(p.as_exact_wedge(), (ClosenessParams{0.1, 0.1, 0.0, 0.0}));
}

TEST(Wedge, Validation) {
  EXPECT_THROW((ClosenessParams{-0.1, 0, 0, 0}.validate()), ValidationError);
  EXPECT_THROW((ClosenessParams{0, 0, 0, 0, 1.5}.validate()), ValidationError);
  EXPECT_THROW((ClosenessParams{0, 0, 0, 0, 0.0}.validate()), ValidationError);
}

TEST(CheckCloseness, ExactWedgeOnDiagonal) {
  std::vector<TripletPoint> pts;
  for (int x = 0; x <= 10; ++x) pts.push_back({0, 1, 2, 5, x / 20.0, x / 20.0});
  auto r = check_closeness(pts, {"a", "b", "c"}, {});
  EXPECT_EQ(r.violating, 0u);
  EXPECT_EQ(r.coverage, 1.0);
}

TEST(CheckCloseness, ExampleTwoCells) {
  auto r = check_closeness(example2_cells(), {"f1", "f2", "f3"}, kWideWedge);
  EXPECT_EQ(r.total, 7u);
  EXPECT_EQ(r.violating, 0u);
}

TEST(CheckCloseness, SingleViolation) {
  std::vector<TripletPoint> pts{{0, 1, 2, 6, 0.1, 0.2}, {0, 1, 3, 6, 0.1, 0.1}};
  auto r = check_closeness(pts, {"a", "b", "c", "d"}, kWideWedge);
  EXPECT_EQ(r.violating, 1u);
  EXPECT_EQ(r.per_model, (std::vector<std::size_t>{1, 1, 1, 0}));
  EXPECT_DOUBLE_EQ(r.coverage, 0.5);
}

TEST(CheckCloseness, MonotoneInEveryParameter) {
  std::mt19937_64 rng(12);
  auto pts = random_points(rng, 500);
  ClosenessParams base{0.05, 0.05, 0.002, 0.002};
  const auto v0 = check_closeness(pts, {"a", "b", "c"}, base).violating;
  for (int field = 0; field < 4; ++field) {
    auto wider = base;
    double* f[] = {&wider.delta1, &wider.delta2, &wider.nu1, &wider.nu2};
    *f[field] += 0.03;
    EXPECT_LE(check_closeness(pts, {"a", "b", "c"}, wider).violating, v0) << field;
  }
}

TEST(FitWedge, DiagonalGivesZeroWedge) {
  std::vector<TripletPoint> pts;
  for (int x = 0; x <= 20; ++x) pts.push_back({0, 1, 2, 3, x / 40.0, x / 40.0});
  for (double c : {1.0, 0.9, 0.5}) {
    auto w = fit_wedge(pts, c);
    EXPECT_EQ(w.delta1, 0.0);
    EXPECT_EQ(w.delta2, 0.0);
    EXPECT_EQ(w.nu1, 0.0);
    EXPECT_EQ(w.nu2, 0.0);
  }
}

TEST(FitWedge, PlantedUpperLine) {
  std::vector<TripletPoint> pts;
  for (int x = 1; x <= 40; ++x) {
    const double p = x / 100.0;
    pts.push_back({0, 1, 2, 6, p, 1.2 * p + 0.004});
    pts.push_back({0, 1, 2, 5, p, p});
  }
  auto w = fit_wedge(pts, 1.0);
  EXPECT_NEAR(w.delta2, 0.2, 1e-9);
  EXPECT_NEAR(w.nu2, 0.004, 1e-12);
  EXPECT_EQ(w.delta1, 0.0);
  EXPECT_EQ(w.nu1, 0.0);
}

TEST(FitWedge, ExampleTwoInsideWideWedge) {
  auto w = fit_wedge(example2_cells(), 1.0);
  EXPECT_LE(w.delta1, 0.31);
  EXPECT_LE(w.delta2, 0.38);
  EXPECT_EQ(check_closeness(example2_cells(), {"f1", "f2", "f3"}, w).violating, 0u);
}

TEST(FitWedge, CoverageIsAchieved) {
  std::mt19937_64 rng(99);
  for (double c : {1.0, 0.99, 0.95, 0.8, 0.5}) {
    auto pts = random_points(rng, 400);
    auto w = fit_wedge(pts, c);
    auto r = check_closeness(pts, {"a", "b", "c"}, w);
    EXPECT_GE(r.coverage, c - 1e-12) << c;
    EXPECT_EQ(w.coverage, c);
  }
}

TEST(FitWedge, Errors) {
  EXPECT_THROW(fit_wedge({}, 1.0), ValidationError);
  std::vector<TripletPoint> pts{{0, 1, 2, 6, 0.0, 0.5}};
  EXPECT_THROW(fit_wedge(pts, 1.0), DegenerateError);
  EXPECT_THROW(fit_wedge(pts, 0.0), ValidationError);
}

TEST(Outliers, Basic) {
  ViolationReport empty{{"a", "b", "c"}, 10, 0, {}, {0, 0, 0}, 1.0};
  EXPECT_TRUE(outlier_models(empty, 0).empty());
  ViolationReport r{{"a", "b", "c", "d"}, 20, 0, {}, {2, 5, 5, 0}, 1.0};
  EXPECT_EQ(outlier_models(r, 1), (std::vector<std::string>{"b", "c", "a"}));
  EXPECT_TRUE(outlier_models(r, 20).empty());
}

TEST(Outliers, ScaledModelTopsTheList) {
  // Six models with identical P and Q; model 3's Q rows are perturbed so every
  // event involving it doubles.
  std::mt19937_64 rng(7);
  const std::size_t n = 4000;
  std::vector<std::vector<std::uint8_t>> rows(6, std::vector<std::uint8_t>(n));
  std::bernoulli_distribution coin(0.6);
  for (auto& r : rows) for (auto& b : r) b = coin(rng);
  std::vector<std::string> names{"m0", "m1", "m2", "m3", "m4", "m5"};
  auto mp = CorrectnessMatrix::from_rows("P", names, rows);
  auto qrows = rows;
  // Flip correctness of model 3 on half of the examples.
  for (std::size_t e = 0; e < n; e += 2) qrows[3][e] = 1 - qrows[3][e];
  auto mq = CorrectnessMatrix::from_rows("Q", names, qrows);
  auto r = check_closeness(mp, mq, ClosenessParams{0.2, 0.2, 0.0, 0.0});
  auto top = outlier_models(r, 0);
  ASSERT_FALSE(top.empty());
  EXPECT_EQ(top.front(), "m3");
}
