#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "collab/diagnostics.hpp"
#include "collab/errors.hpp"
#include "collab/normal.hpp"
#include "collab/trends.hpp"
#include "oracles.hpp"

using namespace collab;

namespace {

AccuracyPairSet make_pairs(std::vector<double> x, std::vector<double> y) {
  AccuracyPairSet s;
  for (std::size_t i = 0; i < x.size(); ++i) s.model_names.push_back("m" + std::to_string(i));
  s.mu_p = std::move(x);
  s.mu_q = std::move(y);
  return s;
}

std::vector<double> spread(std::size_t n, double lo, double hi) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = lo + (hi - lo) * double(i) / double(n - 1);
  return v;
}

}  // namespace

TEST(Ols, Collinear) {
  auto r = ols_fit(make_pairs({0.1, 0.3, 0.5, 0.7}, {0.2, 0.3, 0.4, 0.5}));
  EXPECT_NEAR(r.segments[0].slope, 0.5, 1e-12);
  EXPECT_NEAR(r.segments[0].intercept, 0.15, 1e-12);
  EXPECT_NEAR(r.max_residual, 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(r.r_squared, 1.0);
}

TEST(Ols, TwoPointsInterpolate) {
  auto r = ols_fit(make_pairs({0.2, 0.6}, {0.9, 0.1}));
  EXPECT_NEAR(r.predict(0.2), 0.9, 1e-12);
  EXPECT_NEAR(r.predict(0.6), 0.1, 1e-12);
  EXPECT_NEAR(r.r_squared, 1.0, 1e-12);
}

TEST(Ols, PlantedLineRecovery) {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> noise(-0.01, 0.01);
  auto x = spread(50, 0.3, 0.9);
  std::vector<double> y;
  for (double v : x) y.push_back(0.9 * v - 0.05 + noise(rng));
  auto r = ols_fit(make_pairs(x, y));
  EXPECT_NEAR(r.segments[0].slope, 0.9, 0.05);
  EXPECT_NEAR(std::accumulate(r.residuals.begin(), r.residuals.end(), 0.0), 0.0, 1e-10);
  EXPECT_LE(r.r_squared, 1.0);
}

TEST(Ols, Degenerate) {
  EXPECT_THROW(ols_fit(make_pairs({0.5, 0.5, 0.5}, {0.1, 0.2, 0.3})), DegenerateError);
  EXPECT_THROW(ols_fit(make_pairs({0.5}, {0.1})), DegenerateError);
}

TEST(InverseNormal, KnownValues) {
  EXPECT_EQ(inverse_normal_cdf(0.5), 0.0);
  EXPECT_NEAR(inverse_normal_cdf(0.975), 1.959964, 1e-5);
  EXPECT_NEAR(inverse_normal_cdf(0.975), oracle::bisect_inverse_normal(0.975), 1e-12);
}

TEST(InverseNormal, Antisymmetric) {
  for (int i = 1; i < 100; ++i) {
    const double p = i / 200.0;
    EXPECT_NEAR(inverse_normal_cdf(p), -inverse_normal_cdf(1.0 - p), 1e-12);
  }
}

TEST(InverseNormal, RoundTripAgainstBisection) {
  for (int i = 0; i < 10000; ++i) {
    const double p = kProbitClip + (1.0 - 2 * kProbitClip) * (i + 0.5) / 10000.0;
    const double z = inverse_normal_cdf(p);
    ASSERT_NEAR(normal_cdf(z), p, 1e-9) << p;
    ASSERT_NEAR(z, oracle::bisect_inverse_normal(p), 1e-9) << p;
  }
}

TEST(InverseNormal, ClipsWithWarningAndRejectsNonProbabilities) {
  int warnings = 0;
  ScopedWarningHandler guard([&](std::string_view) { ++warnings; });
  EXPECT_EQ(inverse_normal_cdf(0.0), inverse_normal_cdf(kProbitClip));
  EXPECT_EQ(inverse_normal_cdf(1.0), inverse_normal_cdf(1.0 - kProbitClip));
  EXPECT_EQ(warnings, 2);
  EXPECT_THROW(inverse_normal_cdf(-0.1), ValidationError);
  EXPECT_THROW(inverse_normal_cdf(1.1), ValidationError);
  EXPECT_THROW(inverse_normal_cdf(std::nan("")), ValidationError);
}

TEST(Probit, ModelMatchedData) {
  auto x = spread(30, 0.2, 0.95);
  std::vector<double> y;
  for (double v : x) y.push_back(normal_cdf(1.3 * inverse_normal_cdf(v) - 0.4));
  auto r = probit_fit(make_pairs(x, y));
  EXPECT_LE(r.max_residual, 1e-7);
  EXPECT_NEAR(*r.probit_r_squared, 1.0, 1e-12);
}

TEST(Probit, IdentityData) {
  auto x = spread(10, 0.1, 0.9);
  auto r = probit_fit(make_pairs(x, x));
  EXPECT_NEAR(r.segments[0].slope, 1.0, 1e-12);
  EXPECT_NEAR(r.segments[0].intercept, 0.0, 1e-12);
  EXPECT_NEAR(r.max_residual, 0.0, 1e-12);
  EXPECT_NEAR(*r.probit_max_residual, 0.0, 1e-12);
  for (double v : x) EXPECT_NEAR(r.predict(v), v, 1e-12);
}

TEST(Probit, PlantedRecovery) {
  auto x = spread(50, 0.3, 0.95);
  std::vector<double> y;
  for (double v : x) y.push_back(normal_cdf(0.9 * inverse_normal_cdf(v) - 0.3));
  auto r = probit_fit(make_pairs(x, y));
  EXPECT_NEAR(r.segments[0].slope, 0.9, 1e-6);
  EXPECT_NEAR(r.segments[0].intercept, -0.3, 1e-6);
}

TEST(Piecewise, ExactHinge) {
  auto x = spread(12, 0.3, 0.9);
  const double knot = x[5];
  std::vector<double> y;
  for (double v : x) y.push_back(v <= knot ? 0.5 * v : 0.5 * knot + 1.1 * (v - knot));
  auto r = piecewise_fit(make_pairs(x, y), 6);
  EXPECT_NEAR(r.max_residual, 0.0, 1e-12);
  EXPECT_EQ(*r.knot_rank, 6u);
  EXPECT_EQ(*r.knot_mu_p, knot);
  EXPECT_NEAR(r.segments[0].slope, 0.5, 1e-10);
  EXPECT_NEAR(r.segments[1].slope, 1.1, 1e-10);
}

TEST(Piecewise, ContinuousAtKnot) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto x = spread(20, 0.1, 0.9);
  std::vector<double> y;
  for (double v : x) y.push_back(v + 0.05 * u(rng));
  auto r = piecewise_fit(make_pairs(x, y), 8);
  const double k = *r.knot_mu_p;
  EXPECT_NEAR(r.segments[0].slope * k + r.segments[0].intercept,
              r.segments[1].slope * k + r.segments[1].intercept, 1e-12);
}

TEST(Piecewise, CollinearMatchesOls) {
  auto x = spread(10, 0.2, 0.8);
  std::vector<double> y;
  for (double v : x) y.push_back(0.7 * v + 0.1);
  auto pairs = make_pairs(x, y);
  auto r = piecewise_fit(pairs, 4);
  auto ols = ols_fit(pairs);
  for (const auto& s : r.segments) {
    EXPECT_NEAR(s.slope, ols.segments[0].slope, 1e-10);
    EXPECT_NEAR(s.intercept, ols.segments[0].intercept, 1e-10);
  }
  EXPECT_NEAR(r.r_squared, ols.r_squared, 1e-12);
}

TEST(Piecewise, EqualSlopesIsOls) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 0.1);
  auto x = spread(15, 0.2, 0.8);
  std::vector<double> y;
  for (double v : x) y.push_back(v * v + u(rng));
  auto pairs = make_pairs(x, y);
  auto r = piecewise_fit(pairs, 5, {true, true});
  auto ols = ols_fit(pairs);
  EXPECT_EQ(r.r_squared, ols.r_squared);
  EXPECT_EQ(r.residuals, ols.residuals);
}

TEST(Piecewise, FreeSegments) {
  auto x = spread(10, 0.2, 0.8);
  std::vector<double> y;
  for (std::size_t i = 0; i < x.size(); ++i) y.push_back(i < 4 ? x[i] : x[i] + 0.2);
  auto r = piecewise_fit(make_pairs(x, y), 4, {false, false});
  EXPECT_FALSE(r.continuous);
  EXPECT_NEAR(r.max_residual, 0.0, 1e-12);
}

TEST(Piecewise, PlantedHingeRecovery) {
  std::mt19937_64 rng(66);
  std::uniform_real_distribution<double> noise(-0.005, 0.005);
  auto x = spread(66, 0.4, 0.9);
  const double knot = x[5];
  std::vector<double> y;
  for (double v : x) y.push_back((v <= knot ? 0.5 * v : 0.5 * knot + 1.1 * (v - knot)) + noise(rng));
  auto r = piecewise_fit(make_pairs(x, y), 6);
  EXPECT_NEAR(r.segments[0].slope, 0.5, 0.05);
  EXPECT_NEAR(r.segments[1].slope, 1.1, 0.05);
}

TEST(Piecewise, TooFewPointsOnASide) {
  auto x = spread(6, 0.2, 0.8);
  auto pairs = make_pairs(x, x);
  EXPECT_THROW(piecewise_fit(pairs, 1), ValidationError);
  EXPECT_THROW(piecewise_fit(pairs, 5), ValidationError);
  EXPECT_NO_THROW(piecewise_fit(pairs, 2));
  EXPECT_NO_THROW(piecewise_fit(pairs, 4));
}

TEST(Compare, Collinear) {
  auto x = spread(12, 0.2, 0.8);
  auto c = compare_fits(make_pairs(x, x), 6);
  EXPECT_DOUBLE_EQ(c.linear.r_squared, 1.0);
  EXPECT_NEAR(c.probit.r_squared, 1.0, 1e-12);
  EXPECT_NEAR(c.piecewise.r_squared, 1.0, 1e-12);
}

TEST(Compare, ModelMatchedOrdering) {
  auto x = spread(40, 0.05, 0.95);
  std::vector<double> yp, yh;
  for (double v : x) {
    yp.push_back(normal_cdf(1.6 * inverse_normal_cdf(v) - 0.5));
    yh.push_back(v <= x[9] ? 0.3 * v : 0.3 * x[9] + 1.2 * (v - x[9]));
  }
  auto cp = compare_fits(make_pairs(x, yp), 10);
  EXPECT_GE(cp.probit.r_squared, cp.linear.r_squared);
  EXPECT_DOUBLE_EQ(cp.r2_probit_minus_linear, cp.probit.r_squared - cp.linear.r_squared);
  auto ch = compare_fits(make_pairs(x, yh), 10);
  EXPECT_GE(ch.piecewise.r_squared, ch.linear.r_squared);
}
