#include "collab/trends.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "collab/errors.hpp"
#include "collab/normal.hpp"

namespace collab {
namespace {

struct Scores {
  std::vector<double> residuals;
  double max_abs = 0.0;
  double r_squared = 1.0;
};

Scores score(const std::vector<double>& y, const std::vector<double>& fitted) {
  Scores s;
  s.residuals.resize(y.size());
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(y.size());
  double ss_res = 0.0;
  double ss_tot = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    s.residuals[i] = y[i] - fitted[i];
    s.max_abs = std::max(s.max_abs, std::abs(s.residuals[i]));
    ss_res += s.residuals[i] * s.residuals[i];
    ss_tot += (y[i] - mean) * (y[i] - mean);
  }
  if (ss_tot > 0.0) {
    s.r_squared = 1.0 - ss_res / ss_tot;
  } else {
    s.r_squared = ss_res <= 1e-24 ? 1.0 : 0.0;
  }
  return s;
}

// Returns (slope, intercept).
std::pair<double, double> line_fit(const std::vector<double>& x, const std::vector<double>& y,
                                   std::size_t first, std::size_t last) {
  const double n = static_cast<double>(last - first);
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = first; i < last; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = first; i < last; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw DegenerateError("cannot fit a line: all mu_p values are equal");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

void check_pairs(const AccuracyPairSet& pairs) {
  pairs.validate();
  if (pairs.size() < 2) throw DegenerateError("a trend fit needs at least two models");
}

FitReport linear_report(const AccuracyPairSet& pairs, FitKind kind) {
  FitReport r;
  r.kind = kind;
  r.model_names = pairs.model_names;
  const auto [slope, intercept] = line_fit(pairs.mu_p, pairs.mu_q, 0, pairs.size());
  r.segments.push_back({slope, intercept, pairs.mu_p.front(), pairs.mu_p.back()});
  return r;
}

void fill_scores(FitReport& r, const AccuracyPairSet& pairs) {
  std::vector<double> fitted(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) fitted[i] = r.predict(pairs.mu_p[i]);
  auto s = score(pairs.mu_q, fitted);
  r.residuals = std::move(s.residuals);
  r.max_residual = s.max_abs;
  r.r_squared = s.r_squared;
}

}  // namespace

std::string_view to_string(FitKind kind) {
  switch (kind) {
    case FitKind::linear: return "linear";
    case FitKind::probit: return "probit";
    case FitKind::piecewise: return "piecewise";
  }
  return "unknown";
}

double FitReport::predict(double mu_p) const {
  if (segments.empty()) throw std::logic_error("FitReport has no segments");
  if (kind == FitKind::probit) {
    const auto& s = segments.front();
    return normal_cdf(s.slope * inverse_normal_cdf(mu_p) + s.intercept);
  }
  const auto& s = (segments.size() == 2 && knot_mu_p && mu_p > *knot_mu_p) ? segments[1]
                                                                           : segments[0];
  return s.slope * mu_p + s.intercept;
}

FitReport ols_fit(const AccuracyPairSet& pairs) {
  check_pairs(pairs);
  auto r = linear_report(pairs, FitKind::linear);
  fill_scores(r, pairs);
  return r;
}

FitReport probit_fit(const AccuracyPairSet& pairs) {
  check_pairs(pairs);
  AccuracyPairSet z = pairs;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    z.mu_p[i] = inverse_normal_cdf(pairs.mu_p[i]);
    z.mu_q[i] = inverse_normal_cdf(pairs.mu_q[i]);
  }
  FitReport r;
  r.kind = FitKind::probit;
  r.model_names = pairs.model_names;
  const auto [slope, intercept] = line_fit(z.mu_p, z.mu_q, 0, z.size());
  r.segments.push_back({slope, intercept, z.mu_p.front(), z.mu_p.back()});

  std::vector<double> fitted(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) fitted[i] = slope * z.mu_p[i] + intercept;
  auto s = score(z.mu_q, fitted);
  r.probit_residuals = std::move(s.residuals);
  r.probit_max_residual = s.max_abs;
  r.probit_r_squared = s.r_squared;
  fill_scores(r, pairs);
  return r;
}

FitReport piecewise_fit(const AccuracyPairSet& pairs, std::size_t switch_index,
                        const PiecewiseOptions& options) {
  check_pairs(pairs);
  const std::size_t h = pairs.size();
  if (switch_index < 2 || switch_index + 2 > h) {
    throw ValidationError("piecewise fit needs at least two models on each side of the knot (h = " +
                          std::to_string(h) + ", switch = " + std::to_string(switch_index) + ")");
  }
  const auto& x = pairs.mu_p;
  const auto& y = pairs.mu_q;
  const double knot = x[switch_index - 1];

  FitReport r;
  r.kind = FitKind::piecewise;
  r.model_names = pairs.model_names;
  r.knot_rank = switch_index;
  r.knot_mu_p = knot;
  r.continuous = options.continuous || options.equal_slopes;

  if (options.equal_slopes) {
    const auto [slope, intercept] = line_fit(x, y, 0, h);
    r.segments = {{slope, intercept, x.front(), knot}, {slope, intercept, knot, x.back()}};
  } else if (options.continuous) {
    // Hinge basis [1, x, max(0, x - knot)].
    Eigen::MatrixXd a(static_cast<Eigen::Index>(h), 3);
    Eigen::VectorXd b(static_cast<Eigen::Index>(h));
    for (std::size_t i = 0; i < h; ++i) {
      const auto row = static_cast<Eigen::Index>(i);
      a(row, 0) = 1.0;
      a(row, 1) = x[i];
      a(row, 2) = std::max(0.0, x[i] - knot);
      b(row) = y[i];
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    if (qr.rank() < 3) {
      throw DegenerateError("hinge fit is rank deficient: too few distinct mu_p on one side");
    }
    const Eigen::Vector3d c = qr.solve(b);
    r.segments = {{c(1), c(0), x.front(), knot}, {c(1) + c(2), c(0) - c(2) * knot, knot, x.back()}};
  } else {
    const auto [ls, li] = line_fit(x, y, 0, switch_index);
    const auto [rs, ri] = line_fit(x, y, switch_index, h);
    r.segments = {{ls, li, x.front(), knot}, {rs, ri, x[switch_index], x.back()}};
  }
  fill_scores(r, pairs);
  return r;
}

FitComparison compare_fits(const AccuracyPairSet& pairs, std::size_t switch_index) {
  FitComparison c{ols_fit(pairs), probit_fit(pairs), piecewise_fit(pairs, switch_index)};
  c.r2_probit_minus_linear = c.probit.r_squared - c.linear.r_squared;
  c.r2_piecewise_minus_linear = c.piecewise.r_squared - c.linear.r_squared;
  c.r2_piecewise_minus_probit = c.piecewise.r_squared - c.probit.r_squared;
  return c;
}

}  // namespace collab
