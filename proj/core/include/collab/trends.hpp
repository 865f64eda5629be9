#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "collab/corrdata.hpp"

namespace collab {

enum class FitKind { linear, probit, piecewise };

std::string_view to_string(FitKind kind);

/// y = slope * x + intercept on [x_min, x_max]. For probit fits x and y are
/// probit coordinates.
struct FitSegment {
  double slope = 0.0;
  double intercept = 0.0;
  double x_min = 0.0;
  double x_max = 0.0;
};

struct FitReport {
  FitKind kind = FitKind::linear;
  std::vector<FitSegment> segments;  ///< one, or (left, right) for piecewise
  std::optional<std::size_t> knot_rank;  ///< 1-based rank by mu_p
  std::optional<double> knot_mu_p;
  bool continuous = true;

  std::vector<std::string> model_names;
  std::vector<double> residuals;  ///< mu_q - fitted, probability units
  double max_residual = 0.0;
  double r_squared = 1.0;  ///< probability units

  // Probit fits only: the same figures in probit coordinates.
  std::optional<double> probit_r_squared;
  std::optional<double> probit_max_residual;
  std::vector<double> probit_residuals;

  /// Fitted mu_q at `mu_p`.
  double predict(double mu_p) const;
};

/// Least-squares line. Throws DegenerateError when every mu_p is the same.
FitReport ols_fit(const AccuracyPairSet& pairs);

/// Line through (inv_phi(mu_p), inv_phi(mu_q)); residuals are reported both
/// in probit units and in probability units for phi(a inv_phi(mu) + b).
FitReport probit_fit(const AccuracyPairSet& pairs);

struct PiecewiseOptions {
  bool continuous = true;     ///< hinge; false fits each side on its own
  bool equal_slopes = false;  ///< both segments share one line (plain OLS)
};

/// Two-segment fit with the knot at the mu_p of the `switch_index`-th least
/// accurate model. The left side holds ranks 1..switch_index, the right side
/// the rest; each needs at least two models (ValidationError otherwise).
FitReport piecewise_fit(const AccuracyPairSet& pairs, std::size_t switch_index,
                        const PiecewiseOptions& options = {});

struct FitComparison {
  FitReport linear;
  FitReport probit;
  FitReport piecewise;
  double r2_probit_minus_linear = 0.0;
  double r2_piecewise_minus_linear = 0.0;
  double r2_piecewise_minus_probit = 0.0;
};

FitComparison compare_fits(const AccuracyPairSet& pairs, std::size_t switch_index);

}  // namespace collab
