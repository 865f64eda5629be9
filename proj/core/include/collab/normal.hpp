#pragma once

namespace collab {

/// Standard normal CDF, 0.5 * erfc(-z / sqrt(2)).
double normal_cdf(double z);

/// Inverse standard normal CDF.
///
/// Inputs in [0, 1] are clipped to [1e-7, 1 - 1e-7] (with a warning when a
/// value actually moves); |normal_cdf(result) - p| <= 1e-9 on that range.
/// Throws ValidationError for p outside [0, 1] or NaN.
double inverse_normal_cdf(double p);

/// Smallest and largest probability inverse_normal_cdf accepts unclipped.
inline constexpr double kProbitClip = 1e-7;

}  // namespace collab
