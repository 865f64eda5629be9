#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "collab/events.hpp"

namespace collab {

/// Looser upper bound used only for events with P(A) below `threshold`.
struct LowProbabilitySegment {
  double threshold = 0.0;
  double delta2 = 0.0;
  double nu2 = 0.0;

  friend bool operator==(const LowProbabilitySegment&, const LowProbabilitySegment&) = default;
};

/// Wedge of admissible (P(A), Q(A)) pairs:
///   -nu1 + (1 - delta1) p  <=  q  <=  nu2 + (1 + delta2) p.
struct ClosenessParams {
  double delta1 = 0.0;
  double delta2 = 0.0;
  double nu1 = 0.0;
  double nu2 = 0.0;
  double coverage = 1.0;  ///< share of events the wedge was fitted to contain
  std::optional<LowProbabilitySegment> low_segment;

  /// Throws ValidationError for negative or non-finite entries, or coverage outside (0, 1].
  void validate() const;

  double lower_bound(double p) const { return -nu1 + (1.0 - delta1) * p; }
  double upper_bound(double p) const;
  bool admits(double p, double q) const { return lower_bound(p) <= q && q <= upper_bound(p); }

  /// Largest slope of the upper bound over both segments.
  double max_upper_slope() const;
  /// The single-segment wedge with coverage 1, i.e. the same lines read as exact.
  ClosenessParams as_exact_wedge() const;

  friend bool operator==(const ClosenessParams&, const ClosenessParams&) = default;
};

struct ViolationReport {
  std::vector<std::string> model_names;
  std::size_t total = 0;
  std::size_t violating = 0;
  std::vector<TripletPoint> violations;
  std::vector<std::size_t> per_model;  ///< each violation counts once for each model of its triple
  double coverage = 1.0;               ///< 1 - violating / total
};

/// Streaming accumulator behind check_closeness.
class ClosenessChecker {
 public:
  ClosenessChecker(std::vector<std::string> model_names, ClosenessParams params);

  void add(const TripletPoint& pt);
  ViolationReport finish() &&;

 private:
  ClosenessParams params_;
  ViolationReport report_;
};

ViolationReport check_closeness(std::span<const TripletPoint> points,
                                std::vector<std::string> model_names,
                                const ClosenessParams& params);

/// Enumerates the points of two aligned matrices and checks them on the fly.
ViolationReport check_closeness(const CorrectnessMatrix& mp, const CorrectnessMatrix& mq,
                                const ClosenessParams& params);

struct WedgeFitOptions {
  /// Intercept grid scanned on each side.
  std::vector<double> nu_grid = default_nu_grid();

  static std::vector<double> default_nu_grid();  ///< {0, 0.001, ..., 0.02}
};

/// Smallest wedge holding at least `coverage` of the points.
///
/// Each side is fitted on its own: for every intercept on the grid the
/// slope deviation needed by each point is computed, the ceil(coverage * N)-th
/// smallest is taken, and the (delta, nu) pair enclosing the least area
/// between its line and the diagonal over [0, max p] wins (ties go to the
/// smaller nu). If the two sides together cover less than `coverage`, the
/// per-side order statistic is raised until they do.
///
/// Throws ValidationError on an empty point set or invalid coverage, and
/// DegenerateError when no intercept on the grid admits enough points.
ClosenessParams fit_wedge(std::span<const TripletPoint> points, double coverage,
                          const WedgeFitOptions& options = {});

/// Models with more than `threshold` violations, most violations first
/// (ties in model order).
std::vector<std::string> outlier_models(const ViolationReport& report, std::size_t threshold);

}  // namespace collab
