#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "collab/closeness.hpp"
#include "collab/corrdata.hpp"
#include "collab/triplet.hpp"

namespace collab {

class GridBoundCache;

/// One model's accuracy on the source (P) and shifted (Q) distribution.
struct AccuracyPoint {
  double mu_p = 0.0;
  double mu_q = 0.0;
};

/// q = slope * p + intercept.
struct Line {
  double slope = 0.0;
  double intercept = 0.0;

  double operator()(double mu_p) const { return slope * mu_p + intercept; }
  /// Throws DegenerateError when a.mu_p == b.mu_p.
  static Line through(AccuracyPoint a, AccuracyPoint b);
};

/// |l(mid.mu_p) - mid.mu_q| where l passes through `lo` and `hi`.
/// Residuals are vertical (along mu_q). Throws DegenerateError when
/// lo.mu_p == hi.mu_p.
double residual_from_accuracies(AccuracyPoint lo, AccuracyPoint mid, AccuracyPoint hi);

/// The same residual written in the cells of the two triplet distributions.
/// Throws DegenerateError when mu3 == mu1 under P.
double residual_from_triplets(const TripletDistribution& p, const TripletDistribution& q);

/// Line parallel to l(lo, hi) through the midpoints of lo-mid and mid-hi.
/// All three points sit at half the residual from it.
Line halving_line(AccuracyPoint lo, AccuracyPoint mid, AccuracyPoint hi);

struct BoundReport {
  std::array<std::size_t, 3> triple{};  ///< model indices, when known
  double bound_value = 0.0;
  double halved_value = 0.0;
  std::optional<Line> line;  ///< through the outer models, when known
};

/// Worst-case residual of the middle model for an ordered triple whose Q is
/// (delta1, delta2, nu1, nu2)-close to P:
///
///   (d1 + d2)/2 * 2 (mk - mj)(mj - mi)/(mk - mi) + max(nu1, nu2)
///     + (1 + max(mk - mj, mj - mi)/(mk - mi)) * nu2.
///
/// Requires mi <= mj <= mk with mi < mk, and single-segment params with
/// coverage 1 (ValidationError otherwise; DegenerateError for mi == mk).
BoundReport prop1_bound(double mu_i, double mu_j, double mu_k, const ClosenessParams& params);

/// As above for models i, j, k of `pairs`; also records the line through
/// the outer models' (mu_p, mu_q) points.
BoundReport prop1_bound(const AccuracyPairSet& pairs, std::size_t i, std::size_t j,
                        std::size_t k, const ClosenessParams& params);

/// Residual bound for any model inside [mu_min, mu_max]:
/// 25/64 (mu_max - mu_min)(d1 + d2)/2 + 3 max(nu1, nu2).
double corollary_bound(double mu_min, double mu_max, const ClosenessParams& params);

struct BandOptions {
  double zeta = 0.0;
  double p_grid_step = 0.01;
  std::size_t q_grid_points = 5;
  bool q_dominance = true;
  GridBoundCache* cache = nullptr;  ///< shared memo for zeta > 0; a private one if null
  std::size_t threads = 0;          ///< 0 = thread_count()
};

struct BandPoint {
  double mu_p = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  /// lower > upper: the anchors cannot all hold under these params.
  bool empty() const { return lower > upper; }
};

/// Range of mu_q a model with accuracy mu_p can have, given the anchors.
///
/// Every anchor pair (a, b) with a.mu_p <= mu <= b.mu_p contributes
/// l_ab(mu) +- B(a.mu_p, mu, b.mu_p) and the contributions are intersected.
/// B is prop1_bound when zeta == 0. For zeta > 0 it is the grid maximum of
/// max_residual_grid, raised to the ordered bound where that is larger since
/// the zeta > 0 region contains the ordered one. A grid point equal to an
/// anchor's mu_p collapses to that anchor's mu_q.
///
/// Anchors must be sorted by mu_p (at least two, distinct outer mu_p) and
/// every grid value inside their hull; ValidationError otherwise.
std::vector<BandPoint> feasible_band(std::span<const AccuracyPoint> anchors,
                                     const ClosenessParams& params,
                                     std::span<const double> grid,
                                     const BandOptions& options = {});

/// The lower edge of feasible_band.
std::vector<double> lower_bound_curve(std::span<const AccuracyPoint> anchors,
                                      const ClosenessParams& params,
                                      std::span<const double> grid,
                                      const BandOptions& options = {});

}  // namespace collab
