#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <mutex>
#include <string>
#include <tuple>
#include <vector>

#include "collab/closeness.hpp"
#include "collab/triplet.hpp"

namespace collab {

/// Worst-case residual search for an approximately ordered triple.
///
/// The six P cells p1, p2, p3, p12, p13, p23 are gridded with p1, p2, p12 and
/// p13 on multiples of `p_grid_step`; p23 and p3 follow from the accuracy gaps
/// and p123 from mu1, so the accuracies are met exactly. Every P point must
/// satisfy the pairwise dominance limits p1 + p12, p1 + p13, p2 + p12 <= zeta.
/// Each Q cell then takes `q_grid_points` equally spaced values inside its
/// wedge interval [max(0, lower(p)), upper(p)].
struct GridSearchConfig {
  double zeta = 0.0;
  std::array<double, 3> mu{};  ///< mu1 <= mu2 <= mu3, mu1 < mu3
  ClosenessParams params;
  double p_grid_step = 0.01;
  std::size_t q_grid_points = 5;
  /// Also hold the Q cells to q1 + q12, q1 + q13, q2 + q12 <= zeta.
  bool q_dominance = true;
  std::size_t threads = 0;  ///< 0 = thread_count()

  /// Throws ValidationError or DegenerateError for unusable configurations.
  void validate() const;
};

struct GridSearchResult {
  double max_value = 0.0;
  /// max_value plus Lipschitz slack for the P-grid spacing and the Q-grid spacing.
  double certified_upper = 0.0;
  TripletDistribution p;  ///< witness
  TripletDistribution q;  ///< witness; q123 and q_none filled to make a distribution
  std::size_t p_points = 0;  ///< feasible P grid points visited
  std::size_t q_points = 0;  ///< feasible Q grid points visited
};

/// Grid maximum of the residual. Ties go to the first point in lexicographic
/// order of the P indices (p1, p2, p12, p13) and then the Q indices
/// (q1, q12, q13, q2, q23, q3), so the result does not depend on threads.
///
/// Throws InfeasibleError when no grid point satisfies the constraints. For a
/// config that passes validate() this cannot happen, since the ordered point
/// p1 = p2 = p12 = p13 = 0 is always feasible; the check stays as a guard.
GridSearchResult max_residual_grid(const GridSearchConfig& cfg);

/// max_residual_grid(cfg).max_value / 2, the guarantee for the shifted line.
double halved_bound(const GridSearchConfig& cfg);

/// Lists every constraint of `cfg` the witness pair breaks (empty = valid).
std::vector<std::string> witness_violations(const GridSearchConfig& cfg,
                                            const TripletDistribution& p,
                                            const TripletDistribution& q, double tol = 1e-9);

/// Thread-safe memo of grid searches keyed by the full configuration.
class GridBoundCache {
 public:
  double max_value(const GridSearchConfig& cfg);
  std::size_t size() const;
  std::size_t hits() const;

 private:
  using Key = std::tuple<long long, long long, long long, long long, long long, long long,
                         long long, long long, long long, std::size_t, bool, std::string>;
  static Key key_for(const GridSearchConfig& cfg);

  mutable std::mutex mutex_;
  std::map<Key, double> values_;
  std::size_t hits_ = 0;
};

}  // namespace collab
