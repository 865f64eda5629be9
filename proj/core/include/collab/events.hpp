#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "collab/corrdata.hpp"
#include "collab/triplet.hpp"

namespace collab {

/// Exact counts over the examples of one matrix for a model pair.
struct PairCounts {
  std::size_t n = 0;
  std::size_t correct_i = 0;
  std::size_t correct_j = 0;
  std::size_t i_not_j = 0;  ///< i right, j wrong
  std::size_t j_not_i = 0;  ///< j right, i wrong
  std::size_t agree = 0;    ///< both right or both wrong
};

PairCounts pair_counts(const CorrectnessMatrix& m, std::size_t i, std::size_t j);

/// P(lower-accuracy model right, higher-accuracy model wrong).
///
/// The pair is oriented so that the first model has the lower accuracy (ties
/// keep the caller's order); if the caller passed it the other way round the
/// pair is swapped and a notice goes through warn(). i == j yields 0.
double dominance_probability(const CorrectnessMatrix& m, std::size_t i, std::size_t j);

/// P(1(f_i correct) == 1(f_j correct)).
double similarity(const CorrectnessMatrix& m, std::size_t i, std::size_t j);

/// Integer cell counts for a triple, indexed by the sign pattern of
/// TripletDistribution (bit 2 = first model).
struct TripletCounts {
  std::size_t n = 0;
  std::array<std::size_t, 8> cells{};

  TripletDistribution distribution() const;
};

TripletCounts triplet_counts(const CorrectnessMatrix& m, std::size_t i, std::size_t j,
                             std::size_t k);
TripletDistribution triplet_events(const CorrectnessMatrix& m, std::size_t i, std::size_t j,
                                   std::size_t k);

/// One non-unanimous triplet event evaluated under both distributions.
struct TripletPoint {
  std::uint32_t i = 0;
  std::uint32_t j = 0;
  std::uint32_t k = 0;
  std::uint8_t pattern = 0;  ///< bit 2 = model i, bit 1 = j, bit 0 = k; set = correct
  double p = 0.0;
  double q = 0.0;

  std::string pattern_string() const;
};

/// The six sign patterns that enter the closeness wedge, in the emission
/// order "++-", "+-+", "+--", "-++", "-+-", "--+".
inline constexpr std::array<std::uint8_t, 6> kWedgePatterns = {0b110, 0b101, 0b100,
                                                               0b011, 0b010, 0b001};

/// 6 * C(h, 3).
std::uint64_t triplet_point_count(std::size_t h);

using TripletPointSink = std::function<void(const TripletPoint&)>;

/// Streams every (i < j < k, pattern) point of two aligned matrices to `sink`
/// in lexicographic (i, j, k, pattern) order. Work is spread over `threads`
/// workers, but emission order never depends on the schedule.
///
/// Throws ValidationError unless both matrices list the same models in the
/// same order and h >= 3.
void enumerate_triplet_points(const CorrectnessMatrix& mp, const CorrectnessMatrix& mq,
                              const TripletPointSink& sink, std::size_t threads = 0);

std::vector<TripletPoint> collect_triplet_points(const CorrectnessMatrix& mp,
                                                 const CorrectnessMatrix& mq,
                                                 std::size_t threads = 0);

/// CSV `i,j,k,pattern,p,q`.
void write_points_csv_header(std::ostream& out);
void write_point_csv(std::ostream& out, const TripletPoint& pt);

struct DominanceEntry {
  std::size_t lower = 0;   ///< model with the lower accuracy
  std::size_t higher = 0;  ///< model with the higher accuracy
  double gap = 0.0;        ///< mu_higher - mu_lower
  double dominance = 0.0;
  double similarity = 0.0;
};

struct DominanceReport {
  std::vector<std::string> model_names;
  std::vector<double> accuracies;
  std::vector<DominanceEntry> entries;  ///< all C(h, 2) pairs, ordered by (min index, max index)
  double zeta_max = 0.0;
  double threshold = 0.05;
  double fraction_below = 1.0;  ///< share of entries with dominance < threshold
};

DominanceReport dominance_table(const CorrectnessMatrix& m, double threshold = 0.05);

}  // namespace collab
