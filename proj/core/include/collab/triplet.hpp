#pragma once

#include <array>
#include <string>

namespace collab {

/// Joint correctness distribution of an ordered model triple (f1, f2, f3).
///
/// Each field is the probability of the event on which exactly the listed
/// models are correct: `p13` is P(f1 right, f2 wrong, f3 right), `p_none` is
/// P(all three wrong).
///
/// Cells are also addressable by a 3-bit sign pattern: bit 2 is f1, bit 1 is
/// f2, bit 0 is f3, a set bit meaning "correct". So pattern 0b111 is p123 and
/// 0b011 is p23.
struct TripletDistribution {
  double p123 = 0.0;
  double p12 = 0.0;
  double p13 = 0.0;
  double p23 = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;
  double p3 = 0.0;
  double p_none = 0.0;

  double mu1() const { return p1 + p12 + p13 + p123; }
  double mu2() const { return p2 + p12 + p23 + p123; }
  double mu3() const { return p3 + p13 + p23 + p123; }
  double sum() const { return p123 + p12 + p13 + p23 + p1 + p2 + p3 + p_none; }

  double cell(unsigned pattern) const;
  double& cell(unsigned pattern);

  /// Cells indexed by sign pattern.
  std::array<double, 8> cells() const;
  static TripletDistribution from_cells(const std::array<double, 8>& by_pattern);

  /// True when every cell is nonnegative and the cells sum to 1 within `tol`.
  bool is_valid(double tol = 1e-12) const;
  /// Throws ValidationError when !is_valid(tol).
  void validate(double tol = 1e-12) const;

  /// p1 = p2 = p12 = p13 = 0: every pairwise dominance probability vanishes.
  bool is_ordered() const { return p1 == 0.0 && p2 == 0.0 && p12 == 0.0 && p13 == 0.0; }

  /// P(model a correct, model b wrong) for a, b in {1, 2, 3}.
  double dominance(int a, int b) const;

  std::string to_string() const;
};

/// Pattern string for three models, '+' for correct, e.g. 0b110 -> "++-".
std::string pattern_string(unsigned pattern);

}  // namespace collab
