#include "collab/triplet.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "collab/errors.hpp"

namespace collab {

double TripletDistribution::cell(unsigned pattern) const {
  return const_cast<TripletDistribution*>(this)->cell(pattern);
}

double& TripletDistribution::cell(unsigned pattern) {
  switch (pattern) {
    case 0b000: return p_none;
    case 0b001: return p3;
    case 0b010: return p2;
    case 0b011: return p23;
    case 0b100: return p1;
    case 0b101: return p13;
    case 0b110: return p12;
    case 0b111: return p123;
    default: throw std::out_of_range("triplet sign pattern must be in [0, 8)");
  }
}

std::array<double, 8> TripletDistribution::cells() const {
  std::array<double, 8> out{};
  for (unsigned s = 0; s < 8; ++s) out[s] = cell(s);
  return out;
}

TripletDistribution TripletDistribution::from_cells(const std::array<double, 8>& by_pattern) {
  TripletDistribution t;
  for (unsigned s = 0; s < 8; ++s) t.cell(s) = by_pattern[s];
  return t;
}

bool TripletDistribution::is_valid(double tol) const {
  for (unsigned s = 0; s < 8; ++s) {
    const double v = cell(s);
    if (!std::isfinite(v) || v < 0.0) return false;
  }
  return std::abs(sum() - 1.0) <= tol;
}

void TripletDistribution::validate(double tol) const {
  if (!is_valid(tol)) throw ValidationError("invalid triplet distribution " + to_string());
}

double TripletDistribution::dominance(int a, int b) const {
  if (a < 1 || a > 3 || b < 1 || b > 3) throw std::out_of_range("model must be 1, 2 or 3");
  if (a == b) return 0.0;
  const unsigned bit_a = 1U << (3 - a);
  const unsigned bit_b = 1U << (3 - b);
  double total = 0.0;
  for (unsigned s = 0; s < 8; ++s) {
    if ((s & bit_a) && !(s & bit_b)) total += cell(s);
  }
  return total;
}

std::string TripletDistribution::to_string() const {
  std::ostringstream os;
  os << "{p123=" << p123 << ", p12=" << p12 << ", p13=" << p13 << ", p23=" << p23
     << ", p1=" << p1 << ", p2=" << p2 << ", p3=" << p3 << ", p_none=" << p_none << '}';
  return os.str();
}

std::string pattern_string(unsigned pattern) {
  std::string s(3, '-');
  if (pattern & 0b100) s[0] = '+';
  if (pattern & 0b010) s[1] = '+';
  if (pattern & 0b001) s[2] = '+';
  return s;
}

}  // namespace collab
