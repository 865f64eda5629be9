#include "collab/events.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <ostream>
#include <stdexcept>

#include "collab/diagnostics.hpp"
#include "collab/errors.hpp"
#include "collab/parallel.hpp"

namespace collab {
namespace {

std::size_t and_count(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  std::size_t c = 0;
  for (std::size_t w = 0; w < a.size(); ++w) c += static_cast<std::size_t>(std::popcount(a[w] & b[w]));
  return c;
}

std::size_t and3_count(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
                       std::span<const std::uint64_t> c) {
  std::size_t n = 0;
  for (std::size_t w = 0; w < a.size(); ++w) {
    n += static_cast<std::size_t>(std::popcount(a[w] & b[w] & c[w]));
  }
  return n;
}

void check_index(const CorrectnessMatrix& m, std::size_t i) {
  if (i >= m.n_models()) throw std::out_of_range("model index out of range");
}

// Cells from singles, pair intersections, and the triple intersection by
// inclusion-exclusion; all exact integers.
std::array<std::size_t, 8> cells_from_intersections(std::size_t n, std::size_t a, std::size_t b,
                                                    std::size_t c, std::size_t ab,
                                                    std::size_t ac, std::size_t bc,
                                                    std::size_t abc) {
  std::array<std::size_t, 8> cells{};
  cells[0b111] = abc;
  cells[0b110] = ab - abc;
  cells[0b101] = ac - abc;
  cells[0b011] = bc - abc;
  cells[0b100] = a - ab - ac + abc;
  cells[0b010] = b - ab - bc + abc;
  cells[0b001] = c - ac - bc + abc;
  cells[0b000] = n - a - b - c + ab + ac + bc - abc;
  return cells;
}

void append_double(std::string& out, double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, ptr);
}

// Precomputed pairwise intersections of one matrix.
class IntersectionTable {
 public:
  explicit IntersectionTable(const CorrectnessMatrix& m) : m_(m), h_(m.n_models()), table_(h_ * h_) {
    for (std::size_t i = 0; i < h_; ++i) {
      table_[i * h_ + i] = m.correct_count(i);
      for (std::size_t j = i + 1; j < h_; ++j) {
        const auto c = and_count(m.row(i), m.row(j));
        table_[i * h_ + j] = c;
        table_[j * h_ + i] = c;
      }
    }
  }

  std::size_t at(std::size_t i, std::size_t j) const { return table_[i * h_ + j]; }

  std::array<std::size_t, 8> cells(std::size_t i, std::size_t j, std::size_t k) const {
    const auto abc = and3_count(m_.row(i), m_.row(j), m_.row(k));
    return cells_from_intersections(m_.n_examples(), at(i, i), at(j, j), at(k, k), at(i, j),
                                    at(i, k), at(j, k), abc);
  }

 private:
  const CorrectnessMatrix& m_;
  std::size_t h_;
  std::vector<std::size_t> table_;
};

}  // namespace

PairCounts pair_counts(const CorrectnessMatrix& m, std::size_t i, std::size_t j) {
  check_index(m, i);
  check_index(m, j);
  PairCounts pc;
  pc.n = m.n_examples();
  pc.correct_i = m.correct_count(i);
  pc.correct_j = m.correct_count(j);
  const auto both = and_count(m.row(i), m.row(j));
  pc.i_not_j = pc.correct_i - both;
  pc.j_not_i = pc.correct_j - both;
  pc.agree = pc.n - pc.i_not_j - pc.j_not_i;
  return pc;
}

double dominance_probability(const CorrectnessMatrix& m, std::size_t i, std::size_t j) {
  check_index(m, i);
  check_index(m, j);
  if (i == j) return 0.0;
  const auto pc = pair_counts(m, i, j);
  std::size_t count = pc.i_not_j;
  if (pc.correct_i > pc.correct_j) {
    warn("dominance pair (" + m.model_names()[i] + ", " + m.model_names()[j] +
         ") swapped so the lower-accuracy model comes first");
    count = pc.j_not_i;
  }
  return static_cast<double>(count) / static_cast<double>(pc.n);
}

double similarity(const CorrectnessMatrix& m, std::size_t i, std::size_t j) {
  const auto pc = pair_counts(m, i, j);
  return static_cast<double>(pc.agree) / static_cast<double>(pc.n);
}

TripletDistribution TripletCounts::distribution() const {
  TripletDistribution t;
  const double denom = static_cast<double>(n);
  for (unsigned s = 0; s < 8; ++s) t.cell(s) = static_cast<double>(cells[s]) / denom;
  return t;
}

TripletCounts triplet_counts(const CorrectnessMatrix& m, std::size_t i, std::size_t j,
                             std::size_t k) {
  check_index(m, i);
  check_index(m, j);
  check_index(m, k);
  if (i == j || i == k || j == k) throw std::invalid_argument("triplet indices must be distinct");
  TripletCounts tc;
  tc.n = m.n_examples();
  tc.cells = cells_from_intersections(
      tc.n, m.correct_count(i), m.correct_count(j), m.correct_count(k),
      and_count(m.row(i), m.row(j)), and_count(m.row(i), m.row(k)),
      and_count(m.row(j), m.row(k)), and3_count(m.row(i), m.row(j), m.row(k)));
  return tc;
}

TripletDistribution triplet_events(const CorrectnessMatrix& m, std::size_t i, std::size_t j,
                                   std::size_t k) {
  return triplet_counts(m, i, j, k).distribution();
}

std::string TripletPoint::pattern_string() const { return collab::pattern_string(pattern); }

std::uint64_t triplet_point_count(std::size_t h) {
  if (h < 3) return 0;
  const std::uint64_t n = h;
  return 6 * (n * (n - 1) * (n - 2) / 6);
}

void enumerate_triplet_points(const CorrectnessMatrix& mp, const CorrectnessMatrix& mq,
                              const TripletPointSink& sink, std::size_t threads) {
  const std::size_t h = mp.n_models();
  if (mq.model_names() != mp.model_names()) {
    throw ValidationError("triplet enumeration needs matrices aligned on the same models");
  }
  if (h < 3) throw ValidationError("triplet enumeration needs at least three models");
  if (threads == 0) threads = thread_count();

  const IntersectionTable tp(mp);
  const IntersectionTable tq(mq);
  const double np = static_cast<double>(mp.n_examples());
  const double nq = static_cast<double>(mq.n_examples());

  auto points_for_first = [&](std::size_t i, std::vector<TripletPoint>& out) {
    out.clear();
    for (std::size_t j = i + 1; j < h; ++j) {
      for (std::size_t k = j + 1; k < h; ++k) {
        const auto cp = tp.cells(i, j, k);
        const auto cq = tq.cells(i, j, k);
        for (auto pattern : kWedgePatterns) {
          out.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j),
                         static_cast<std::uint32_t>(k), pattern,
                         static_cast<double>(cp[pattern]) / np,
                         static_cast<double>(cq[pattern]) / nq});
        }
      }
    }
  };

  // Batches of first indices are computed in parallel, then flushed in order.
  const std::size_t n_first = h - 2;
  const std::size_t batch = std::max<std::size_t>(1, threads);
  std::vector<std::vector<TripletPoint>> buffers(batch);
  for (std::size_t start = 0; start < n_first; start += batch) {
    const std::size_t count = std::min(batch, n_first - start);
    parallel_for(
        count, [&](std::size_t t) { points_for_first(start + t, buffers[t]); }, threads);
    for (std::size_t t = 0; t < count; ++t) {
      for (const auto& pt : buffers[t]) sink(pt);
    }
  }
}

std::vector<TripletPoint> collect_triplet_points(const CorrectnessMatrix& mp,
                                                 const CorrectnessMatrix& mq,
                                                 std::size_t threads) {
  std::vector<TripletPoint> out;
  out.reserve(triplet_point_count(mp.n_models()));
  enumerate_triplet_points(mp, mq, [&](const TripletPoint& pt) { out.push_back(pt); }, threads);
  return out;
}

void write_points_csv_header(std::ostream& out) { out << "i,j,k,pattern,p,q\n"; }

void write_point_csv(std::ostream& out, const TripletPoint& pt) {
  std::string line = std::to_string(pt.i) + ',' + std::to_string(pt.j) + ',' +
                     std::to_string(pt.k) + ',' + pt.pattern_string() + ',';
  append_double(line, pt.p);
  line += ',';
  append_double(line, pt.q);
  line += '\n';
  out << line;
}

DominanceReport dominance_table(const CorrectnessMatrix& m, double threshold) {
  const std::size_t h = m.n_models();
  if (h < 2) throw ValidationError("dominance table needs at least two models");

  DominanceReport report;
  report.model_names = m.model_names();
  report.accuracies = accuracies(m);
  report.threshold = threshold;
  report.entries.reserve(h * (h - 1) / 2);

  const double n = static_cast<double>(m.n_examples());
  std::size_t below = 0;
  for (std::size_t i = 0; i < h; ++i) {
    for (std::size_t j = i + 1; j < h; ++j) {
      const auto pc = pair_counts(m, i, j);
      DominanceEntry e;
      // Ties go to the smaller index as the "lower" model.
      const bool swap = pc.correct_i > pc.correct_j;
      e.lower = swap ? j : i;
      e.higher = swap ? i : j;
      e.gap = report.accuracies[e.higher] - report.accuracies[e.lower];
      e.dominance = static_cast<double>(swap ? pc.j_not_i : pc.i_not_j) / n;
      e.similarity = static_cast<double>(pc.agree) / n;
      report.zeta_max = std::max(report.zeta_max, e.dominance);
      if (e.dominance < threshold) ++below;
      report.entries.push_back(e);
    }
  }
  report.fraction_below = static_cast<double>(below) / static_cast<double>(report.entries.size());
  return report;
}

}  // namespace collab
