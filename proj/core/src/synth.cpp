#include "collab/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "collab/errors.hpp"

namespace collab {
namespace {

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

PlantedScenario example1() {
  PlantedScenario s;
  s.name = "example1";
  s.p.p123 = 0.6;
  s.p.p23 = 0.1;
  s.p.p3 = 0.1;
  s.p.p_none = 0.2;
  s.q.p123 = 0.5;
  s.q.p23 = 0.4;
  s.q.p_none = 0.1;
  s.expected = {{"mu_p1", 0.6}, {"mu_p2", 0.7}, {"mu_p3", 0.8},   {"mu_q1", 0.5},
                {"mu_q2", 0.9}, {"mu_q3", 0.9}, {"residual", 0.2}, {"zeta", 0.0}};
  return s;
}

PlantedScenario example2() {
  PlantedScenario s;
  s.name = "example2";
  s.p = independent_triplet(0.6, 0.7, 0.8);
  s.q.p123 = 0.336;
  s.q.p12 = 0.053;
  s.q.p13 = 0.2;
  s.q.p23 = 0.15;
  s.q.p1 = 0.057;
  s.q.p2 = 0.034;
  s.q.p3 = 0.14;
  s.q.p_none = 0.03;
  s.expected = {{"mu_p1", 0.6},         {"mu_p2", 0.7},        {"mu_p3", 0.8},
                {"mu_q1", 0.646},       {"mu_q2", 0.573},      {"mu_q3", 0.826},
                {"residual", 0.163},    {"dominance_12", 0.18}, {"dominance_13", 0.12},
                {"dominance_23", 0.14}, {"delta1", 0.31},      {"delta2", 0.38},
                {"nu1", 0.005},         {"nu2", 0.008},        {"wedge_violations", 0.0},
                {"prop1_bound", 0.0545}};
  return s;
}

TripletDistribution independent_triplet(double mu1, double mu2, double mu3) {
  for (double m : {mu1, mu2, mu3}) {
    if (!(m >= 0.0 && m <= 1.0)) throw ValidationError("accuracies must lie in [0, 1]");
  }
  std::array<double, 8> cells{};
  for (unsigned s = 0; s < 8; ++s) {
    cells[s] = ((s & 4u) ? mu1 : 1.0 - mu1) * ((s & 2u) ? mu2 : 1.0 - mu2) *
               ((s & 1u) ? mu3 : 1.0 - mu3);
  }
  return TripletDistribution::from_cells(cells);
}

CorrectnessMatrix ordered_chain(const std::vector<double>& accuracies, std::size_t n_examples,
                                std::uint64_t seed, std::string label) {
  if (accuracies.empty()) throw ValidationError("ordered_chain needs at least one accuracy");
  if (n_examples == 0) throw ValidationError("ordered_chain needs at least one example");
  for (std::size_t i = 0; i < accuracies.size(); ++i) {
    if (!(accuracies[i] >= 0.0 && accuracies[i] <= 1.0)) {
      throw ValidationError("accuracies must lie in [0, 1]");
    }
    if (i > 0 && accuracies[i] < accuracies[i - 1]) {
      throw ValidationError("ordered_chain accuracies must be nondecreasing");
    }
  }
  std::vector<std::size_t> perm(n_examples);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  // Fisher-Yates with our own index draw so the order is the same everywhere.
  for (std::size_t i = n_examples; i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(i));
    std::swap(perm[i - 1], perm[std::min(j, i - 1)]);
  }

  const std::size_t h = accuracies.size();
  const std::size_t wpr = CorrectnessMatrix::words_for(n_examples);
  std::vector<std::uint64_t> words(h * wpr, 0);
  std::vector<std::string> names;
  std::size_t count = 0;
  for (std::size_t m = 0; m < h; ++m) {
    const auto c = static_cast<std::size_t>(std::llround(accuracies[m] * static_cast<double>(n_examples)));
    count = std::max(count, c);
    for (std::size_t e = 0; e < count; ++e) {
      words[m * wpr + perm[e] / 64] |= std::uint64_t{1} << (perm[e] % 64);
    }
    names.push_back("m" + std::to_string(m + 1));
  }
  return CorrectnessMatrix(std::move(label), std::move(names), n_examples, std::move(words));
}

CorrectnessMatrix sample_matrix(const TripletDistribution& t, std::size_t n_examples,
                                std::uint64_t seed, std::string label) {
  t.validate(1e-9);
  if (n_examples == 0) throw ValidationError("sample_matrix needs at least one example");
  std::array<double, 8> cumulative{};
  const auto cells = t.cells();
  double run = 0.0;
  for (unsigned s = 0; s < 8; ++s) {
    run += cells[s];
    cumulative[s] = run;
  }
  unsigned last_positive = 0;
  for (unsigned c = 0; c < 8; ++c) {
    if (cells[c] > 0.0) last_positive = c;
  }
  const std::size_t wpr = CorrectnessMatrix::words_for(n_examples);
  std::vector<std::uint64_t> words(3 * wpr, 0);
  std::mt19937_64 rng(seed);
  for (std::size_t e = 0; e < n_examples; ++e) {
    const double u = uniform01(rng) * run;
    unsigned s = last_positive;
    for (unsigned c = 0; c < 8; ++c) {
      if (cells[c] > 0.0 && u < cumulative[c]) {
        s = c;
        break;
      }
    }
    const std::uint64_t bit = std::uint64_t{1} << (e % 64);
    for (unsigned m = 0; m < 3; ++m) {
      if (s & (4u >> m)) words[m * wpr + e / 64] |= bit;
    }
  }
  return CorrectnessMatrix(std::move(label), {"f1", "f2", "f3"}, n_examples, std::move(words));
}

}  // namespace collab
