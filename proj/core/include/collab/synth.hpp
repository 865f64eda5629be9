#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "collab/corrdata.hpp"
#include "collab/triplet.hpp"

namespace collab {

/// A P/Q pair of triplet distributions with the quantities the worked
/// examples state about it. `expected` holds the stated values; consumers
/// recompute them from P and Q rather than trusting them.
struct PlantedScenario {
  std::string name;
  TripletDistribution p;
  TripletDistribution q;
  std::map<std::string, double> expected;
};

/// Ordered triple (accuracies 0.6, 0.7, 0.8) whose middle model sits 0.2
/// above the line through the outer ones under Q.
PlantedScenario example1();

/// Independent models under P; a Q that is (0.31, 0.38, 0.005, 0.008)-close
/// to it yet leaves a 0.163 residual.
PlantedScenario example2();

/// Cellwise products: each model is right independently with its own mu.
TripletDistribution independent_triplet(double mu1, double mu2, double mu3);

/// Generator used by the samplers below; recorded in output metadata.
inline constexpr std::string_view kRngAlgorithm = "mt19937_64";

/// Matrix whose models have nested correct sets: model i is right on the
/// first c_i examples of a seeded permutation, with c_i = round(mu_i n)
/// raised to the running maximum. Every dominance probability is 0.
/// Models are named m1..mh. Throws ValidationError for an empty or
/// decreasing list, values outside [0, 1], or n == 0.
CorrectnessMatrix ordered_chain(const std::vector<double>& accuracies, std::size_t n_examples,
                                std::uint64_t seed, std::string label = "P");

/// n i.i.d. draws of the eight outcomes of `t` for models f1, f2, f3.
/// The same seed gives the same matrix.
CorrectnessMatrix sample_matrix(const TripletDistribution& t, std::size_t n_examples,
                                std::uint64_t seed, std::string label = "sample");

}  // namespace collab
