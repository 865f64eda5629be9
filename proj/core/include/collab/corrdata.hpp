#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace collab {

/// Per-model, per-example 0/1 correctness on one distribution.
///
/// Rows are models; each row is packed into 64-bit words, least significant
/// bit first, with the unused tail bits of the last word kept at zero so that
/// popcounts over whole words are exact. Instances are immutable.
class CorrectnessMatrix {
 public:
  /// Takes ownership of `words` (n_models * words_per_row(n_examples) entries,
  /// row-major). Throws ValidationError on an empty or inconsistent layout,
  /// duplicate model names, or stray bits past n_examples.
  CorrectnessMatrix(std::string distribution_label, std::vector<std::string> model_names,
                    std::size_t n_examples, std::vector<std::uint64_t> words);

  /// Builds from one 0/1 vector per model.
  static CorrectnessMatrix from_rows(std::string distribution_label,
                                     std::vector<std::string> model_names,
                                     const std::vector<std::vector<std::uint8_t>>& rows);

  static constexpr std::size_t words_for(std::size_t n_examples) { return (n_examples + 63) / 64; }

  const std::string& distribution_label() const noexcept { return label_; }
  const std::vector<std::string>& model_names() const noexcept { return names_; }
  std::size_t n_models() const noexcept { return names_.size(); }
  std::size_t n_examples() const noexcept { return n_examples_; }
  std::size_t words_per_row() const noexcept { return words_per_row_; }

  std::span<const std::uint64_t> row(std::size_t model) const;
  bool correct(std::size_t model, std::size_t example) const;
  /// Number of examples model `model` gets right.
  std::size_t correct_count(std::size_t model) const;
  std::optional<std::size_t> index_of(const std::string& name) const;

  /// A new matrix holding only `models`, in the given order.
  CorrectnessMatrix select(std::span<const std::size_t> models) const;

 private:
  std::string label_;
  std::vector<std::string> names_;
  std::size_t n_examples_;
  std::size_t words_per_row_;
  std::vector<std::uint64_t> words_;
  std::vector<std::size_t> popcounts_;
};

/// Aligned (mu_p, mu_q) accuracy pairs, sorted ascending by mu_p.
struct AccuracyPairSet {
  std::vector<std::string> model_names;
  std::vector<double> mu_p;
  std::vector<double> mu_q;

  std::size_t size() const noexcept { return model_names.size(); }
  /// Throws ValidationError unless the lists are nonempty, equally long,
  /// inside [0, 1], and mu_p is nondecreasing.
  void validate() const;
};

struct Alignment {
  AccuracyPairSet pairs;
  std::vector<std::string> only_in_p;
  std::vector<std::string> only_in_q;
};

/// Reads the CSV correctness format: header `example_id,<model>,...`, then one
/// example per line with cells in {0,1}. The distribution label defaults to
/// the file stem.
CorrectnessMatrix load_matrix(const std::filesystem::path& path);
CorrectnessMatrix parse_matrix(std::istream& in, std::string distribution_label);
void write_matrix(std::ostream& out, const CorrectnessMatrix& m);

/// popcount(row i) / n_examples.
double accuracy(const CorrectnessMatrix& m, std::size_t model);
std::vector<double> accuracies(const CorrectnessMatrix& m);

/// Pairs accuracies of the models present in both matrices, sorted by mu_p
/// (ties keep P's column order). Models found on one side only are listed in
/// the result and reported through warn().
Alignment align(const CorrectnessMatrix& mp, const CorrectnessMatrix& mq);

/// Restricts both matrices to their common models, in P's column order, so
/// that row i refers to the same model on both sides.
std::pair<CorrectnessMatrix, CorrectnessMatrix> align_matrices(const CorrectnessMatrix& mp,
                                                               const CorrectnessMatrix& mq);

}  // namespace collab
