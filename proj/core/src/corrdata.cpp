#include "collab/corrdata.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

#include "collab/diagnostics.hpp"
#include "collab/errors.hpp"

namespace collab {
namespace {

std::string_view trim(std::string_view s) {
  constexpr std::string_view ws = " \t\r\n";
  const auto first = s.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(ws);
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(trim(line.substr(start)));
      return cells;
    }
    cells.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += ", ";
    out += s;
  }
  return out;
}

}  // namespace

CorrectnessMatrix::CorrectnessMatrix(std::string distribution_label,
                                     std::vector<std::string> model_names,
                                     std::size_t n_examples, std::vector<std::uint64_t> words)
    : label_(std::move(distribution_label)),
      names_(std::move(model_names)),
      n_examples_(n_examples),
      words_per_row_(words_for(n_examples)),
      words_(std::move(words)) {
  if (names_.empty()) throw ValidationError("correctness matrix needs at least one model");
  if (n_examples_ == 0) throw ValidationError("correctness matrix needs at least one example");
  if (words_.size() != names_.size() * words_per_row_) {
    throw ValidationError("correctness matrix storage does not match its shape");
  }
  std::unordered_set<std::string_view> seen;
  for (const auto& name : names_) {
    if (!seen.insert(name).second) throw ValidationError("duplicate model name '" + name + "'");
  }

  const std::size_t tail = n_examples_ % 64;
  const std::uint64_t tail_mask = tail == 0 ? ~std::uint64_t{0} : (std::uint64_t{1} << tail) - 1;
  popcounts_.reserve(names_.size());
  for (std::size_t i = 0; i < names_.size(); ++i) {
    auto r = row(i);
    if ((r.back() & ~tail_mask) != 0) {
      throw ValidationError("row '" + names_[i] + "' has bits set past n_examples");
    }
    std::size_t count = 0;
    for (auto w : r) count += static_cast<std::size_t>(std::popcount(w));
    popcounts_.push_back(count);
  }
}

CorrectnessMatrix CorrectnessMatrix::from_rows(std::string distribution_label,
                                               std::vector<std::string> model_names,
                                               const std::vector<std::vector<std::uint8_t>>& rows) {
  if (rows.size() != model_names.size()) {
    throw ValidationError("got " + std::to_string(rows.size()) + " rows for " +
                          std::to_string(model_names.size()) + " model names");
  }
  if (rows.empty()) throw ValidationError("correctness matrix needs at least one model");
  const std::size_t n = rows.front().size();
  const std::size_t wpr = words_for(n);
  std::vector<std::uint64_t> words(rows.size() * wpr, 0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != n) throw ValidationError("ragged rows: model '" + model_names[i] + "'");
    for (std::size_t e = 0; e < n; ++e) {
      const auto v = rows[i][e];
      if (v > 1) throw ValidationError("correctness values must be 0 or 1");
      if (v) words[i * wpr + e / 64] |= std::uint64_t{1} << (e % 64);
    }
  }
  return CorrectnessMatrix(std::move(distribution_label), std::move(model_names), n,
                           std::move(words));
}

std::span<const std::uint64_t> CorrectnessMatrix::row(std::size_t model) const {
  if (model >= names_.size()) throw std::out_of_range("model index out of range");
  return {words_.data() + model * words_per_row_, words_per_row_};
}

bool CorrectnessMatrix::correct(std::size_t model, std::size_t example) const {
  if (example >= n_examples_) throw std::out_of_range("example index out of range");
  return (row(model)[example / 64] >> (example % 64)) & 1U;
}

std::size_t CorrectnessMatrix::correct_count(std::size_t model) const {
  if (model >= names_.size()) throw std::out_of_range("model index out of range");
  return popcounts_[model];
}

std::optional<std::size_t> CorrectnessMatrix::index_of(const std::string& name) const {
  const auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names_.begin());
}

CorrectnessMatrix CorrectnessMatrix::select(std::span<const std::size_t> models) const {
  std::vector<std::string> names;
  std::vector<std::uint64_t> words;
  names.reserve(models.size());
  words.reserve(models.size() * words_per_row_);
  for (auto m : models) {
    auto r = row(m);
    names.push_back(names_[m]);
    words.insert(words.end(), r.begin(), r.end());
  }
  return CorrectnessMatrix(label_, std::move(names), n_examples_, std::move(words));
}

void AccuracyPairSet::validate() const {
  if (model_names.empty()) throw ValidationError("accuracy pair set is empty");
  if (mu_p.size() != model_names.size() || mu_q.size() != model_names.size()) {
    throw ValidationError("accuracy pair set lists differ in length");
  }
  for (std::size_t i = 0; i < mu_p.size(); ++i) {
    if (!(mu_p[i] >= 0.0 && mu_p[i] <= 1.0 && mu_q[i] >= 0.0 && mu_q[i] <= 1.0)) {
      throw ValidationError("accuracy of '" + model_names[i] + "' outside [0, 1]");
    }
    if (i > 0 && mu_p[i] < mu_p[i - 1]) throw ValidationError("mu_p is not sorted");
  }
}

CorrectnessMatrix load_matrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path.string() + "'");
  return parse_matrix(in, path.stem().string());
}

CorrectnessMatrix parse_matrix(std::istream& in, std::string distribution_label) {
  std::string line;
  std::size_t line_no = 0;

  // Header, skipping leading blank lines.
  std::vector<std::string> names;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    if (trim(line).empty()) continue;
    auto cells = split_commas(line);
    if (cells.front() != "example_id") {
      throw ParseError("header must start with 'example_id'", line_no, 1);
    }
    if (cells.size() < 2) throw ParseError("header lists no models", line_no, 2);
    for (std::size_t c = 1; c < cells.size(); ++c) {
      if (cells[c].empty()) throw ParseError("empty model name in header", line_no, c + 1);
      names.emplace_back(cells[c]);
    }
    break;
  }
  if (names.empty()) throw ValidationError("matrix file has no header");
  {
    std::unordered_set<std::string_view> seen;
    for (const auto& n : names) {
      if (!seen.insert(n).second) throw ValidationError("duplicate model name '" + n + "'");
    }
  }

  const std::size_t h = names.size();
  std::vector<std::vector<std::uint64_t>> rows(h);
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto cells = split_commas(line);
    if (cells.size() != h + 1) {
      throw ValidationError("ragged row at line " + std::to_string(line_no) + ": expected " +
                            std::to_string(h + 1) + " cells, got " +
                            std::to_string(cells.size()));
    }
    if (n % 64 == 0) {
      for (auto& r : rows) r.push_back(0);
    }
    for (std::size_t c = 0; c < h; ++c) {
      const auto cell = cells[c + 1];
      if (cell == "1") {
        rows[c].back() |= std::uint64_t{1} << (n % 64);
      } else if (cell != "0") {
        throw ParseError("cell '" + std::string(cell) + "' at line " + std::to_string(line_no) +
                             ", column " + std::to_string(c + 2) + " is not 0 or 1",
                         line_no, c + 2);
      }
    }
    ++n;
  }
  if (n == 0) throw ValidationError("matrix file has no examples");

  std::vector<std::uint64_t> words;
  words.reserve(h * CorrectnessMatrix::words_for(n));
  for (auto& r : rows) words.insert(words.end(), r.begin(), r.end());
  return CorrectnessMatrix(std::move(distribution_label), std::move(names), n, std::move(words));
}

void write_matrix(std::ostream& out, const CorrectnessMatrix& m) {
  out << "example_id";
  for (const auto& name : m.model_names()) out << ',' << name;
  out << '\n';
  for (std::size_t e = 0; e < m.n_examples(); ++e) {
    out << e;
    for (std::size_t i = 0; i < m.n_models(); ++i) out << (m.correct(i, e) ? ",1" : ",0");
    out << '\n';
  }
}

double accuracy(const CorrectnessMatrix& m, std::size_t model) {
  return static_cast<double>(m.correct_count(model)) / static_cast<double>(m.n_examples());
}

std::vector<double> accuracies(const CorrectnessMatrix& m) {
  std::vector<double> out(m.n_models());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = accuracy(m, i);
  return out;
}

Alignment align(const CorrectnessMatrix& mp, const CorrectnessMatrix& mq) {
  Alignment result;
  std::unordered_map<std::string_view, std::size_t> q_index;
  for (std::size_t j = 0; j < mq.n_models(); ++j) q_index.emplace(mq.model_names()[j], j);

  struct Row {
    std::size_t p_index;
    double mu_p;
    double mu_q;
  };
  std::vector<Row> rows;
  for (std::size_t i = 0; i < mp.n_models(); ++i) {
    const auto& name = mp.model_names()[i];
    if (auto it = q_index.find(name); it != q_index.end()) {
      rows.push_back({i, accuracy(mp, i), accuracy(mq, it->second)});
    } else {
      result.only_in_p.push_back(name);
    }
  }
  for (const auto& name : mq.model_names()) {
    if (!mp.index_of(name)) result.only_in_q.push_back(name);
  }
  if (rows.empty()) throw ValidationError("the two matrices share no model names");

  std::stable_sort(rows.begin(), rows.end(),
                   [](const Row& a, const Row& b) { return a.mu_p < b.mu_p; });
  for (const auto& r : rows) {
    result.pairs.model_names.push_back(mp.model_names()[r.p_index]);
    result.pairs.mu_p.push_back(r.mu_p);
    result.pairs.mu_q.push_back(r.mu_q);
  }

  if (!result.only_in_p.empty()) {
    warn("models missing from '" + mq.distribution_label() + "': " + join(result.only_in_p));
  }
  if (!result.only_in_q.empty()) {
    warn("models missing from '" + mp.distribution_label() + "': " + join(result.only_in_q));
  }
  return result;
}

std::pair<CorrectnessMatrix, CorrectnessMatrix> align_matrices(const CorrectnessMatrix& mp,
                                                               const CorrectnessMatrix& mq) {
  std::vector<std::size_t> p_sel;
  std::vector<std::size_t> q_sel;
  for (std::size_t i = 0; i < mp.n_models(); ++i) {
    if (auto j = mq.index_of(mp.model_names()[i])) {
      p_sel.push_back(i);
      q_sel.push_back(*j);
    }
  }
  if (p_sel.empty()) throw ValidationError("the two matrices share no model names");
  return {mp.select(p_sel), mq.select(q_sel)};
}

}  // namespace collab
