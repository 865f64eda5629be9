#include "oracles.hpp"

#include <algorithm>
#include <cmath>

namespace oracle {

Rows random_rows(std::mt19937_64& rng, std::size_t h, std::size_t n, double p_correct) {
  std::bernoulli_distribution coin(p_correct);
  Rows rows(h, std::vector<std::uint8_t>(n));
  for (auto& r : rows) {
    for (auto& b : r) b = coin(rng) ? 1 : 0;
  }
  return rows;
}

collab::CorrectnessMatrix to_matrix(const Rows& rows, const std::string& label) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < rows.size(); ++i) names.push_back("model" + std::to_string(i));
  return collab::CorrectnessMatrix::from_rows(label, names, rows);
}

double accuracy(const Rows& rows, std::size_t i) {
  double c = 0;
  for (auto b : rows[i]) c += b;
  return c / static_cast<double>(rows[i].size());
}

double right_wrong(const Rows& rows, std::size_t i, std::size_t j) {
  double c = 0;
  for (std::size_t e = 0; e < rows[i].size(); ++e) c += (rows[i][e] && !rows[j][e]) ? 1 : 0;
  return c / static_cast<double>(rows[i].size());
}

double agree(const Rows& rows, std::size_t i, std::size_t j) {
  double c = 0;
  for (std::size_t e = 0; e < rows[i].size(); ++e) c += rows[i][e] == rows[j][e] ? 1 : 0;
  return c / static_cast<double>(rows[i].size());
}

std::array<double, 8> triplet_cells(const Rows& rows, std::size_t i, std::size_t j, std::size_t k) {
  std::array<double, 8> counts{};
  const std::size_t n = rows[i].size();
  for (std::size_t e = 0; e < n; ++e) {
    counts[(rows[i][e] << 2) | (rows[j][e] << 1) | rows[k][e]] += 1;
  }
  for (auto& c : counts) c /= static_cast<double>(n);
  return counts;
}

std::vector<Point> brute_points(const Rows& p, const Rows& q) {
  std::vector<Point> out;
  const std::size_t h = p.size();
  for (std::size_t i = 0; i < h; ++i) {
    for (std::size_t j = i + 1; j < h; ++j) {
      for (std::size_t k = j + 1; k < h; ++k) {
        const auto cp = triplet_cells(p, i, j, k);
        const auto cq = triplet_cells(q, i, j, k);
        for (unsigned s : {6u, 5u, 4u, 3u, 2u, 1u}) out.push_back({i, j, k, s, cp[s], cq[s]});
      }
    }
  }
  return out;
}

collab::TripletDistribution random_distribution(std::mt19937_64& rng) {
  std::exponential_distribution<double> ex(1.0);
  std::array<double, 8> c{};
  double total = 0;
  for (auto& v : c) total += (v = ex(rng));
  for (auto& v : c) v /= total;
  collab::TripletDistribution t;
  t.p123 = c[0], t.p12 = c[1], t.p13 = c[2], t.p23 = c[3];
  t.p1 = c[4], t.p2 = c[5], t.p3 = c[6], t.p_none = c[7];
  return t;
}

double residual_by_accuracies(const collab::TripletDistribution& p,
                              const collab::TripletDistribution& q) {
  const double x1 = p.p1 + p.p12 + p.p13 + p.p123;
  const double x2 = p.p2 + p.p12 + p.p23 + p.p123;
  const double x3 = p.p3 + p.p13 + p.p23 + p.p123;
  const double y1 = q.p1 + q.p12 + q.p13 + q.p123;
  const double y2 = q.p2 + q.p12 + q.p23 + q.p123;
  const double y3 = q.p3 + q.p13 + q.p23 + q.p123;
  return std::abs(y1 + (y3 - y1) * (x2 - x1) / (x3 - x1) - y2);
}

double bisect_inverse_normal(double p) {
  double lo = -40.0, hi = 40.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (0.5 * std::erfc(-mid / std::sqrt(2.0)) < p) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

BoxResult box_vertex_grid_max(const collab::GridSearchConfig& cfg) {
  BoxResult out;
  const auto& mu = cfg.mu;
  const int steps = static_cast<int>(std::floor(cfg.zeta / cfg.p_grid_step + 1e-9));
  const double tol = 1e-12;
  for (int a1 = 0; a1 <= steps; ++a1)
    for (int a2 = 0; a2 <= steps; ++a2)
      for (int a12 = 0; a12 <= steps; ++a12)
        for (int a13 = 0; a13 <= steps; ++a13) {
          collab::TripletDistribution p;
          p.p1 = a1 * cfg.p_grid_step;
          p.p2 = a2 * cfg.p_grid_step;
          p.p12 = a12 * cfg.p_grid_step;
          p.p13 = a13 * cfg.p_grid_step;
          if (p.p1 + p.p12 > cfg.zeta + tol || p.p1 + p.p13 > cfg.zeta + tol ||
              p.p2 + p.p12 > cfg.zeta + tol)
            continue;
          p.p123 = mu[0] - p.p1 - p.p12 - p.p13;
          p.p23 = mu[1] - p.p2 - p.p12 - p.p123;
          p.p3 = mu[2] - p.p13 - p.p23 - p.p123;
          if (p.p123 < -tol || p.p23 < -tol || p.p3 < -tol) continue;
          if (p.p1 + p.p2 + p.p3 + p.p12 + p.p13 + p.p23 + p.p123 > 1 + tol) continue;
          p.p_none = 0;
          const std::array<double, 6> pc{p.p1, p.p2, p.p3, p.p12, p.p13, p.p23};
          std::array<double, 6> lo{}, hi{};
          double hi_sum = 0;
          for (int c = 0; c < 6; ++c) {
            lo[c] = std::max(0.0, cfg.params.lower_bound(pc[c]));
            hi[c] = cfg.params.upper_bound(pc[c]);
            hi_sum += hi[c];
          }
          if (hi_sum > 1 + tol) out.sum_binds = true;
          for (int mask = 0; mask < 64; ++mask) {
            collab::TripletDistribution q;
            double* cells[6] = {&q.p1, &q.p2, &q.p3, &q.p12, &q.p13, &q.p23};
            for (int c = 0; c < 6; ++c) *cells[c] = (mask >> c) & 1 ? hi[c] : lo[c];
            q.p123 = 0;  // cancels in the residual
            out.max_value = std::max(out.max_value, residual_by_accuracies(p, q));
          }
        }
  return out;
}

}  // namespace oracle
