#include "collab/gridbound.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "collab/bounds.hpp"
#include "collab/errors.hpp"
#include "collab/parallel.hpp"

namespace collab {
namespace {

constexpr double kEps = 1e-12;

// Residual = |sum_a c_a q_a| with constant coefficients once the accuracies
// are fixed: the line's slope factor s = (mu2 - mu1) / (mu3 - mu1) does not
// depend on how the cells are split.
struct Coefficients {
  double q1, q2, q3, q12, q13, q23;

  explicit Coefficients(const std::array<double, 3>& mu) {
    const double s = (mu[1] - mu[0]) / (mu[2] - mu[0]);
    q1 = 1.0 - s;
    q2 = -1.0;
    q3 = s;
    q12 = -s;
    q13 = 1.0;
    q23 = s - 1.0;
  }
};

struct PCells {
  double p1, p2, p3, p12, p13, p23, p123, p_none;
};

struct QChoice {
  double q1 = 0, q2 = 0, q3 = 0, q12 = 0, q13 = 0, q23 = 0;
};

struct Candidate {
  bool found = false;
  double value = -1.0;
  double upper = -1.0;  // value + Q-grid slack, maximized separately
  PCells p{};
  QChoice q{};
  std::size_t p_points = 0;
  std::size_t q_points = 0;
};

std::vector<double> interval_grid(double lo, double hi, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t t = 0; t + 1 < n; ++t) {
    v[t] = lo + (hi - lo) * static_cast<double>(t) / static_cast<double>(n - 1);
  }
  v[n - 1] = hi;
  return v;
}

class Search {
 public:
  explicit Search(const GridSearchConfig& cfg) : cfg_(cfg), c_(cfg.mu) {
    steps_ = static_cast<std::size_t>(std::floor(cfg.zeta / cfg.p_grid_step + 1e-9));
  }

  std::size_t steps() const { return steps_; }

  // All P points whose first index (p1) is `a1`.
  Candidate run_slice(std::size_t a1) const {
    Candidate best;
    const double step = cfg_.p_grid_step;
    const double zeta = cfg_.zeta;
    const auto& mu = cfg_.mu;
    for (std::size_t a2 = 0; a2 <= steps_; ++a2) {
      for (std::size_t a12 = 0; a12 <= steps_; ++a12) {
        for (std::size_t a13 = 0; a13 <= steps_; ++a13) {
          PCells p{};
          p.p1 = static_cast<double>(a1) * step;
          p.p2 = static_cast<double>(a2) * step;
          p.p12 = static_cast<double>(a12) * step;
          p.p13 = static_cast<double>(a13) * step;
          if (p.p1 + p.p12 > zeta + kEps || p.p1 + p.p13 > zeta + kEps ||
              p.p2 + p.p12 > zeta + kEps) {
            continue;
          }
          p.p23 = (mu[1] - mu[0]) - p.p2 + p.p1 + p.p13;
          p.p3 = (mu[2] - mu[1]) - p.p13 + p.p2 + p.p12;
          p.p123 = mu[0] - p.p1 - p.p12 - p.p13;
          if (p.p23 < -kEps || p.p3 < -kEps || p.p123 < -kEps) continue;
          p.p23 = std::max(p.p23, 0.0);
          p.p3 = std::max(p.p3, 0.0);
          p.p123 = std::max(p.p123, 0.0);
          const double total = p.p1 + p.p2 + p.p3 + p.p12 + p.p13 + p.p23 + p.p123;
          if (total > 1.0 + kEps) continue;
          p.p_none = std::max(0.0, 1.0 - total);
          ++best.p_points;
          search_q(p, best);
        }
      }
    }
    return best;
  }

  double p_slack() const {
    if (cfg_.zeta == 0.0) return 0.0;
    const double a1 = std::abs(c_.q1), a2 = std::abs(c_.q2), a3 = std::abs(c_.q3);
    const double a12 = std::abs(c_.q12), a13 = std::abs(c_.q13), a23 = std::abs(c_.q23);
    // p23 and p3 move with the free variables through the accuracy equalities.
    const double gradient = (a1 + a23) + (a2 + a23 + a3) + (a12 + a3) + (a13 + a23 + a3);
    const double slope = std::max(cfg_.params.max_upper_slope(), 1.0 - cfg_.params.delta1);
    return cfg_.p_grid_step * slope * gradient;
  }

 private:
  std::vector<double> q_grid(double p) const {
    const double lo = std::max(0.0, cfg_.params.lower_bound(p));
    const double hi = cfg_.params.upper_bound(p);
    return interval_grid(lo, hi, cfg_.q_grid_points);
  }

  void search_q(const PCells& p, Candidate& best) const {
    const auto g1 = q_grid(p.p1);
    const auto g12 = q_grid(p.p12);
    const auto g13 = q_grid(p.p13);
    const auto g2 = q_grid(p.p2);
    const auto g23 = q_grid(p.p23);
    const auto g3 = q_grid(p.p3);
    const double zeta = cfg_.zeta + kEps;
    const bool qdom = cfg_.q_dominance;

    double local_best = -1.0;
    QChoice local_q;
    std::size_t visited = 0;
    for (double q1 : g1) {
      for (double q12 : g12) {
        if (qdom && q1 + q12 > zeta) break;
        for (double q13 : g13) {
          if (qdom && q1 + q13 > zeta) break;
          for (double q2 : g2) {
            if (qdom && q2 + q12 > zeta) break;
            const double head = c_.q1 * q1 + c_.q12 * q12 + c_.q13 * q13 + c_.q2 * q2;
            const double head_sum = q1 + q12 + q13 + q2;
            for (double q23 : g23) {
              if (head_sum + q23 > 1.0 + kEps) break;
              const double mid = head + c_.q23 * q23;
              for (double q3 : g3) {
                if (head_sum + q23 + q3 > 1.0 + kEps) break;
                ++visited;
                const double v = std::abs(mid + c_.q3 * q3);
                if (v > local_best) {
                  local_best = v;
                  local_q = {q1, q2, q3, q12, q13, q23};
                }
              }
            }
          }
        }
      }
    }
    best.q_points += visited;
    if (visited == 0) return;

    const double n = static_cast<double>(cfg_.q_grid_points - 1);
    auto spacing = [&](const std::vector<double>& g) { return (g.back() - g.front()) / n; };
    const double q_slack = std::abs(c_.q1) * spacing(g1) + std::abs(c_.q12) * spacing(g12) +
                           std::abs(c_.q13) * spacing(g13) + std::abs(c_.q2) * spacing(g2) +
                           std::abs(c_.q23) * spacing(g23) + std::abs(c_.q3) * spacing(g3);
    best.upper = std::max(best.upper, local_best + q_slack);
    if (local_best > best.value) {
      best.found = true;
      best.value = local_best;
      best.p = p;
      best.q = local_q;
    }
  }

  const GridSearchConfig& cfg_;
  Coefficients c_;
  std::size_t steps_ = 0;
};

long long quantize(double v) { return std::llround(v * 1e12); }

}  // namespace

void GridSearchConfig::validate() const {
  if (!(std::isfinite(zeta) && zeta >= 0.0)) throw ValidationError("zeta must be >= 0");
  for (double m : mu) {
    if (!(m >= 0.0 && m <= 1.0)) throw ValidationError("accuracies must lie in [0, 1]");
  }
  if (mu[0] > mu[1] || mu[1] > mu[2]) {
    throw ValidationError("accuracies must satisfy mu1 <= mu2 <= mu3");
  }
  if (mu[0] == mu[2]) throw DegenerateError("mu1 == mu3: the reference line is undefined");
  if (!(std::isfinite(p_grid_step) && p_grid_step > 0.0)) {
    throw ValidationError("p grid step must be positive");
  }
  if (q_grid_points < 2) throw ValidationError("need at least two Q grid points");
  params.validate();
}

GridSearchResult max_residual_grid(const GridSearchConfig& cfg) {
  cfg.validate();
  const Search search(cfg);
  const std::size_t slices = search.steps() + 1;
  std::vector<Candidate> partial(slices);
  parallel_for(
      slices, [&](std::size_t a1) { partial[a1] = search.run_slice(a1); },
      cfg.threads == 0 ? thread_count() : cfg.threads);

  Candidate best;
  std::size_t p_points = 0;
  std::size_t q_points = 0;
  double upper = -1.0;
  for (const auto& c : partial) {
    p_points += c.p_points;
    q_points += c.q_points;
    upper = std::max(upper, c.upper);
    if (c.found && c.value > best.value) best = c;
  }
  if (!best.found) {
    std::ostringstream os;
    os << "no grid point satisfies the constraints for zeta=" << cfg.zeta << ", mu=(" << cfg.mu[0]
       << ", " << cfg.mu[1] << ", " << cfg.mu[2] << ")";
    throw InfeasibleError(os.str());
  }

  GridSearchResult result;
  result.max_value = best.value;
  result.certified_upper = upper + search.p_slack();
  result.p_points = p_points;
  result.q_points = q_points;
  const auto& p = best.p;
  result.p = TripletDistribution{p.p123, p.p12, p.p13, p.p23, p.p1, p.p2, p.p3, p.p_none};
  const auto& q = best.q;
  const double six = q.q1 + q.q2 + q.q3 + q.q12 + q.q13 + q.q23;
  const double room = std::max(0.0, 1.0 - six);
  const double q123 = std::min(p.p123, room);
  result.q = TripletDistribution{q123, q.q12, q.q13, q.q23, q.q1, q.q2, q.q3, room - q123};
  return result;
}

double halved_bound(const GridSearchConfig& cfg) { return max_residual_grid(cfg).max_value / 2.0; }

std::vector<std::string> witness_violations(const GridSearchConfig& cfg,
                                            const TripletDistribution& p,
                                            const TripletDistribution& q, double tol) {
  std::vector<std::string> bad;
  auto need = [&](bool ok, const std::string& what) {
    if (!ok) bad.push_back(what);
  };
  need(p.is_valid(tol), "P is not a distribution");
  need(q.is_valid(tol), "Q is not a distribution");
  need(std::abs(p.mu1() - cfg.mu[0]) <= tol, "P accuracy of model 1");
  need(std::abs(p.mu2() - cfg.mu[1]) <= tol, "P accuracy of model 2");
  need(std::abs(p.mu3() - cfg.mu[2]) <= tol, "P accuracy of model 3");
  need(p.p1 + p.p12 <= cfg.zeta + tol, "P dominance (1, 3) / p1 + p12");
  need(p.p1 + p.p13 <= cfg.zeta + tol, "P dominance p1 + p13");
  need(p.p2 + p.p12 <= cfg.zeta + tol, "P dominance p2 + p12");
  for (unsigned s : kWedgePatterns) {
    const double pc = p.cell(s);
    const double qc = q.cell(s);
    need(qc >= std::max(0.0, cfg.params.lower_bound(pc)) - tol &&
             qc <= cfg.params.upper_bound(pc) + tol,
         "Q cell " + pattern_string(s) + " outside its wedge interval");
  }
  if (cfg.q_dominance) {
    need(q.p1 + q.p12 <= cfg.zeta + tol, "Q dominance q1 + q12");
    need(q.p1 + q.p13 <= cfg.zeta + tol, "Q dominance q1 + q13");
    need(q.p2 + q.p12 <= cfg.zeta + tol, "Q dominance q2 + q12");
  }
  return bad;
}

double GridBoundCache::max_value(const GridSearchConfig& cfg) {
  const auto key = key_for(cfg);
  {
    std::lock_guard lock(mutex_);
    if (auto it = values_.find(key); it != values_.end()) {
      ++hits_;
      return it->second;
    }
  }
  const double v = max_residual_grid(cfg).max_value;
  std::lock_guard lock(mutex_);
  values_.emplace(key, v);
  return v;
}

std::size_t GridBoundCache::size() const {
  std::lock_guard lock(mutex_);
  return values_.size();
}

std::size_t GridBoundCache::hits() const {
  std::lock_guard lock(mutex_);
  return hits_;
}

GridBoundCache::Key GridBoundCache::key_for(const GridSearchConfig& cfg) {
  std::string segment;
  if (cfg.params.low_segment) {
    const auto& s = *cfg.params.low_segment;
    segment = std::to_string(quantize(s.threshold)) + ':' + std::to_string(quantize(s.delta2)) +
              ':' + std::to_string(quantize(s.nu2));
  }
  return {quantize(cfg.mu[0]),        quantize(cfg.mu[1]),        quantize(cfg.mu[2]),
          quantize(cfg.zeta),         quantize(cfg.params.delta1), quantize(cfg.params.delta2),
          quantize(cfg.params.nu1),   quantize(cfg.params.nu2),   quantize(cfg.p_grid_step),
          cfg.q_grid_points,          cfg.q_dominance,            segment};
}

}  // namespace collab
