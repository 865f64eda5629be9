#include "collab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "collab/errors.hpp"
#include "collab/gridbound.hpp"
#include "collab/parallel.hpp"

namespace collab {
namespace {

void require_exact_wedge(const ClosenessParams& params) {
  params.validate();
  if (params.low_segment) {
    throw ValidationError("the analytic bound needs a single-segment wedge");
  }
  if (params.coverage < 1.0) {
    throw ValidationError("the analytic bound needs a wedge that holds for every event");
  }
}

}  // namespace

Line Line::through(AccuracyPoint a, AccuracyPoint b) {
  if (a.mu_p == b.mu_p) throw DegenerateError("line through two points with equal mu_p");
  const double slope = (b.mu_q - a.mu_q) / (b.mu_p - a.mu_p);
  return {slope, a.mu_q - slope * a.mu_p};
}

double residual_from_accuracies(AccuracyPoint lo, AccuracyPoint mid, AccuracyPoint hi) {
  if (lo.mu_p == hi.mu_p) throw DegenerateError("outer models share mu_p; the line is undefined");
  const double at_mid = lo.mu_q + (hi.mu_q - lo.mu_q) / (hi.mu_p - lo.mu_p) * (mid.mu_p - lo.mu_p);
  return std::abs(at_mid - mid.mu_q);
}

double residual_from_triplets(const TripletDistribution& p, const TripletDistribution& q) {
  const double denom = p.p3 + p.p23 - p.p1 - p.p12;
  if (denom == 0.0) throw DegenerateError("mu3 == mu1 under P; the line is undefined");
  const double rise = q.p3 + q.p23 - q.p1 - q.p12;
  const double run = p.p2 + p.p23 - p.p1 - p.p13;
  return std::abs(rise / denom * run + q.p1 + q.p13 - q.p2 - q.p23);
}

Line halving_line(AccuracyPoint lo, AccuracyPoint mid, AccuracyPoint hi) {
  const AccuracyPoint a{(lo.mu_p + mid.mu_p) / 2.0, (lo.mu_q + mid.mu_q) / 2.0};
  const AccuracyPoint b{(mid.mu_p + hi.mu_p) / 2.0, (mid.mu_q + hi.mu_q) / 2.0};
  return Line::through(a, b);
}

BoundReport prop1_bound(double mu_i, double mu_j, double mu_k, const ClosenessParams& params) {
  require_exact_wedge(params);
  if (!(mu_i <= mu_j && mu_j <= mu_k)) {
    throw ValidationError("prop1_bound needs mu_i <= mu_j <= mu_k");
  }
  if (mu_i == mu_k) throw DegenerateError("outer accuracies coincide");
  const double span = mu_k - mu_i;
  const double harmonic = 2.0 * (mu_k - mu_j) * (mu_j - mu_i) / span;
  const double delta = (params.delta1 + params.delta2) / 2.0;
  const double far = std::max(mu_k - mu_j, mu_j - mu_i) / span;
  BoundReport r;
  r.bound_value = delta * harmonic + std::max(params.nu1, params.nu2) + (1.0 + far) * params.nu2;
  r.halved_value = r.bound_value / 2.0;
  return r;
}

BoundReport prop1_bound(const AccuracyPairSet& pairs, std::size_t i, std::size_t j,
                        std::size_t k, const ClosenessParams& params) {
  if (i >= pairs.size() || j >= pairs.size() || k >= pairs.size()) {
    throw std::out_of_range("prop1_bound: model index out of range");
  }
  auto r = prop1_bound(pairs.mu_p[i], pairs.mu_p[j], pairs.mu_p[k], params);
  r.triple = {i, j, k};
  r.line = Line::through({pairs.mu_p[i], pairs.mu_q[i]}, {pairs.mu_p[k], pairs.mu_q[k]});
  return r;
}

double corollary_bound(double mu_min, double mu_max, const ClosenessParams& params) {
  params.validate();
  if (mu_min > mu_max) throw ValidationError("corollary_bound needs mu_min <= mu_max");
  const double delta = (params.delta1 + params.delta2) / 2.0;
  return 25.0 / 64.0 * (mu_max - mu_min) * delta + 3.0 * std::max(params.nu1, params.nu2);
}

std::vector<BandPoint> feasible_band(std::span<const AccuracyPoint> anchors,
                                     const ClosenessParams& params,
                                     std::span<const double> grid, const BandOptions& options) {
  if (anchors.size() < 2) throw ValidationError("feasible_band needs at least two anchors");
  for (std::size_t a = 1; a < anchors.size(); ++a) {
    if (anchors[a].mu_p < anchors[a - 1].mu_p) {
      throw ValidationError("anchors must be sorted by mu_p");
    }
  }
  const double lo_hull = anchors.front().mu_p;
  const double hi_hull = anchors.back().mu_p;
  if (lo_hull == hi_hull) throw DegenerateError("all anchors share one mu_p");
  for (double mu : grid) {
    if (!(mu >= lo_hull && mu <= hi_hull)) {
      std::ostringstream os;
      os << "grid value " << mu << " lies outside the anchor range [" << lo_hull << ", "
         << hi_hull << "]";
      throw ValidationError(os.str());
    }
  }
  params.validate();
  if (options.zeta == 0.0) require_exact_wedge(params);

  GridBoundCache local_cache;
  GridBoundCache& cache = options.cache ? *options.cache : local_cache;

  auto half_width = [&](double mi, double mj, double mk) {
    if (options.zeta == 0.0) return prop1_bound(mi, mj, mk, params).bound_value;
    GridSearchConfig cfg;
    cfg.zeta = options.zeta;
    cfg.mu = {mi, mj, mk};
    cfg.params = params;
    cfg.p_grid_step = options.p_grid_step;
    cfg.q_grid_points = options.q_grid_points;
    cfg.q_dominance = options.q_dominance;
    cfg.threads = 1;
    double width = cache.max_value(cfg);
    if (!params.low_segment) {
      width = std::max(width, prop1_bound(mi, mj, mk, params.as_exact_wedge()).bound_value);
    }
    return width;
  };

  std::vector<BandPoint> band(grid.size());
  auto body = [&](std::size_t g) {
    const double mu = grid[g];
    BandPoint& out = band[g];
    out.mu_p = mu;
    for (const auto& a : anchors) {
      if (a.mu_p == mu) {
        out.lower = out.upper = a.mu_q;
        return;
      }
    }
    out.lower = -std::numeric_limits<double>::infinity();
    out.upper = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < anchors.size(); ++a) {
      if (anchors[a].mu_p > mu) break;
      for (std::size_t b = anchors.size(); b-- > a + 1;) {
        if (anchors[b].mu_p < mu) break;
        const double centre = Line::through(anchors[a], anchors[b])(mu);
        const double width = half_width(anchors[a].mu_p, mu, anchors[b].mu_p);
        out.lower = std::max(out.lower, centre - width);
        out.upper = std::min(out.upper, centre + width);
      }
    }
  };
  parallel_for(grid.size(), body, options.threads == 0 ? thread_count() : options.threads);
  return band;
}

std::vector<double> lower_bound_curve(std::span<const AccuracyPoint> anchors,
                                      const ClosenessParams& params,
                                      std::span<const double> grid, const BandOptions& options) {
  const auto band = feasible_band(anchors, params, grid, options);
  std::vector<double> lower(band.size());
  std::transform(band.begin(), band.end(), lower.begin(), [](const BandPoint& b) { return b.lower; });
  return lower;
}

}  // namespace collab
