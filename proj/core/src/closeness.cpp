#include "collab/closeness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "collab/errors.hpp"

namespace collab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

// The same arithmetic as ClosenessParams::lower_bound / upper_bound, so a
// delta found here is admitted by a re-check.
double lower_line(double nu, double delta, double p) { return -nu + (1.0 - delta) * p; }
double upper_line(double nu, double delta, double p) { return nu + (1.0 + delta) * p; }

double required_upper_delta(double p, double q, double nu) {
  if (upper_line(nu, 0.0, p) >= q) return 0.0;
  if (p <= 0.0) return kInf;
  double delta = (q - nu) / p - 1.0;
  while (upper_line(nu, delta, p) < q) delta = std::nextafter(delta, kInf);
  return delta;
}

double required_lower_delta(double p, double q, double nu) {
  if (lower_line(nu, 0.0, p) <= q) return 0.0;
  double delta = 1.0 - (q + nu) / p;
  while (lower_line(nu, delta, p) > q) delta = std::nextafter(delta, kInf);
  return delta;
}

struct SideFit {
  double delta = kInf;
  double nu = 0.0;
};

// Best (delta, nu) for one side when `k` points must be inside.
template <typename Required>
SideFit fit_side(std::span<const TripletPoint> points, std::size_t k,
                 const std::vector<double>& nu_grid, Required required) {
  double p_max = 0.0;
  for (const auto& pt : points) p_max = std::max(p_max, pt.p);

  std::vector<double> deltas(points.size());
  SideFit best;
  double best_score = kInf;
  for (double nu : nu_grid) {
    for (std::size_t i = 0; i < points.size(); ++i) deltas[i] = required(points[i].p, points[i].q, nu);
    std::nth_element(deltas.begin(), deltas.begin() + static_cast<std::ptrdiff_t>(k - 1), deltas.end());
    const double delta = deltas[k - 1];
    if (!std::isfinite(delta)) continue;
    // Area between this side's line and the diagonal over [0, p_max].
    const double score = p_max > 0.0 ? nu * p_max + delta * p_max * p_max / 2.0 : nu;
    if (score < best_score) {
      best_score = score;
      best = {delta, nu};
    }
  }
  return best;
}

std::size_t required_inside(double coverage, std::size_t n) {
  const double dn = static_cast<double>(n);
  auto k = static_cast<std::size_t>(std::ceil(coverage * dn));
  k = std::clamp<std::size_t>(k, 1, n);
  while (k > 1 && static_cast<double>(k - 1) / dn >= coverage) --k;
  while (k < n && static_cast<double>(k) / dn < coverage) ++k;
  return k;
}

}  // namespace

void ClosenessParams::validate() const {
  if (!finite_nonneg(delta1) || !finite_nonneg(delta2) || !finite_nonneg(nu1) ||
      !finite_nonneg(nu2)) {
    throw ValidationError("closeness parameters must be finite and nonnegative");
  }
  if (!(coverage > 0.0 && coverage <= 1.0)) throw ValidationError("coverage must be in (0, 1]");
  if (low_segment) {
    const auto& s = *low_segment;
    if (!finite_nonneg(s.threshold) || !finite_nonneg(s.delta2) || !finite_nonneg(s.nu2)) {
      throw ValidationError("second-segment parameters must be finite and nonnegative");
    }
  }
}

double ClosenessParams::upper_bound(double p) const {
  if (low_segment && p < low_segment->threshold) {
    return upper_line(low_segment->nu2, low_segment->delta2, p);
  }
  return upper_line(nu2, delta2, p);
}

double ClosenessParams::max_upper_slope() const {
  double slope = 1.0 + delta2;
  if (low_segment) slope = std::max(slope, 1.0 + low_segment->delta2);
  return slope;
}

ClosenessParams ClosenessParams::as_exact_wedge() const {
  return ClosenessParams{delta1, delta2, nu1, nu2, 1.0, std::nullopt};
}

ClosenessChecker::ClosenessChecker(std::vector<std::string> model_names, ClosenessParams params)
    : params_(std::move(params)) {
  params_.validate();
  report_.per_model.assign(model_names.size(), 0);
  report_.model_names = std::move(model_names);
}

void ClosenessChecker::add(const TripletPoint& pt) {
  ++report_.total;
  if (params_.admits(pt.p, pt.q)) return;
  ++report_.violating;
  report_.violations.push_back(pt);
  for (auto m : {pt.i, pt.j, pt.k}) {
    if (m < report_.per_model.size()) ++report_.per_model[m];
  }
}

ViolationReport ClosenessChecker::finish() && {
  report_.coverage = report_.total == 0 ? 1.0
                                        : 1.0 - static_cast<double>(report_.violating) /
                                                    static_cast<double>(report_.total);
  return std::move(report_);
}

ViolationReport check_closeness(std::span<const TripletPoint> points,
                                std::vector<std::string> model_names,
                                const ClosenessParams& params) {
  ClosenessChecker checker(std::move(model_names), params);
  for (const auto& pt : points) checker.add(pt);
  return std::move(checker).finish();
}

ViolationReport check_closeness(const CorrectnessMatrix& mp, const CorrectnessMatrix& mq,
                                const ClosenessParams& params) {
  ClosenessChecker checker(mp.model_names(), params);
  enumerate_triplet_points(mp, mq, [&](const TripletPoint& pt) { checker.add(pt); });
  return std::move(checker).finish();
}

std::vector<double> WedgeFitOptions::default_nu_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 20; ++i) grid.push_back(i / 1000.0);
  return grid;
}

ClosenessParams fit_wedge(std::span<const TripletPoint> points, double coverage,
                          const WedgeFitOptions& options) {
  if (points.empty()) throw ValidationError("cannot fit a wedge to an empty point set");
  if (!(coverage > 0.0 && coverage <= 1.0)) throw ValidationError("coverage must be in (0, 1]");
  if (options.nu_grid.empty()) throw ValidationError("nu grid is empty");

  const std::size_t n = points.size();
  const std::size_t k_target = required_inside(coverage, n);

  auto fit_at = [&](std::size_t k) {
    const auto lower = fit_side(points, k, options.nu_grid, required_lower_delta);
    const auto upper = fit_side(points, k, options.nu_grid, required_upper_delta);
    if (!std::isfinite(lower.delta) || !std::isfinite(upper.delta)) {
      throw DegenerateError("no intercept on the nu grid lets the wedge hold enough points");
    }
    return ClosenessParams{lower.delta, upper.delta, lower.nu, upper.nu, coverage, std::nullopt};
  };
  auto inside = [&](const ClosenessParams& params) {
    return static_cast<std::size_t>(std::count_if(
        points.begin(), points.end(), [&](const TripletPoint& pt) { return params.admits(pt.p, pt.q); }));
  };

  auto params = fit_at(k_target);
  if (inside(params) >= k_target) return params;

  // Each side alone is fine but their violations do not overlap enough.
  // k = n always works, so `hi` stays a verified fit.
  std::size_t lo = k_target;
  std::size_t hi = n;
  auto best = fit_at(n);
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    auto candidate = fit_at(mid);
    if (inside(candidate) >= k_target) {
      hi = mid;
      best = candidate;
    } else {
      lo = mid;
    }
  }
  return best;
}

std::vector<std::string> outlier_models(const ViolationReport& report, std::size_t threshold) {
  std::vector<std::size_t> idx;
  for (std::size_t m = 0; m < report.per_model.size(); ++m) {
    if (report.per_model[m] > threshold) idx.push_back(m);
  }
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return report.per_model[a] > report.per_model[b];
  });
  std::vector<std::string> names;
  names.reserve(idx.size());
  for (auto m : idx) names.push_back(report.model_names.at(m));
  return names;
}

}  // namespace collab
