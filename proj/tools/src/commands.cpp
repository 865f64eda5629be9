#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include "cli.hpp"
#include "collab/bounds.hpp"
#include "collab/closeness.hpp"
#include "collab/corrdata.hpp"
#include "collab/errors.hpp"
#include "collab/events.hpp"
#include "collab/gridbound.hpp"
#include "collab/synth.hpp"
#include "collab/trends.hpp"
#include "output.hpp"
#include "svg.hpp"

namespace fs = std::filesystem;

namespace collab::tools {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitAnalysis = 1;
constexpr int kExitInput = 2;

// Command-line input error that is not covered by the library's types.
struct UsageError : Error {
  using Error::Error;
};

struct WedgeFlags {
  std::optional<double> delta1, delta2, nu1, nu2;
  std::optional<double> seg_threshold, seg_delta2, seg_nu2;

  void add_to(CLI::App* app) {
    app->add_option("--delta1", delta1, "lower slope deviation");
    app->add_option("--delta2", delta2, "upper slope deviation");
    app->add_option("--nu1", nu1, "lower intercept");
    app->add_option("--nu2", nu2, "upper intercept");
    app->add_option("--seg-threshold", seg_threshold, "P(A) below which the second upper segment applies");
    app->add_option("--seg-delta2", seg_delta2, "upper slope deviation of the second segment");
    app->add_option("--seg-nu2", seg_nu2, "upper intercept of the second segment");
  }

  bool given() const { return delta1 || delta2 || nu1 || nu2; }

  ClosenessParams params() const {
    if (!(delta1 && delta2 && nu1 && nu2)) {
      throw UsageError("wedge needs all of --delta1 --delta2 --nu1 --nu2");
    }
    ClosenessParams p{*delta1, *delta2, *nu1, *nu2, 1.0, std::nullopt};
    if (seg_threshold || seg_delta2 || seg_nu2) {
      if (!(seg_threshold && seg_delta2 && seg_nu2)) {
        throw UsageError("second segment needs --seg-threshold --seg-delta2 --seg-nu2");
      }
      p.low_segment = LowProbabilitySegment{*seg_threshold, *seg_delta2, *seg_nu2};
    }
    p.validate();
    return p;
  }
};

struct Common {
  std::string out_dir = ".";
  std::vector<std::string> formats{"json", "csv", "svg"};
  std::vector<std::string> args;

  bool wants(std::string_view f) const {
    return std::find(formats.begin(), formats.end(), f) != formats.end();
  }
  fs::path path(const std::string& name) const { return fs::path(out_dir) / name; }
  void emit(std::string_view command, const std::string& stem, json result) const {
    if (wants("json")) write_json(path(stem + ".json"), envelope(command, std::move(result), args));
  }
};

json params_json(const ClosenessParams& p) {
  json j = {{"delta1", p.delta1}, {"delta2", p.delta2}, {"nu1", p.nu1},
            {"nu2", p.nu2},       {"coverage", p.coverage}};
  if (p.low_segment) {
    j["low_segment"] = {{"threshold", p.low_segment->threshold},
                        {"delta2", p.low_segment->delta2},
                        {"nu2", p.low_segment->nu2}};
  }
  return j;
}

json triplet_json(const TripletDistribution& t) {
  return {{"p123", t.p123}, {"p12", t.p12}, {"p13", t.p13}, {"p23", t.p23},
          {"p1", t.p1},     {"p2", t.p2},   {"p3", t.p3},   {"p_none", t.p_none}};
}

json fit_json(const FitReport& r) {
  json segs = json::array();
  for (const auto& s : r.segments) {
    segs.push_back({{"slope", s.slope}, {"intercept", s.intercept}, {"x_min", s.x_min}, {"x_max", s.x_max}});
  }
  json j = {{"kind", to_string(r.kind)},
            {"segments", segs},
            {"max_residual", r.max_residual},
            {"r_squared", r.r_squared},
            {"residuals", r.residuals},
            {"models", r.model_names}};
  if (r.kind == FitKind::piecewise) {
    j["knot_rank"] = *r.knot_rank;
    j["knot_mu_p"] = *r.knot_mu_p;
    j["continuous"] = r.continuous;
  }
  if (r.kind == FitKind::probit) {
    j["probit_r_squared"] = *r.probit_r_squared;
    j["probit_max_residual"] = *r.probit_max_residual;
    j["probit_residuals"] = r.probit_residuals;
  }
  return j;
}

std::string csv_row(std::initializer_list<std::string> cells) {
  std::string line;
  for (const auto& c : cells) {
    if (!line.empty()) line += ',';
    line += c;
  }
  return line + '\n';
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  if (n > 1) v.back() = hi;
  return v;
}

SvgChart::Points fit_curve(const FitReport& r, double lo, double hi) {
  SvgChart::Points pts;
  for (double x : linspace(lo, hi, 101)) pts.emplace_back(x, r.predict(x));
  return pts;
}

SvgChart::Points accuracy_points(const AccuracyPairSet& pairs) {
  SvgChart::Points pts;
  for (std::size_t i = 0; i < pairs.size(); ++i) pts.emplace_back(pairs.mu_p[i], pairs.mu_q[i]);
  return pts;
}

// ---- dominance --------------------------------------------------------------

struct DominanceOpts {
  std::string p;
  double threshold = 0.05;
};

int cmd_dominance(const DominanceOpts& o, const Common& c) {
  const auto m = load_matrix(o.p);
  const auto report = dominance_table(m, o.threshold);
  const auto& names = report.model_names;

  json models = json::array();
  for (std::size_t i = 0; i < names.size(); ++i) {
    models.push_back({{"name", names[i]}, {"accuracy", report.accuracies[i]}});
  }
  json pairs = json::array();
  std::string csv = "lower,higher,gap,dominance,similarity\n";
  SvgChart::Points pts;
  for (const auto& e : report.entries) {
    pairs.push_back({{"lower", names[e.lower]},
                     {"higher", names[e.higher]},
                     {"gap", e.gap},
                     {"dominance", e.dominance},
                     {"similarity", e.similarity}});
    csv += csv_row({names[e.lower], names[e.higher], format_number(e.gap),
                    format_number(e.dominance), format_number(e.similarity)});
    pts.emplace_back(e.gap, e.dominance);
  }
  c.emit("dominance", "dominance",
         {{"distribution", m.distribution_label()},
          {"n_examples", m.n_examples()},
          {"models", models},
          {"threshold", report.threshold},
          {"zeta_max", report.zeta_max},
          {"fraction_below", report.fraction_below},
          {"pairs", pairs}});
  if (c.wants("csv")) write_text(c.path("dominance.csv"), csv);
  if (c.wants("svg")) {
    SvgChart chart("Dominance probabilities", "accuracy gap", "P(lower right, higher wrong)");
    double gap_max = 0.0;
    for (const auto& e : report.entries) gap_max = std::max(gap_max, e.gap);
    chart.scatter(std::move(pts), "#1f77b4");
    chart.line({{0.0, report.threshold}, {gap_max, report.threshold}}, "#d62728", "threshold", true);
    chart.write(c.path("dominance.svg"));
  }
  return kExitOk;
}

// ---- closeness --------------------------------------------------------------

struct ClosenessOpts {
  std::string p, q;
  double coverage = 1.0;
  std::size_t outlier_threshold = 0;
  std::size_t svg_max_points = 5000;
  WedgeFlags wedge;
};

json violations_json(const ViolationReport& v, std::size_t outlier_threshold) {
  json per_model = json::object();
  for (std::size_t i = 0; i < v.model_names.size(); ++i) per_model[v.model_names[i]] = v.per_model[i];
  return {{"total", v.total},
          {"violating", v.violating},
          {"coverage", v.coverage},
          {"per_model", per_model},
          {"outliers", outlier_models(v, outlier_threshold)}};
}

SvgChart wedge_chart(const std::vector<TripletPoint>& points, const ClosenessParams& params,
                     std::size_t max_points) {
  SvgChart chart("Triplet events", "P(A)", "Q(A)");
  SvgChart::Points pts;
  const std::size_t stride = std::max<std::size_t>(1, (points.size() + max_points - 1) / std::max<std::size_t>(max_points, 1));
  double p_max = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    p_max = std::max(p_max, points[i].p);
    if (i % stride == 0) pts.emplace_back(points[i].p, points[i].q);
  }
  p_max = std::max(p_max, 1e-3);
  chart.scatter(std::move(pts), "#1f77b4", 1.5, "events");
  SvgChart::Points lower, upper;
  for (double x : linspace(0.0, p_max, 101)) {
    lower.emplace_back(x, params.lower_bound(x));
    upper.emplace_back(x, params.upper_bound(x));
  }
  chart.line({{0.0, 0.0}, {p_max, p_max}}, "#7f7f7f", "Q = P", true);
  chart.line(std::move(lower), "#d62728", "lower bound");
  chart.line(std::move(upper), "#2ca02c", "upper bound");
  return chart;
}

int cmd_closeness(const ClosenessOpts& o, const Common& c) {
  const auto [mp, mq] = align_matrices(load_matrix(o.p), load_matrix(o.q));
  const auto points = collect_triplet_points(mp, mq);
  const bool fitted = !o.wedge.given();
  const auto params = fitted ? fit_wedge(points, o.coverage) : o.wedge.params();
  const auto report = check_closeness(points, mp.model_names(), params);

  c.emit("closeness", "closeness",
         {{"models", mp.model_names()},
          {"n_points", points.size()},
          {"wedge", params_json(params)},
          {"wedge_fitted", fitted},
          {"violations", violations_json(report, o.outlier_threshold)}});
  if (c.wants("csv")) {
    std::ostringstream os;
    write_points_csv_header(os);
    for (const auto& pt : points) write_point_csv(os, pt);
    write_text(c.path("closeness_points.csv"), os.str());
  }
  if (c.wants("svg")) wedge_chart(points, params, o.svg_max_points).write(c.path("closeness.svg"));
  return kExitOk;
}

// ---- bound ------------------------------------------------------------------

struct BoundOpts {
  std::vector<double> mu;
  WedgeFlags wedge;
};

int cmd_bound(const BoundOpts& o, const Common& c) {
  if (o.mu.size() != 3) throw UsageError("--mu takes three accuracies");
  const auto params = o.wedge.params();
  const auto r = prop1_bound(o.mu[0], o.mu[1], o.mu[2], params);
  c.emit("bound", "bound",
         {{"mu", o.mu},
          {"params", params_json(params)},
          {"prop1_bound", r.bound_value},
          {"prop1_halved", r.halved_value},
          {"corollary_bound", corollary_bound(o.mu[0], o.mu[2], params)}});
  return kExitOk;
}

// ---- grid-bound -------------------------------------------------------------

struct GridOpts {
  double zeta = 0.0;
  std::vector<double> mu;
  double p_step = 0.01;
  std::size_t q_points = 5;
  bool no_q_dominance = false;
  WedgeFlags wedge;
};

int cmd_grid_bound(const GridOpts& o, const Common& c) {
  if (o.mu.size() != 3) throw UsageError("--mu takes three accuracies");
  GridSearchConfig cfg;
  cfg.zeta = o.zeta;
  cfg.mu = {o.mu[0], o.mu[1], o.mu[2]};
  cfg.params = o.wedge.params();
  cfg.p_grid_step = o.p_step;
  cfg.q_grid_points = o.q_points;
  cfg.q_dominance = !o.no_q_dominance;
  const auto r = max_residual_grid(cfg);
  c.emit("grid-bound", "grid_bound",
         {{"zeta", cfg.zeta},
          {"mu", o.mu},
          {"params", params_json(cfg.params)},
          {"p_grid_step", cfg.p_grid_step},
          {"q_grid_points", cfg.q_grid_points},
          {"q_dominance", cfg.q_dominance},
          {"max_value", r.max_value},
          {"halved", r.max_value / 2.0},
          {"certified_upper", r.certified_upper},
          {"p_points", r.p_points},
          {"q_points", r.q_points},
          {"witness", {{"p", triplet_json(r.p)}, {"q", triplet_json(r.q)}}}});
  return kExitOk;
}

// ---- trend ------------------------------------------------------------------

struct TrendOpts {
  std::string p, q;
  std::string kind = "all";
  std::size_t switch_index = 6;
  bool free_segments = false;
};

int cmd_trend(const TrendOpts& o, const Common& c) {
  const auto pairs = align(load_matrix(o.p), load_matrix(o.q)).pairs;
  json fits = json::object();
  SvgChart chart("Accuracy trend", "accuracy on P", "accuracy on Q");
  chart.scatter(accuracy_points(pairs), "#1f77b4", 3.0, "models");
  const double lo = pairs.mu_p.front();
  const double hi = pairs.mu_p.back();
  if (o.kind == "linear" || o.kind == "all") {
    const auto r = ols_fit(pairs);
    fits["linear"] = fit_json(r);
    chart.line(fit_curve(r, lo, hi), "#d62728", "linear");
  }
  if (o.kind == "probit" || o.kind == "all") {
    const auto r = probit_fit(pairs);
    fits["probit"] = fit_json(r);
    chart.line(fit_curve(r, lo, hi), "#2ca02c", "probit");
  }
  if (o.kind == "piecewise" || o.kind == "all") {
    const auto r = piecewise_fit(pairs, o.switch_index, {!o.free_segments, false});
    fits["piecewise"] = fit_json(r);
    chart.line(fit_curve(r, lo, hi), "#9467bd", "piecewise");
  }
  c.emit("trend", "trend", {{"models", pairs.model_names}, {"mu_p", pairs.mu_p}, {"mu_q", pairs.mu_q}, {"fits", fits}});
  if (c.wants("svg")) chart.write(c.path("trend.svg"));
  return kExitOk;
}

// ---- band -------------------------------------------------------------------

struct BandOpts {
  std::string p, q;
  std::vector<std::string> anchors;  // "mu_p,mu_q"
  std::size_t grid_points = 41;
  double zeta = 0.0;
  double p_step = 0.01;
  std::size_t q_points = 5;
  WedgeFlags wedge;
};

std::vector<AccuracyPoint> parse_anchors(const std::vector<std::string>& specs) {
  std::vector<AccuracyPoint> out;
  for (const auto& s : specs) {
    const auto comma = s.find(',');
    if (comma == std::string::npos) throw UsageError("anchor '" + s + "' is not mu_p,mu_q");
    try {
      std::size_t used = 0;
      const double a = std::stod(s.substr(0, comma), &used);
      const double b = std::stod(s.substr(comma + 1));
      out.push_back({a, b});
    } catch (const std::logic_error&) {
      throw UsageError("anchor '" + s + "' is not mu_p,mu_q");
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const AccuracyPoint& x, const AccuracyPoint& y) { return x.mu_p < y.mu_p; });
  return out;
}

int cmd_band(const BandOpts& o, const Common& c) {
  std::vector<AccuracyPoint> anchors;
  if (!o.anchors.empty()) {
    anchors = parse_anchors(o.anchors);
  } else if (!o.p.empty() && !o.q.empty()) {
    const auto pairs = align(load_matrix(o.p), load_matrix(o.q)).pairs;
    for (std::size_t i = 0; i < pairs.size(); ++i) anchors.push_back({pairs.mu_p[i], pairs.mu_q[i]});
  } else {
    throw UsageError("band needs --anchor values or both --p and --q");
  }
  if (anchors.size() < 2) throw UsageError("band needs at least two anchors");
  const auto params = o.wedge.params();
  const auto grid = linspace(anchors.front().mu_p, anchors.back().mu_p, std::max<std::size_t>(o.grid_points, 2));
  BandOptions opt;
  opt.zeta = o.zeta;
  opt.p_grid_step = o.p_step;
  opt.q_grid_points = o.q_points;
  const auto band = feasible_band(anchors, params, grid, opt);

  std::string csv = "mu_p,lower,upper\n";
  json rows = json::array();
  SvgChart::Points lower, upper, anchor_pts;
  for (const auto& b : band) {
    csv += csv_row({format_number(b.mu_p), format_number(b.lower), format_number(b.upper)});
    rows.push_back({{"mu_p", b.mu_p}, {"lower", b.lower}, {"upper", b.upper}, {"empty", b.empty()}});
    lower.emplace_back(b.mu_p, b.lower);
    upper.emplace_back(b.mu_p, b.upper);
  }
  json anchor_json = json::array();
  for (const auto& a : anchors) {
    anchor_json.push_back({{"mu_p", a.mu_p}, {"mu_q", a.mu_q}});
    anchor_pts.emplace_back(a.mu_p, a.mu_q);
  }
  c.emit("band", "band", {{"zeta", o.zeta}, {"params", params_json(params)}, {"anchors", anchor_json}, {"band", rows}});
  if (c.wants("csv")) write_text(c.path("band.csv"), csv);
  if (c.wants("svg")) {
    SvgChart chart("Feasible accuracies", "accuracy on P", "accuracy on Q");
    chart.line(std::move(lower), "#d62728", "lower");
    chart.line(std::move(upper), "#2ca02c", "upper");
    chart.scatter(std::move(anchor_pts), "#1f77b4", 4.0, "anchors");
    chart.write(c.path("band.svg"));
  }
  return kExitOk;
}

// ---- scenario ---------------------------------------------------------------

struct ScenarioOpts {
  std::string name = "all";
  std::size_t n = 100000;
  std::uint64_t seed = 1;
};

json recomputed(const CorrectnessMatrix& mp, const CorrectnessMatrix& mq) {
  const auto tp = triplet_events(mp, 0, 1, 2);
  const auto tq = triplet_events(mq, 0, 1, 2);
  json j = {{"p_cells", triplet_json(tp)},
            {"q_cells", triplet_json(tq)},
            {"mu_p", accuracies(mp)},
            {"mu_q", accuracies(mq)}};
  try {
    j["residual"] = residual_from_triplets(tp, tq);
  } catch (const DegenerateError&) {
    j["residual"] = nullptr;
  }
  return j;
}

void write_scenario(const Common& c, const std::string& name, const CorrectnessMatrix& mp,
                    const CorrectnessMatrix& mq, json extra, std::uint64_t seed) {
  for (const auto& [m, suffix] : {std::pair{&mp, "_P.csv"}, std::pair{&mq, "_Q.csv"}}) {
    std::ostringstream os;
    write_matrix(os, *m);
    write_text(c.path(name + suffix), os.str());
  }
  extra["name"] = name;
  extra["seed"] = seed;
  extra["n_examples"] = mp.n_examples();
  extra["files"] = {name + "_P.csv", name + "_Q.csv"};
  extra["sampled"] = recomputed(mp, mq);
  c.emit("scenario", name, std::move(extra));
}

int cmd_scenario(const ScenarioOpts& o, const Common& c) {
  const bool all = o.name == "all";
  bool any = false;
  for (auto make : {example1, example2}) {
    const auto s = make();
    if (!all && o.name != s.name) continue;
    any = true;
    json planted = {{"p", triplet_json(s.p)}, {"q", triplet_json(s.q)}, {"expected", s.expected}};
    write_scenario(c, s.name, sample_matrix(s.p, o.n, o.seed, "P"),
                   sample_matrix(s.q, o.n, o.seed + 1, "Q"), {{"planted", planted}}, o.seed);
  }
  if (all || o.name == "planted") {
    any = true;
    // Nested correct sets on both sides, Q accuracies on a line of slope 0.9.
    const std::vector<double> acc_p{0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85};
    std::vector<double> acc_q;
    for (double a : acc_p) acc_q.push_back(0.9 * a - 0.05);
    write_scenario(c, "planted", ordered_chain(acc_p, o.n, o.seed, "P"),
                   ordered_chain(acc_q, o.n, o.seed, "Q"),
                   {{"planted", {{"mu_p", acc_p}, {"mu_q", acc_q}, {"zeta", 0.0}}}}, o.seed);
  }
  if (!any) throw UsageError("unknown scenario '" + o.name + "' (example1, example2, planted, all)");
  return kExitOk;
}

// ---- report -----------------------------------------------------------------

struct ReportOpts {
  std::string p, q;
  std::vector<double> zetas{0.0, 0.05};
  std::size_t switch_index = 6;
  double coverage = 1.0;
  double dominance_threshold = 0.05;
  double p_step = 0.01;
  std::size_t q_points = 5;
  std::size_t curve_points = 21;
  WedgeFlags wedge;
};

int cmd_report(const ReportOpts& o, const Common& c) {
  const auto mp_raw = load_matrix(o.p);
  const auto mq_raw = load_matrix(o.q);
  const auto alignment = align(mp_raw, mq_raw);
  const auto& pairs = alignment.pairs;
  const std::size_t h = pairs.size();

  json result;
  json skipped = json::array();
  json failures = json::array();
  auto section = [&](const std::string& name, const std::function<void()>& body) {
    try {
      body();
    } catch (const std::exception& e) {
      failures.push_back({{"section", name}, {"error", e.what()}});
    }
  };
  auto skip = [&](const std::string& name, const std::string& why) {
    skipped.push_back({{"section", name}, {"reason", why}});
  };

  json models = json::array();
  for (std::size_t i = 0; i < h; ++i) {
    models.push_back({{"name", pairs.model_names[i]}, {"mu_p", pairs.mu_p[i]}, {"mu_q", pairs.mu_q[i]}});
  }
  result["models"] = models;
  result["only_in_p"] = alignment.only_in_p;
  result["only_in_q"] = alignment.only_in_q;

  section("dominance", [&] {
    if (mp_raw.n_models() < 2) return skip("dominance", "fewer than two models");
    const auto d = dominance_table(mp_raw, o.dominance_threshold);
    result["dominance"] = {{"zeta_max", d.zeta_max},
                           {"threshold", d.threshold},
                           {"fraction_below", d.fraction_below},
                           {"n_pairs", d.entries.size()}};
  });

  // Wedge: given on the command line, otherwise fitted. Bounds read it as
  // exact (coverage 1).
  std::optional<ClosenessParams> params;
  section("wedge", [&] {
    if (h < 3) return skip("wedge", "fewer than three common models");
    const auto [mp, mq] = align_matrices(mp_raw, mq_raw);
    const auto points = collect_triplet_points(mp, mq);
    const bool fitted = !o.wedge.given();
    params = fitted ? fit_wedge(points, o.coverage) : o.wedge.params();
    const auto v = check_closeness(points, mp.model_names(), *params);
    result["wedge"] = params_json(*params);
    result["wedge_fitted"] = fitted;
    result["violations"] = violations_json(v, 0);
  });
  const auto exact = params ? std::optional(params->low_segment ? *params : params->as_exact_wedge())
                            : std::nullopt;

  section("triples", [&] {
    if (!exact || h < 3) return skip("triples", "no wedge or fewer than three models");
    json rows = json::array();
    for (std::size_t i = 0; i + 2 < h; ++i) {
      json row = {{"models", {pairs.model_names[i], pairs.model_names[i + 1], pairs.model_names[i + 2]}},
                  {"mu_p", {pairs.mu_p[i], pairs.mu_p[i + 1], pairs.mu_p[i + 2]}}};
      if (pairs.mu_p[i] == pairs.mu_p[i + 2]) {
        row["skipped"] = "outer accuracies coincide";
      } else {
        const auto b = prop1_bound(pairs, i, i + 1, i + 2, exact->as_exact_wedge());
        row["residual"] = residual_from_accuracies({pairs.mu_p[i], pairs.mu_q[i]},
                                                   {pairs.mu_p[i + 1], pairs.mu_q[i + 1]},
                                                   {pairs.mu_p[i + 2], pairs.mu_q[i + 2]});
        row["prop1"] = b.bound_value;
        row["prop1_halved"] = b.halved_value;
        row["corollary"] = corollary_bound(pairs.mu_p[i], pairs.mu_p[i + 2], *exact);
      }
      rows.push_back(row);
    }
    result["triples"] = rows;
  });

  GridBoundCache cache;
  section("grid_bounds", [&] {
    if (!exact || h < 3) return skip("grid_bounds", "no wedge or fewer than three models");
    json per_zeta = json::array();
    for (double zeta : o.zetas) {
      json rows = json::array();
      for (std::size_t i = 0; i + 2 < h; ++i) {
        json row = {{"models", {pairs.model_names[i], pairs.model_names[i + 1], pairs.model_names[i + 2]}}};
        if (pairs.mu_p[i] == pairs.mu_p[i + 2]) {
          row["skipped"] = "outer accuracies coincide";
        } else {
          GridSearchConfig cfg;
          cfg.zeta = zeta;
          cfg.mu = {pairs.mu_p[i], pairs.mu_p[i + 1], pairs.mu_p[i + 2]};
          cfg.params = *exact;
          cfg.p_grid_step = o.p_step;
          cfg.q_grid_points = o.q_points;
          const auto r = max_residual_grid(cfg);
          row["max_value"] = r.max_value;
          row["halved"] = r.max_value / 2.0;
          row["certified_upper"] = r.certified_upper;
        }
        rows.push_back(row);
      }
      per_zeta.push_back({{"zeta", zeta}, {"triples", rows}});
    }
    result["grid_bounds"] = per_zeta;
  });

  std::optional<FitReport> linear, probit, piecewise;
  json fits = json::object();
  section("fits.linear", [&] {
    linear = ols_fit(pairs);
    fits["linear"] = fit_json(*linear);
  });
  section("fits.probit", [&] {
    probit = probit_fit(pairs);
    fits["probit"] = fit_json(*probit);
  });
  section("fits.piecewise", [&] {
    if (o.switch_index < 2 || o.switch_index + 2 > h) {
      return skip("fits.piecewise", "fewer than two models on a side of rank " + std::to_string(o.switch_index));
    }
    piecewise = piecewise_fit(pairs, o.switch_index);
    fits["piecewise"] = fit_json(*piecewise);
  });
  result["fits"] = fits;

  // Curves anchored at the least accurate, the median and the most accurate model.
  json curves = json::array();
  section("curves", [&] {
    if (!exact || h < 2) return skip("curves", "no wedge or fewer than two models");
    std::vector<std::size_t> idx{0, h / 2, h - 1};
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    std::vector<AccuracyPoint> anchors;
    json names = json::array();
    for (auto i : idx) {
      anchors.push_back({pairs.mu_p[i], pairs.mu_q[i]});
      names.push_back(pairs.model_names[i]);
    }
    if (anchors.front().mu_p == anchors.back().mu_p) return skip("curves", "all accuracies on P coincide");
    const auto grid = linspace(anchors.front().mu_p, anchors.back().mu_p, std::max<std::size_t>(o.curve_points, 2));
    for (double zeta : o.zetas) {
      BandOptions opt;
      opt.zeta = zeta;
      opt.p_grid_step = o.p_step;
      opt.q_grid_points = o.q_points;
      opt.cache = &cache;
      const auto lower = lower_bound_curve(anchors, zeta == 0.0 ? exact->as_exact_wedge() : *exact, grid, opt);
      curves.push_back({{"zeta", zeta}, {"anchors", names}, {"mu_p", grid}, {"lower", lower}});
    }
  });
  result["curves"] = curves;
  result["skipped"] = skipped;
  result["failures"] = failures;

  c.emit("report", "report", result);
  if (c.wants("svg") && h > 0) {
    const double lo = pairs.mu_p.front();
    const double hi = pairs.mu_p.back();
    SvgChart fig1("Accuracy on P vs Q", "accuracy on P", "accuracy on Q");
    fig1.scatter(accuracy_points(pairs), "#1f77b4", 3.0, "models");
    fig1.line({{lo, lo}, {hi, hi}}, "#7f7f7f", "y = x", true);
    if (linear) fig1.line(fit_curve(*linear, lo, hi), "#d62728", "linear fit");
    fig1.write(c.path("report_accuracy.svg"));

    SvgChart fig4("Lower bounds on Q accuracy", "accuracy on P", "accuracy on Q");
    fig4.scatter(accuracy_points(pairs), "#1f77b4", 3.0, "models");
    const char* colors[] = {"#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
    std::size_t k = 0;
    for (const auto& cv : curves) {
      SvgChart::Points pts;
      const auto& xs = cv["mu_p"];
      const auto& ys = cv["lower"];
      for (std::size_t i = 0; i < xs.size(); ++i) pts.emplace_back(xs[i].get<double>(), ys[i].get<double>());
      fig4.line(std::move(pts), colors[k++ % 4], "zeta = " + format_number(cv["zeta"].get<double>()));
    }
    fig4.write(c.path("report_lower_bounds.svg"));

    SvgChart fig5("Trend fits", "accuracy on P", "accuracy on Q");
    fig5.scatter(accuracy_points(pairs), "#1f77b4", 3.0, "models");
    if (probit) fig5.line(fit_curve(*probit, lo, hi), "#2ca02c", "probit");
    if (piecewise) fig5.line(fit_curve(*piecewise, lo, hi), "#9467bd", "piecewise");
    fig5.write(c.path("report_fits.svg"));
  }
  return failures.empty() ? kExitOk : kExitAnalysis;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Accuracy-on-the-line analysis: dominance, closeness, residual bounds and trends"};
  app.require_subcommand(1);
  Common common;
  common.args.assign(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::size_t threads = 0;
  app.add_option("--out,-o", common.out_dir, "output directory")->capture_default_str();
  app.add_option("--format", common.formats, "any of json, csv, svg")->delimiter(',')->capture_default_str();
  app.add_option("--threads", threads, "worker threads (default COLLAB_THREADS or all cores)");

  std::function<int()> action;
  auto existing = CLI::ExistingFile;

  DominanceOpts dom;
  auto* sc = app.add_subcommand("dominance", "pairwise dominance probabilities of one matrix");
  sc->add_option("--p", dom.p, "correctness matrix CSV")->required()->check(existing);
  sc->add_option("--threshold", dom.threshold)->capture_default_str();
  sc->callback([&] { action = [&] { return cmd_dominance(dom, common); }; });

  ClosenessOpts clo;
  sc = app.add_subcommand("closeness", "fit or check the closeness wedge over triplet events");
  sc->add_option("--p", clo.p)->required()->check(existing);
  sc->add_option("--q", clo.q)->required()->check(existing);
  sc->add_option("--coverage", clo.coverage, "share of events the fitted wedge must hold")->capture_default_str();
  sc->add_option("--outlier-threshold", clo.outlier_threshold)->capture_default_str();
  sc->add_option("--svg-max-points", clo.svg_max_points)->capture_default_str();
  clo.wedge.add_to(sc);
  sc->callback([&] { action = [&] { return cmd_closeness(clo, common); }; });

  BoundOpts bnd;
  sc = app.add_subcommand("bound", "analytic residual bounds for one triple");
  sc->add_option("--mu", bnd.mu, "three accuracies on P, e.g. 0.6,0.7,0.8")->required()->delimiter(',');
  bnd.wedge.add_to(sc);
  sc->callback([&] { action = [&] { return cmd_bound(bnd, common); }; });

  GridOpts grd;
  sc = app.add_subcommand("grid-bound", "grid-search residual bound for approximately ordered triples");
  sc->add_option("--zeta", grd.zeta)->capture_default_str();
  sc->add_option("--mu", grd.mu)->required()->delimiter(',');
  sc->add_option("--p-step", grd.p_step)->capture_default_str();
  sc->add_option("--q-points", grd.q_points)->capture_default_str();
  sc->add_flag("--no-q-dominance", grd.no_q_dominance, "do not hold Q cells to the zeta limits");
  grd.wedge.add_to(sc);
  sc->callback([&] { action = [&] { return cmd_grid_bound(grd, common); }; });

  TrendOpts trd;
  sc = app.add_subcommand("trend", "linear, probit and piecewise fits of Q accuracy on P accuracy");
  sc->add_option("--p", trd.p)->required()->check(existing);
  sc->add_option("--q", trd.q)->required()->check(existing);
  sc->add_option("--kind", trd.kind)->check(CLI::IsMember({"linear", "probit", "piecewise", "all"}))->capture_default_str();
  sc->add_option("--switch", trd.switch_index, "rank of the knot model")->capture_default_str();
  sc->add_flag("--free", trd.free_segments, "fit the two segments independently");
  sc->callback([&] { action = [&] { return cmd_trend(trd, common); }; });

  BandOpts bd;
  sc = app.add_subcommand("band", "range of Q accuracy allowed between anchor models");
  sc->add_option("--p", bd.p)->check(existing);
  sc->add_option("--q", bd.q)->check(existing);
  sc->add_option("--anchor", bd.anchors, "anchor as mu_p,mu_q (repeatable)");
  sc->add_option("--grid-points", bd.grid_points)->capture_default_str();
  sc->add_option("--zeta", bd.zeta)->capture_default_str();
  sc->add_option("--p-step", bd.p_step)->capture_default_str();
  sc->add_option("--q-points", bd.q_points)->capture_default_str();
  bd.wedge.add_to(sc);
  sc->callback([&] { action = [&] { return cmd_band(bd, common); }; });

  ScenarioOpts scn;
  sc = app.add_subcommand("scenario", "write example and planted fixtures");
  sc->add_option("--name", scn.name, "example1, example2, planted or all")->capture_default_str();
  sc->add_option("--n", scn.n, "examples per matrix")->capture_default_str();
  sc->add_option("--seed", scn.seed)->capture_default_str();
  sc->callback([&] { action = [&] { return cmd_scenario(scn, common); }; });

  ReportOpts rep;
  sc = app.add_subcommand("report", "full analysis bundle for a P/Q pair");
  sc->add_option("--p", rep.p)->required()->check(existing);
  sc->add_option("--q", rep.q)->required()->check(existing);
  sc->add_option("--zeta", rep.zetas, "dominance limits for grid bounds and curves")->delimiter(',')->capture_default_str();
  sc->add_option("--switch", rep.switch_index)->capture_default_str();
  sc->add_option("--coverage", rep.coverage)->capture_default_str();
  sc->add_option("--dominance-threshold", rep.dominance_threshold)->capture_default_str();
  sc->add_option("--p-step", rep.p_step)->capture_default_str();
  sc->add_option("--q-points", rep.q_points)->capture_default_str();
  sc->add_option("--curve-points", rep.curve_points)->capture_default_str();
  rep.wedge.add_to(sc);
  sc->callback([&] { action = [&] { return cmd_report(rep, common); }; });

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }

  try {
    if (threads > 0) setenv("COLLAB_THREADS", std::to_string(threads).c_str(), 1);
    fs::create_directories(common.out_dir);
    return action();
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << '\n';
    return kExitAnalysis;
  } catch (const DegenerateError& e) {
    err << "degenerate: " << e.what() << '\n';
    return kExitAnalysis;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitAnalysis;
  }
}

}  // namespace collab::tools
