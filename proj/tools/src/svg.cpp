#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "collab/errors.hpp"
#include "output.hpp"

namespace collab::tools {
namespace {

constexpr double kWidth = 640, kHeight = 480;
constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 60;

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

SvgChart::SvgChart(std::string title, std::string x_label, std::string y_label)
    : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

void SvgChart::scatter(Points pts, std::string color, double radius, std::string legend) {
  series_.push_back({std::move(pts), std::move(color), std::move(legend), radius, false, false});
}

void SvgChart::line(Points pts, std::string color, std::string legend, bool dashed) {
  series_.push_back({std::move(pts), std::move(color), std::move(legend), 0.0, true, dashed});
}

void SvgChart::set_range(double x_min, double x_max, double y_min, double y_max) {
  fixed_range_ = true;
  x0_ = x_min;
  x1_ = x_max;
  y0_ = y_min;
  y1_ = y_max;
}

std::string SvgChart::render() const {
  double x0 = x0_, x1 = x1_, y0 = y0_, y1 = y1_;
  if (!fixed_range_) {
    x0 = y0 = std::numeric_limits<double>::infinity();
    x1 = y1 = -std::numeric_limits<double>::infinity();
    for (const auto& s : series_) {
      for (auto [x, y] : s.pts) {
        if (!std::isfinite(x) || !std::isfinite(y)) continue;
        x0 = std::min(x0, x);
        x1 = std::max(x1, x);
        y0 = std::min(y0, y);
        y1 = std::max(y1, y);
      }
    }
    if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    const double px = (x1 - x0) * 0.05 + 1e-9;
    const double py = (y1 - y0) * 0.05 + 1e-9;
    x0 -= px, x1 += px, y0 -= py, y1 += py;
  }
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
  auto sy = [&](double y) { return kTop + (1.0 - (y - y0) / (y1 - y0)) * ph; };
  auto num = [](double v) { return format_number(std::round(v * 100.0) / 100.0); };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
    << escape(title_) << "</text>\n";
  o << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 5; ++t) {
    const double xv = x0 + (x1 - x0) * t / 5.0;
    const double yv = y0 + (y1 - y0) * t / 5.0;
    o << "<text x=\"" << num(sx(xv)) << "\" y=\"" << kTop + ph + 18
      << "\" text-anchor=\"middle\">" << format_number(std::round(xv * 1000.0) / 1000.0)
      << "</text>\n";
    o << "<text x=\"" << kLeft - 6 << "\" y=\"" << num(sy(yv) + 4)
      << "\" text-anchor=\"end\">" << format_number(std::round(yv * 1000.0) / 1000.0)
      << "</text>\n";
  }
  o << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 15
    << "\" text-anchor=\"middle\">" << escape(x_label_) << "</text>\n";
  o << "<text transform=\"translate(18," << kTop + ph / 2
    << ") rotate(-90)\" text-anchor=\"middle\">" << escape(y_label_) << "</text>\n";
  o << "<clipPath id=\"plot\"><rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw
    << "\" height=\"" << ph << "\"/></clipPath>\n<g clip-path=\"url(#plot)\">\n";
  for (const auto& s : series_) {
    if (s.is_line) {
      o << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\""
        << (s.dashed ? " stroke-dasharray=\"5,4\"" : "") << " points=\"";
      for (auto [x, y] : s.pts) {
        if (std::isfinite(x) && std::isfinite(y)) o << num(sx(x)) << ',' << num(sy(y)) << ' ';
      }
      o << "\"/>\n";
    } else {
      for (auto [x, y] : s.pts) {
        if (!std::isfinite(x) || !std::isfinite(y)) continue;
        o << "<circle cx=\"" << num(sx(x)) << "\" cy=\"" << num(sy(y)) << "\" r=\"" << s.radius
          << "\" fill=\"" << s.color << "\" fill-opacity=\"0.7\"/>\n";
      }
    }
  }
  o << "</g>\n";
  double ly = kTop + 14;
  for (const auto& s : series_) {
    if (s.legend.empty()) continue;
    o << "<rect x=\"" << kLeft + 10 << "\" y=\"" << ly - 9 << "\" width=\"10\" height=\"10\" fill=\""
      << s.color << "\"/><text x=\"" << kLeft + 26 << "\" y=\"" << ly << "\">" << escape(s.legend)
      << "</text>\n";
    ly += 16;
  }
  o << "</svg>\n";
  return o.str();
}

void SvgChart::write(const std::filesystem::path& path) const { write_text(path, render()); }

}  // namespace collab::tools
