#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace collab::tools {

// Minimal line/scatter chart. Axis ranges cover everything added unless
// fixed with set_range.
class SvgChart {
 public:
  using Points = std::vector<std::pair<double, double>>;

  SvgChart(std::string title, std::string x_label, std::string y_label);

  void scatter(Points pts, std::string color, double radius = 2.5, std::string legend = {});
  void line(Points pts, std::string color, std::string legend = {}, bool dashed = false);
  void set_range(double x_min, double x_max, double y_min, double y_max);

  std::string render() const;
  void write(const std::filesystem::path& path) const;

 private:
  struct Series {
    Points pts;
    std::string color;
    std::string legend;
    double radius;
    bool is_line;
    bool dashed;
  };

  std::string title_, x_label_, y_label_;
  std::vector<Series> series_;
  bool fixed_range_ = false;
  double x0_ = 0, x1_ = 1, y0_ = 0, y1_ = 1;
};

}  // namespace collab::tools
