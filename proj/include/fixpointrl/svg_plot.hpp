#pragma once

#include <string>
#include <vector>

namespace fixpointrl::plot {

/// Minimal static SVG chart: line series, scatter series and horizontal
/// reference lines on linear axes.
class SvgChart {
 public:
  SvgChart(std::string title, std::string x_label, std::string y_label);

  void add_line(const std::vector<double>& x, const std::vector<double>& y,
                const std::string& color);
  void add_scatter(const std::vector<double>& x, const std::vector<double>& y,
                   const std::string& color);
  void add_hline(double y, const std::string& color, bool dashed, const std::string& label = {});
  void set_log_y(bool log_y) { log_y_ = log_y; }

  bool empty() const { return lines_.empty() && points_.empty(); }
  std::string render() const;

 private:
  struct Series {
    std::vector<double> x, y;
    std::string color;
  };
  struct HLine {
    double y;
    std::string color;
    bool dashed;
    std::string label;
  };

  std::string title_, x_label_, y_label_;
  std::vector<Series> lines_;
  std::vector<Series> points_;
  std::vector<HLine> hlines_;
  bool log_y_ = false;
};

/// Color of series i from a fixed categorical palette.
std::string palette(std::size_t i);

std::string xml_escape(const std::string& text);

}  // namespace fixpointrl::plot
