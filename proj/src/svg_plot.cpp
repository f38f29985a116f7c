#include "fixpointrl/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <vector>

namespace fixpointrl::plot {

namespace {

constexpr double kWidth = 720, kHeight = 480;
constexpr double kLeft = 80, kRight = 20, kTop = 40, kBottom = 60;

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

std::string tick(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", std::abs(x) < 1e-12 ? 0.0 : x);
  return buf;
}

// Tick positions at 1-2-5 multiples of a power of ten, about five per axis.
std::vector<double> nice_ticks(double lo, double hi) {
  const double raw = (hi - lo) / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {2.0, 5.0, 10.0}) {
    if (raw / mag > m * 0.75) step = m * mag;
  }
  std::vector<double> ticks;
  for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * step; t += step) ticks.push_back(t);
  return ticks;
}

}  // namespace

std::string palette(std::size_t i) {
  static const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                 "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  return colors[i % 10];
}

std::string xml_escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

SvgChart::SvgChart(std::string title, std::string x_label, std::string y_label)
    : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

void SvgChart::add_line(const std::vector<double>& x, const std::vector<double>& y,
                        const std::string& color) {
  lines_.push_back({x, y, color});
}

void SvgChart::add_scatter(const std::vector<double>& x, const std::vector<double>& y,
                           const std::string& color) {
  points_.push_back({x, y, color});
}

void SvgChart::add_hline(double y, const std::string& color, bool dashed, const std::string& label) {
  hlines_.push_back({y, color, dashed, label});
}

std::string SvgChart::render() const {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  auto fy = [&](double y) { return log_y_ ? std::log10(std::max(y, 1e-300)) : y; };
  auto extend = [&](const Series& s) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, fy(s.y[i]));
      ymax = std::max(ymax, fy(s.y[i]));
    }
  };
  for (const auto& s : lines_) extend(s);
  for (const auto& s : points_) extend(s);
  for (const auto& h : hlines_) {
    ymin = std::min(ymin, fy(h.y));
    ymax = std::max(ymax, fy(h.y));
  }
  if (!std::isfinite(xmin)) xmin = 0, xmax = 1;
  if (!std::isfinite(ymin)) ymin = 0, ymax = 1;
  if (xmax - xmin <= 0) xmax = xmin + 1;
  if (ymax - ymin <= 0) ymax = ymin + 1;
  const double pad = 0.04 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;

  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double y) { return kTop + (1.0 - (fy(y) - ymin) / (ymax - ymin)) * ph; };
  auto py_raw = [&](double v) { return kTop + (1.0 - (v - ymin) / (ymax - ymin)) * ph; };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"16\">"
      << xml_escape(title_) << "</text>\n"
      << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (double xv : nice_ticks(xmin, xmax)) {
    svg << "<line x1=\"" << num(px(xv)) << "\" x2=\"" << num(px(xv)) << "\" y1=\"" << num(kTop + ph)
        << "\" y2=\"" << num(kTop + ph + 4) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << num(px(xv)) << "\" y=\"" << num(kTop + ph + 18)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << tick(xv)
        << "</text>\n";
  }
  std::vector<double> yticks;
  if (log_y_) {
    for (double e = std::ceil(ymin); e <= ymax; e += 1.0) yticks.push_back(e);
  }
  if (yticks.size() < 2) yticks = nice_ticks(ymin, ymax);
  for (double yv : yticks) {
    svg << "<line x1=\"" << num(kLeft - 4) << "\" x2=\"" << num(kLeft) << "\" y1=\"" << num(py_raw(yv))
        << "\" y2=\"" << num(py_raw(yv)) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(py_raw(yv) + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << tick(log_y_ ? std::pow(10.0, yv) : yv) << "</text>\n";
  }
  svg << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 16
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
      << xml_escape(x_label_) << "</text>\n"
      << "<text x=\"18\" y=\"" << kTop + ph / 2 << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"13\" transform=\"rotate(-90 18 " << kTop + ph / 2 << ")\">"
      << xml_escape(y_label_) << "</text>\n";

  for (std::size_t i = 0; i < hlines_.size(); ++i) {
    const HLine& h = hlines_[i];
    svg << "<line x1=\"" << kLeft << "\" x2=\"" << kLeft + pw << "\" y1=\"" << num(py(h.y))
        << "\" y2=\"" << num(py(h.y)) << "\" stroke=\"" << h.color << "\" stroke-width=\"1\""
        << (h.dashed ? " stroke-dasharray=\"6 4\"" : "") << "/>\n";
    if (!h.label.empty()) {
      // Alternate labels above and below their line so neighbors do not collide.
      svg << "<text x=\"" << num(kLeft + pw - 4) << "\" y=\"" << num(py(h.y) + (i % 2 ? 12 : -4))
          << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">"
          << xml_escape(h.label) << "</text>\n";
    }
  }
  for (const auto& s : lines_) {
    svg << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.2\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (i) svg << ' ';
      svg << num(px(s.x[i])) << ',' << num(py(s.y[i]));
    }
    svg << "\"/>\n";
  }
  for (const auto& s : points_) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      svg << "<circle cx=\"" << num(px(s.x[i])) << "\" cy=\"" << num(py(s.y[i]))
          << "\" r=\"2\" fill=\"" << s.color << "\"/>\n";
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace fixpointrl::plot
