#pragma once

// Minimal standalone SVG writer for line charts and heatmaps. Output depends only on the
// input data (fixed-precision coordinates), so identical data gives identical files.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "xyqaoa/error.hpp"
#include "xyqaoa/format.hpp"

namespace xyqaoa::svg {

inline std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
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

inline const char* palette(std::size_t i) {
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                 "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  return colors[i % 10];
}

struct Series {
  std::string name;
  std::vector<double> x, y;
  bool dashed = false;
  bool markers = true;
};

/// Vertical band between x0 and x1 (e.g. a light-cone region).
struct Band {
  double x0 = 0.0, x1 = 0.0;
  std::string label;
  std::string color = "#dddddd";
};

struct LinePlot {
  std::string title, x_label, y_label;
  std::vector<Series> series;
  std::vector<Band> bands;
  bool log_y = false;
  int width = 720, height = 480;
};

namespace detail {

inline std::string num(double v) { return format_fixed(v, 2); }

struct Axis {
  double lo, hi;
  double map(double v, double a, double b) const { return hi == lo ? 0.5 * (a + b) : a + (v - lo) / (hi - lo) * (b - a); }
};

inline std::vector<double> ticks(double lo, double hi, int target = 6) {
  if (!(hi > lo)) return {lo};
  const double raw = (hi - lo) / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (m * mag >= raw) {
      step = m * mag;
      break;
    }
  std::vector<double> out;
  for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * step; t += step) out.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
  return out;
}

}  // namespace detail

inline std::string render(const LinePlot& plot) {
  const double left = 70, right = 160, top = 40, bottom = 55;
  const double x0 = left, x1 = plot.width - right, y0 = plot.height - bottom, y1 = top;

  auto ty = [&](double v) { return plot.log_y ? std::log10(std::max(v, 1e-300)) : v; };
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
  for (const auto& s : plot.series)
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]) || (plot.log_y && s.y[i] <= 0.0)) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, ty(s.y[i]));
      ymax = std::max(ymax, ty(s.y[i]));
    }
  if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  if (xmax == xmin) xmax = xmin + 1;
  if (ymax == ymin) ymax = ymin + 1;
  const double pad = 0.05 * (ymax - ymin);
  const detail::Axis ax{xmin, xmax}, ay{ymin - pad, ymax + pad};

  std::string o;
  o += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(plot.width) + "\" height=\"" +
       std::to_string(plot.height) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (const auto& b : plot.bands) {
    const double bx0 = ax.map(std::clamp(b.x0, xmin, xmax), x0, x1);
    const double bx1 = ax.map(std::clamp(b.x1, xmin, xmax), x0, x1);
    if (bx1 <= bx0) continue;
    o += "<rect x=\"" + detail::num(bx0) + "\" y=\"" + detail::num(y1) + "\" width=\"" + detail::num(bx1 - bx0) +
         "\" height=\"" + detail::num(y0 - y1) + "\" fill=\"" + b.color + "\" fill-opacity=\"0.5\"/>\n";
    o += "<text x=\"" + detail::num(0.5 * (bx0 + bx1)) + "\" y=\"" + detail::num(y1 + 14) +
         "\" text-anchor=\"middle\" font-size=\"10\">" + escape(b.label) + "</text>\n";
  }
  o += "<rect x=\"" + detail::num(x0) + "\" y=\"" + detail::num(y1) + "\" width=\"" + detail::num(x1 - x0) +
       "\" height=\"" + detail::num(y0 - y1) + "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double t : detail::ticks(xmin, xmax)) {
    const double px = ax.map(t, x0, x1);
    o += "<line x1=\"" + detail::num(px) + "\" y1=\"" + detail::num(y0) + "\" x2=\"" + detail::num(px) + "\" y2=\"" +
         detail::num(y0 + 5) + "\" stroke=\"black\"/>\n";
    o += "<text x=\"" + detail::num(px) + "\" y=\"" + detail::num(y0 + 18) + "\" text-anchor=\"middle\">" +
         format_double(t, 6) + "</text>\n";
  }
  for (double t : detail::ticks(ay.lo, ay.hi)) {
    const double py = ay.map(t, y0, y1);
    o += "<line x1=\"" + detail::num(x0 - 5) + "\" y1=\"" + detail::num(py) + "\" x2=\"" + detail::num(x0) +
         "\" y2=\"" + detail::num(py) + "\" stroke=\"black\"/>\n";
    const std::string label = plot.log_y ? "1e" + format_double(t, 4) : format_double(t, 6);
    o += "<text x=\"" + detail::num(x0 - 8) + "\" y=\"" + detail::num(py + 4) + "\" text-anchor=\"end\">" + label +
         "</text>\n";
  }
  for (std::size_t k = 0; k < plot.series.size(); ++k) {
    const auto& s = plot.series[k];
    std::string pts;
    std::string marks;
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]) || (plot.log_y && s.y[i] <= 0.0)) continue;
      const double px = ax.map(s.x[i], x0, x1), py = ay.map(ty(s.y[i]), y0, y1);
      pts += detail::num(px) + "," + detail::num(py) + " ";
      if (s.markers)
        marks += "<circle cx=\"" + detail::num(px) + "\" cy=\"" + detail::num(py) + "\" r=\"2.5\" fill=\"" +
                 palette(k) + "\"/>\n";
    }
    o += "<polyline fill=\"none\" stroke=\"" + std::string(palette(k)) + "\" stroke-width=\"1.5\"" +
         (s.dashed ? " stroke-dasharray=\"6,4\"" : "") + " points=\"" + pts + "\"/>\n" + marks;
    const double ly = y1 + 16.0 * static_cast<double>(k) + 10;
    o += "<line x1=\"" + detail::num(x1 + 10) + "\" y1=\"" + detail::num(ly) + "\" x2=\"" + detail::num(x1 + 30) +
         "\" y2=\"" + detail::num(ly) + "\" stroke=\"" + palette(k) + "\" stroke-width=\"2\"" +
         (s.dashed ? " stroke-dasharray=\"6,4\"" : "") + "/>\n";
    o += "<text x=\"" + detail::num(x1 + 35) + "\" y=\"" + detail::num(ly + 4) + "\">" + escape(s.name) + "</text>\n";
  }
  o += "<text x=\"" + detail::num(0.5 * (x0 + x1)) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" +
       escape(plot.title) + "</text>\n";
  o += "<text x=\"" + detail::num(0.5 * (x0 + x1)) + "\" y=\"" + detail::num(plot.height - 12.0) +
       "\" text-anchor=\"middle\">" + escape(plot.x_label) + "</text>\n";
  o += "<text transform=\"translate(16," + detail::num(0.5 * (y0 + y1)) + ") rotate(-90)\" text-anchor=\"middle\">" +
       escape(plot.y_label) + "</text>\n";
  o += "</svg>\n";
  return o;
}

struct Heatmap {
  std::string title, x_label, y_label;
  std::vector<double> xs, ys;  ///< row coordinates (xs) and column coordinates (ys) of `values`
  Eigen::MatrixXd values;
  int width = 640, height = 560;
};

namespace detail {

// Perceptually ordered dark-blue to yellow ramp.
inline std::string ramp(double t) {
  t = std::clamp(t, 0.0, 1.0);
  static const double stops[][3] = {{68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}};
  const double pos = t * 4.0;
  const int i = std::min(3, static_cast<int>(pos));
  const double f = pos - i;
  char buf[8];
  int rgb[3];
  for (int c = 0; c < 3; ++c) rgb[c] = static_cast<int>(std::lround(stops[i][c] + f * (stops[i + 1][c] - stops[i][c])));
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
  return buf;
}

}  // namespace detail

inline std::string render(const Heatmap& h) {
  if (h.values.rows() != static_cast<Eigen::Index>(h.xs.size()) || h.values.cols() != static_cast<Eigen::Index>(h.ys.size()))
    throw InvalidDimension("heatmap coordinates do not match the value matrix");
  const double left = 70, right = 110, top = 40, bottom = 55;
  const double x0 = left, x1 = h.width - right, y0 = h.height - bottom, y1 = top;
  const double vmin = h.values.size() ? h.values.minCoeff() : 0.0;
  const double vmax = h.values.size() ? h.values.maxCoeff() : 1.0;
  const double span = vmax > vmin ? vmax - vmin : 1.0;
  const auto nx = static_cast<double>(h.xs.size()), ny = static_cast<double>(h.ys.size());
  const double cw = (x1 - x0) / std::max(nx, 1.0), ch = (y0 - y1) / std::max(ny, 1.0);

  std::string o;
  o += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(h.width) + "\" height=\"" +
       std::to_string(h.height) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (Eigen::Index a = 0; a < h.values.rows(); ++a)
    for (Eigen::Index b = 0; b < h.values.cols(); ++b) {
      const double px = x0 + cw * static_cast<double>(a);
      const double py = y0 - ch * static_cast<double>(b + 1);
      o += "<rect x=\"" + detail::num(px) + "\" y=\"" + detail::num(py) + "\" width=\"" + detail::num(cw + 0.05) +
           "\" height=\"" + detail::num(ch + 0.05) + "\" fill=\"" + detail::ramp((h.values(a, b) - vmin) / span) +
           "\"/>\n";
    }
  o += "<rect x=\"" + detail::num(x0) + "\" y=\"" + detail::num(y1) + "\" width=\"" + detail::num(x1 - x0) +
       "\" height=\"" + detail::num(y0 - y1) + "\" fill=\"none\" stroke=\"black\"/>\n";
  if (!h.xs.empty() && !h.ys.empty()) {
    const detail::Axis ax{h.xs.front(), h.xs.back()}, ay{h.ys.front(), h.ys.back()};
    for (double t : detail::ticks(std::min(ax.lo, ax.hi), std::max(ax.lo, ax.hi))) {
      const double px = ax.map(t, x0 + 0.5 * cw, x1 - 0.5 * cw);
      o += "<text x=\"" + detail::num(px) + "\" y=\"" + detail::num(y0 + 18) + "\" text-anchor=\"middle\">" +
           format_double(t, 6) + "</text>\n";
    }
    for (double t : detail::ticks(std::min(ay.lo, ay.hi), std::max(ay.lo, ay.hi))) {
      const double py = ay.map(t, y0 - 0.5 * ch, y1 + 0.5 * ch);
      o += "<text x=\"" + detail::num(x0 - 8) + "\" y=\"" + detail::num(py + 4) + "\" text-anchor=\"end\">" +
           format_double(t, 6) + "</text>\n";
    }
  }
  for (int i = 0; i <= 20; ++i) {
    const double t = i / 20.0;
    const double py = y0 - t * (y0 - y1);
    o += "<rect x=\"" + detail::num(x1 + 20) + "\" y=\"" + detail::num(py - (y0 - y1) / 20.0) +
         "\" width=\"20\" height=\"" + detail::num((y0 - y1) / 20.0 + 0.05) + "\" fill=\"" + detail::ramp(t) + "\"/>\n";
  }
  o += "<text x=\"" + detail::num(x1 + 45) + "\" y=\"" + detail::num(y1 + 4) + "\">" + format_double(vmax, 4) + "</text>\n";
  o += "<text x=\"" + detail::num(x1 + 45) + "\" y=\"" + detail::num(y0) + "\">" + format_double(vmin, 4) + "</text>\n";
  o += "<text x=\"" + detail::num(0.5 * (x0 + x1)) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" +
       escape(h.title) + "</text>\n";
  o += "<text x=\"" + detail::num(0.5 * (x0 + x1)) + "\" y=\"" + detail::num(h.height - 12.0) +
       "\" text-anchor=\"middle\">" + escape(h.x_label) + "</text>\n";
  o += "<text transform=\"translate(16," + detail::num(0.5 * (y0 + y1)) + ") rotate(-90)\" text-anchor=\"middle\">" +
       escape(h.y_label) + "</text>\n";
  o += "</svg>\n";
  return o;
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out.flush()) throw IoError("write failed for " + path.string());
}

}  // namespace xyqaoa::svg
