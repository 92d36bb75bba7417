#include "amprb/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace amprb {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"};

constexpr double kMarginLeft = 70, kMarginRight = 150, kMarginTop = 40, kMarginBottom = 55;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(const std::string& s) {
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

struct Axis {
  double lo = 0, hi = 1;
  bool log = false;
  double pixel_lo = 0, pixel_hi = 1;

  double map(double v) const {
    const double a = log ? std::log10(v) : v;
    return pixel_lo + (a - lo) / (hi - lo) * (pixel_hi - pixel_lo);
  }
  bool usable(double v) const { return std::isfinite(v) && (!log || v > 0.0); }
};

Axis make_axis(double lo, double hi, bool log, double p0, double p1) {
  Axis a;
  a.log = log;
  if (!(lo <= hi)) {
    lo = log ? 0.1 : 0.0;
    hi = 1.0;
  }
  if (log) {
    lo = std::log10(lo);
    hi = std::log10(hi);
  }
  if (hi - lo < 1e-300) {
    const double pad = std::max(std::abs(lo) * 0.05, 0.5);
    lo -= pad;
    hi += pad;
  }
  a.lo = lo;
  a.hi = hi;
  a.pixel_lo = p0;
  a.pixel_hi = p1;
  return a;
}

void extent(const std::vector<double>& v, bool log, double& lo, double& hi) {
  for (double x : v)
    if (std::isfinite(x) && (!log || x > 0.0)) {
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
}

void draw_frame(std::ostringstream& o, const PlotStyle& s, const Axis& ax, const Axis& ay) {
  const double w = s.width, h = s.height;
  o << "<rect x=\"0\" y=\"0\" width=\"" << s.width << "\" height=\"" << s.height << "\" fill=\"white\"/>\n";
  o << "<g id=\"axes\" stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n";
  o << "<line x1=\"" << num(kMarginLeft) << "\" y1=\"" << num(h - kMarginBottom) << "\" x2=\"" << num(w - kMarginRight)
    << "\" y2=\"" << num(h - kMarginBottom) << "\"/>\n";
  o << "<line x1=\"" << num(kMarginLeft) << "\" y1=\"" << num(kMarginTop) << "\" x2=\"" << num(kMarginLeft)
    << "\" y2=\"" << num(h - kMarginBottom) << "\"/>\n";
  o << "</g>\n<g id=\"ticks\" font-family=\"sans-serif\" font-size=\"11\" fill=\"black\">\n";
  for (int i = 0; i <= 4; ++i) {
    const double fx = ax.lo + (ax.hi - ax.lo) * i / 4.0;
    const double px = ax.pixel_lo + (ax.pixel_hi - ax.pixel_lo) * i / 4.0;
    o << "<text x=\"" << num(px) << "\" y=\"" << num(h - kMarginBottom + 16) << "\" text-anchor=\"middle\">"
      << tick_label(ax.log ? std::pow(10.0, fx) : fx) << "</text>\n";
    const double fy = ay.lo + (ay.hi - ay.lo) * i / 4.0;
    const double py = ay.pixel_lo + (ay.pixel_hi - ay.pixel_lo) * i / 4.0;
    o << "<text x=\"" << num(kMarginLeft - 6) << "\" y=\"" << num(py + 4) << "\" text-anchor=\"end\">"
      << tick_label(ay.log ? std::pow(10.0, fy) : fy) << "</text>\n";
  }
  o << "</g>\n<g id=\"labels\" font-family=\"sans-serif\" font-size=\"13\" fill=\"black\">\n";
  o << "<text x=\"" << num((kMarginLeft + w - kMarginRight) / 2) << "\" y=\"" << num(h - 14)
    << "\" text-anchor=\"middle\">" << escape(s.xlabel) << "</text>\n";
  o << "<text x=\"16\" y=\"" << num((kMarginTop + h - kMarginBottom) / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
    << num((kMarginTop + h - kMarginBottom) / 2) << ")\">" << escape(s.ylabel) << "</text>\n";
  o << "<text x=\"" << num(w / 2) << "\" y=\"22\" text-anchor=\"middle\">" << escape(s.title) << "</text>\n";
  o << "</g>\n";
}

void draw_series(std::ostringstream& o, const std::vector<PlotSeries>& series, const Axis& ax, const Axis& ay,
                 bool markers, const std::string& group) {
  if (series.empty()) return;
  o << "<g id=\"" << group << "\" fill=\"none\" stroke-width=\"1.5\">\n";
  for (size_t k = 0; k < series.size(); ++k) {
    const PlotSeries& s = series[k];
    const std::string color = s.color.empty() ? kPalette[k % 8] : s.color;
    o << "<polyline stroke=\"" << color << "\" points=\"";
    bool first = true;
    for (size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!ax.usable(s.x[i]) || !ay.usable(s.y[i])) continue;
      o << (first ? "" : " ") << num(ax.map(s.x[i])) << "," << num(ay.map(s.y[i]));
      first = false;
    }
    o << "\"/>\n";
    if (markers)
      for (size_t i = 0; i < s.x.size() && i < s.y.size(); ++i)
        if (ax.usable(s.x[i]) && ay.usable(s.y[i]))
          o << "<circle cx=\"" << num(ax.map(s.x[i])) << "\" cy=\"" << num(ay.map(s.y[i])) << "\" r=\"2.5\" fill=\""
            << color << "\"/>\n";
  }
  o << "</g>\n";
}

void draw_legend(std::ostringstream& o, const std::vector<PlotSeries>& series, const PlotStyle& s) {
  if (series.empty()) return;
  o << "<g id=\"legend\" font-family=\"sans-serif\" font-size=\"11\">\n";
  for (size_t k = 0; k < series.size(); ++k) {
    const std::string color = series[k].color.empty() ? kPalette[k % 8] : series[k].color;
    const double y = kMarginTop + 14.0 * k + 6;
    const double x = s.width - kMarginRight + 10;
    o << "<line x1=\"" << num(x) << "\" y1=\"" << num(y) << "\" x2=\"" << num(x + 18) << "\" y2=\"" << num(y)
      << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    o << "<text x=\"" << num(x + 22) << "\" y=\"" << num(y + 4) << "\" fill=\"black\">" << escape(series[k].name)
      << "</text>\n";
  }
  o << "</g>\n";
}

std::string header(const PlotStyle& s) {
  if (s.width < 200 || s.height < 150) throw std::invalid_argument("plot: viewport must be at least 200 x 150");
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << s.width << "\" height=\"" << s.height
    << "\" viewBox=\"0 0 " << s.width << " " << s.height << "\">\n";
  return o.str();
}

void write_file(const std::string& text, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("plot: cannot write \"" + path + "\"");
  out << text;
  if (!out) throw std::runtime_error("plot: write failed for \"" + path + "\"");
}

}  // namespace

std::string render_plot(const std::vector<PlotSeries>& series, const PlotStyle& style) {
  if (series.empty()) throw std::invalid_argument("plot: no series");
  for (const auto& s : series)
    if (s.x.size() != s.y.size()) throw std::invalid_argument("plot: series \"" + s.name + "\" has mismatched x and y");
  double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo, ylo = xlo, yhi = -xlo;
  for (const auto& s : series) {
    extent(s.x, style.log_x, xlo, xhi);
    extent(s.y, style.log_y, ylo, yhi);
  }
  const Axis ax = make_axis(xlo, xhi, style.log_x, kMarginLeft, style.width - kMarginRight);
  const Axis ay = make_axis(ylo, yhi, style.log_y, style.height - kMarginBottom, kMarginTop);
  std::ostringstream o;
  o << header(style);
  draw_frame(o, style, ax, ay);
  draw_series(o, series, ax, ay, style.markers, "series");
  draw_legend(o, series, style);
  o << "</svg>\n";
  return o.str();
}

void emit_plot(const std::vector<PlotSeries>& series, const PlotStyle& style, const std::string& path) {
  write_file(render_plot(series, style), path);
}

std::string render_region_plot(const std::vector<PlotCell>& cells, const std::vector<PlotSeries>& overlay,
                               const PlotStyle& style) {
  if (cells.empty()) throw std::invalid_argument("plot: no lattice cells");
  double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo, ylo = xlo, yhi = -xlo;
  for (const auto& c : cells) {
    xlo = std::min({xlo, c.x0, c.x1});
    xhi = std::max({xhi, c.x0, c.x1});
    ylo = std::min({ylo, c.y0, c.y1});
    yhi = std::max({yhi, c.y0, c.y1});
  }
  const Axis ax = make_axis(xlo, xhi, false, kMarginLeft, style.width - kMarginRight);
  const Axis ay = make_axis(ylo, yhi, false, style.height - kMarginBottom, kMarginTop);
  std::ostringstream o;
  o << header(style);
  draw_frame(o, style, ax, ay);
  o << "<g id=\"cells\" stroke=\"none\">\n";
  for (const auto& c : cells) {
    const double px0 = ax.map(std::min(c.x0, c.x1)), px1 = ax.map(std::max(c.x0, c.x1));
    const double py0 = ay.map(std::max(c.y0, c.y1)), py1 = ay.map(std::min(c.y0, c.y1));
    o << "<rect x=\"" << num(px0) << "\" y=\"" << num(py0) << "\" width=\"" << num(px1 - px0) << "\" height=\""
      << num(py1 - py0) << "\" fill=\"" << (c.color.empty() ? "#cccccc" : c.color) << "\"/>\n";
  }
  o << "</g>\n";
  std::vector<PlotSeries> visible;
  for (const auto& s : overlay)
    if (!s.x.empty()) visible.push_back(s);
  draw_series(o, visible, ax, ay, false, "overlay");
  draw_legend(o, visible, style);
  o << "</svg>\n";
  return o.str();
}

void emit_region_plot(const std::vector<PlotCell>& cells, const std::vector<PlotSeries>& overlay,
                      const PlotStyle& style, const std::string& path) {
  write_file(render_region_plot(cells, overlay, style), path);
}

}  // namespace amprb
