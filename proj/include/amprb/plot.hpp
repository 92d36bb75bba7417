#pragma once

#include <string>
#include <vector>

namespace amprb {

struct PlotSeries {
  std::string name;
  std::vector<double> x, y;
  std::string color;  // empty picks from the palette
};

struct PlotStyle {
  std::string title;
  std::string xlabel, ylabel;
  int width = 640, height = 480;
  bool log_x = false, log_y = false;
  bool markers = false;
};

// Axis-aligned lattice cell, coordinates in data units.
struct PlotCell {
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  std::string color;
};

// Deterministic SVG: fixed viewport, axes, one polyline per series, legend.
std::string render_plot(const std::vector<PlotSeries>& series, const PlotStyle& style);
void emit_plot(const std::vector<PlotSeries>& series, const PlotStyle& style, const std::string& path);

// Coloured lattice cells with optional polylines drawn on top.
std::string render_region_plot(const std::vector<PlotCell>& cells, const std::vector<PlotSeries>& overlay,
                               const PlotStyle& style);
void emit_region_plot(const std::vector<PlotCell>& cells, const std::vector<PlotSeries>& overlay,
                      const PlotStyle& style, const std::string& path);

}  // namespace amprb
