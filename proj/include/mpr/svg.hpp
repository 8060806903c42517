#pragma once

// Minimal line/scatter plots as standalone SVG documents.

#include <string>
#include <vector>

namespace mpr {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool markers_only = false;
};

struct Plot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotSeries> series;
};

/// Renders axes with ticks, one polyline (or marker set) per series and a
/// legend. Non-finite points are skipped.
std::string render_svg(const Plot& plot);

}  // namespace mpr
