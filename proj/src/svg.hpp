#pragma once

// Minimal scatter/line chart writer for the report figures.

#include <string>
#include <vector>

namespace legevo::svg {

struct Point {
  double x = 0.0;
  double y = 0.0;
  std::string color = "#1f77b4";
};

struct Series {
  std::string label;
  std::string color = "#1f77b4";
  std::vector<Point> points;
  bool connect = false;  // draw a polyline through the points in order
};

struct Chart {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
  /// Optional colour bar for per-point colours, as (min, max, label).
  bool colorbar = false;
  double colorbar_min = 0.0;
  double colorbar_max = 1.0;
  std::string colorbar_label;

  std::string render() const;
};

/// Sequential colour for t in [0, 1], dark blue to yellow.
std::string ramp(double t);

/// One of ten distinct categorical colours.
std::string category(std::size_t i);

}  // namespace legevo::svg
