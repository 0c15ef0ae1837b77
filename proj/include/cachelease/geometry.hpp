#pragma once

#include <cmath>

namespace cachelease {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline double distance(const Point& a, const Point& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

/// Axis-aligned rectangle, coordinates in meters.
struct Rect {
  double xmin = 0.0;
  double ymin = 0.0;
  double xmax = 0.0;
  double ymax = 0.0;

  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
  double area() const { return width() * height(); }
  bool contains(const Point& p) const {
    return p.x >= xmin && p.x < xmax && p.y >= ymin && p.y < ymax;
  }
  Rect padded(double pad) const {
    return {xmin - pad, ymin - pad, xmax + pad, ymax + pad};
  }
  bool degenerate() const { return width() <= 0.0 || height() <= 0.0; }
};

}  // namespace cachelease
