#pragma once

namespace extrap {

/// A point of the data or extrapolation domain. Interval domains use the
/// scalar coordinate `u`; spherical domains use `(u, v) = (theta, phi)`.
struct Point {
  double u = 0.0;
  double v = 0.0;
  bool on_sphere = false;

  static Point interval(double x) { return {x, 0.0, false}; }
  static Point sphere(double theta, double phi) { return {theta, phi, true}; }
};

}  // namespace extrap
