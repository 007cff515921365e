#pragma once

namespace rmedge {

// Quintic Hermite interpolation on a cell of width h from value, first and
// second derivative at both ends; t in [0, 1].
inline double quintic_hermite(double t, double h, double p0, double d0, double s0, double p1, double d1,
                              double s1) {
  double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
  double h0 = 1 - 10 * t3 + 15 * t4 - 6 * t5;
  double h1 = t - 6 * t3 + 8 * t4 - 3 * t5;
  double h2 = 0.5 * (t2 - 3 * t3 + 3 * t4 - t5);
  double h3 = 0.5 * (t3 - 2 * t4 + t5);
  double h4 = -4 * t3 + 7 * t4 - 3 * t5;
  double h5 = 10 * t3 - 15 * t4 + 6 * t5;
  return h0 * p0 + h * h1 * d0 + h * h * h2 * s0 + h5 * p1 + h * h4 * d1 + h * h * h3 * s1;
}

}  // namespace rmedge
