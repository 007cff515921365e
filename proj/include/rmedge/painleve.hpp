#pragma once

#include <string>
#include <vector>

namespace rmedge {

// w'' = 2 w^3 + x w with w ~ -sqrt(t) Ai(x) as x -> +inf, anchored at x_max
// and integrated backward. I1(x) = int_x^xmax w^2, I2(x) = int_x^xmax y w^2.
struct PiiSolution {
  double t = 0.0;
  double x_anchor = 8.0;
  std::vector<double> xs;  // ascending
  std::vector<double> w, wp, I1, I2;
};

PiiSolution solve_pii(double t, const std::vector<double>& xs, double x_max = 8.0);
PiiSolution solve_pii(double t, double x_min, double x_max = 8.0, double dx = 0.01);

enum class TWRoute { painleve, determinant };

struct TWCurve {
  double t = 0.0;
  TWRoute route = TWRoute::painleve;
  std::vector<double> xs;
  std::vector<double> F_values;
  std::vector<double> w_values;  // painleve route only
};

// F(x; t) = exp(-int_x^inf (y - x) w(y; t)^2 dy), tails beyond x_max added in closed form
TWCurve tw_cdf(double t, const std::vector<double>& xs, double x_max = 8.0);

// F(x; t) = det(I - t Gamma_x^2), Gamma_x the Hankel operator with symbol Ai(x + .)
TWCurve tw_cdf_det(double t, const std::vector<double>& xs, int n = 80);
double tw_det(double t, double x, int n = 80);

std::string to_string(TWRoute r);

}  // namespace rmedge
