#include "rmedge/painleve.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "rmedge/error.hpp"
#include "rmedge/linop.hpp"
#include "rmedge/ode.hpp"
#include "rmedge/specfun.hpp"

namespace rmedge {

PiiSolution solve_pii(double t, const std::vector<double>& xs, double x_max) {
  if (!(t >= 0) || !std::isfinite(t)) throw Error(ErrorKind::invalid_argument, "painleve", "t must be >= 0");
  if (!(x_max >= 6)) throw Error(ErrorKind::invalid_argument, "painleve", "x_max must be >= 6");
  for (double x : xs)
    if (!std::isfinite(x)) throw Error(ErrorKind::invalid_argument, "painleve", "grid points must be finite");
  PiiSolution s;
  s.t = t;
  s.x_anchor = std::max(x_max, xs.empty() ? x_max : *std::max_element(xs.begin(), xs.end()));
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] > xs[b]; });
  s.xs.assign(xs.size(), 0.0);
  s.w = s.wp = s.I1 = s.I2 = s.xs;
  auto rhs = [](double x, const std::vector<double>& y, std::vector<double>& dy) {
    dy[0] = y[1];
    dy[1] = 2 * y[0] * y[0] * y[0] + x * y[0];
    dy[2] = -y[0] * y[0];
    dy[3] = -x * y[0] * y[0];
  };
  OdeOptions opt;
  opt.rtol = 1e-11;
  // w is ~1e-8 at the anchor: absolute control would swamp it
  opt.atol = 1e-30;
  opt.max_abs = 1e8;
  DormandPrince dp(rhs, opt);
  auto a = airy(s.x_anchor);
  const double st = std::sqrt(t);
  std::vector<double> y = {-st * a.ai, -st * a.aip, 0, 0};
  double x = s.x_anchor;
  // results in ascending order
  std::vector<std::size_t> pos(xs.size());
  for (std::size_t k = 0; k < order.size(); ++k) pos[order[k]] = order.size() - 1 - k;
  for (std::size_t k = 0; k < order.size(); ++k) {
    std::size_t src = order[k];
    try {
      dp.advance(x, y, xs[src]);
    } catch (const Error&) {
      std::ostringstream os;
      os << "solution blew up below x = " << x << " (t = " << t << ")";
      throw Error(ErrorKind::divergence, "painleve", os.str());
    }
    std::size_t p = pos[src];
    s.xs[p] = xs[src];
    s.w[p] = y[0];
    s.wp[p] = y[1];
    s.I1[p] = y[2];
    s.I2[p] = y[3];
  }
  return s;
}

PiiSolution solve_pii(double t, double x_min, double x_max, double dx) {
  if (!(dx > 0) || !(x_min < x_max)) throw Error(ErrorKind::invalid_argument, "painleve", "need x_min < x_max, dx > 0");
  std::vector<double> xs;
  int n = static_cast<int>(std::ceil((x_max - x_min) / dx - 1e-9));
  for (int k = 0; k <= n; ++k) xs.push_back(std::max(x_min, x_max - k * dx));
  std::reverse(xs.begin(), xs.end());
  return solve_pii(t, xs, x_max);
}

TWCurve tw_cdf(double t, const std::vector<double>& xs, double x_max) {
  PiiSolution s = solve_pii(t, xs, x_max);
  // int_X^inf Ai^2 = Ai'^2 - X Ai^2 and int_X^inf y Ai^2 = (-X^2 Ai^2 + X Ai'^2 - Ai Ai') / 3
  const double X = s.x_anchor;
  auto a = airy(X);
  const double tail1 = t * (a.aip * a.aip - X * a.ai * a.ai);
  const double tail2 = t * (-X * X * a.ai * a.ai + X * a.aip * a.aip - a.ai * a.aip) / 3;
  TWCurve c;
  c.t = t;
  c.route = TWRoute::painleve;
  c.xs = s.xs;
  c.w_values = s.w;
  for (std::size_t i = 0; i < s.xs.size(); ++i) {
    double e = (s.I2[i] + tail2) - s.xs[i] * (s.I1[i] + tail1);
    c.F_values.push_back(std::exp(-e));
  }
  return c;
}

double tw_det(double t, double x, int n) {
  auto op = discretize(airy_hankel_symbol(x), Interval{0, kInf}, n);
  double d = 1;
  for (double g : symmetric_eigenvalues(op.matrix)) d *= 1 - t * g * g;
  return d;
}

TWCurve tw_cdf_det(double t, const std::vector<double>& xs, int n) {
  TWCurve c;
  c.t = t;
  c.route = TWRoute::determinant;
  std::vector<double> sorted = xs;
  std::sort(sorted.begin(), sorted.end());
  c.xs = sorted;
  for (double x : sorted) c.F_values.push_back(tw_det(t, x, n));
  return c;
}

std::string to_string(TWRoute r) { return r == TWRoute::painleve ? "painleve" : "determinant"; }

}  // namespace rmedge
