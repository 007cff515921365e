#include "rmedge/ode.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rmedge/error.hpp"

namespace rmedge {

namespace {

constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// 5th minus 4th order weights
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace

DormandPrince::DormandPrince(OdeRhs f, OdeOptions opt) : f_(std::move(f)), opt_(opt), h_(opt.h0) {}

void DormandPrince::advance(double& x, std::vector<double>& y, double x_end) {
  const std::size_t n = y.size();
  if (x == x_end) return;
  for (auto& k : k_) k.resize(n);
  tmp_.resize(n);
  ynew_.resize(n);
  const double dir = x_end > x ? 1.0 : -1.0;
  double h = std::fabs(h_);
  if (h == 0.0) h = std::min(1e-3, std::fabs(x_end - x));
  f_(x, y, k_[0]);
  while (dir * (x_end - x) > 0) {
    if (++steps_ > opt_.max_steps)
      throw Error(ErrorKind::divergence, "ode", "step budget exhausted at x=" + std::to_string(x));
    bool last = false;
    double hs = h;
    if (hs >= std::fabs(x_end - x)) {
      hs = std::fabs(x_end - x);
      last = true;
    }
    double hd = dir * hs;
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + hd * a21 * k_[0][i];
    f_(x + c2 * hd, tmp_, k_[1]);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + hd * (a31 * k_[0][i] + a32 * k_[1][i]);
    f_(x + c3 * hd, tmp_, k_[2]);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + hd * (a41 * k_[0][i] + a42 * k_[1][i] + a43 * k_[2][i]);
    f_(x + c4 * hd, tmp_, k_[3]);
    for (std::size_t i = 0; i < n; ++i)
      tmp_[i] = y[i] + hd * (a51 * k_[0][i] + a52 * k_[1][i] + a53 * k_[2][i] + a54 * k_[3][i]);
    f_(x + c5 * hd, tmp_, k_[4]);
    for (std::size_t i = 0; i < n; ++i)
      tmp_[i] = y[i] + hd * (a61 * k_[0][i] + a62 * k_[1][i] + a63 * k_[2][i] + a64 * k_[3][i] + a65 * k_[4][i]);
    f_(x + hd, tmp_, k_[5]);
    for (std::size_t i = 0; i < n; ++i)
      ynew_[i] = y[i] + hd * (b1 * k_[0][i] + b3 * k_[2][i] + b4 * k_[3][i] + b5 * k_[4][i] + b6 * k_[5][i]);
    f_(x + hd, ynew_, k_[6]);
    double err = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double ei = hd * (e1 * k_[0][i] + e3 * k_[2][i] + e4 * k_[3][i] + e5 * k_[4][i] + e6 * k_[5][i] +
                        e7 * k_[6][i]);
      double sc = opt_.atol + opt_.rtol * std::max(std::fabs(y[i]), std::fabs(ynew_[i]));
      err = std::max(err, std::fabs(ei) / sc);
    }
    if (!std::isfinite(err)) err = 1e10;
    if (err <= 1.0) {
      x = last ? x_end : x + hd;
      y.swap(ynew_);
      std::swap(k_[0], k_[6]);
      for (double v : y)
        if (!std::isfinite(v) || std::fabs(v) > opt_.max_abs)
          throw Error(ErrorKind::divergence, "ode", "solution blew up near x=" + std::to_string(x));
      double fac = err == 0.0 ? 5.0 : std::min(5.0, std::max(0.2, 0.9 * std::pow(err, -0.2)));
      // do not let a short final step shrink the remembered step
      h = last ? std::max(h, hs * fac) : hs * fac;
    } else {
      ++rejected_;
      h = hs * std::max(0.1, 0.9 * std::pow(err, -0.2));
      if (h < 1e-14 * std::max(1.0, std::fabs(x)))
        throw Error(ErrorKind::divergence, "ode", "step size collapsed at x=" + std::to_string(x));
    }
  }
  h_ = h;
}

}  // namespace rmedge
