#include <cmath>
#include <numbers>

#include "doctest.h"
#include "rmedge/error.hpp"
#include "rmedge/linop.hpp"

using namespace rmedge;

namespace {

constexpr double kPi = std::numbers::pi;

// Richardson extrapolation of f(h) -> f(0) for f(h) = f0 + c1 h + c2 h^2 + ...
double richardson(const std::function<double(double)>& f, double h0, int levels) {
  std::vector<double> t(levels);
  for (int i = 0; i < levels; ++i) t[i] = f(h0 / std::pow(2.0, i));
  for (int k = 1; k < levels; ++k)
    for (int i = levels - 1; i >= k; --i) t[i] = (std::pow(2.0, k) * t[i] - t[i - 1]) / (std::pow(2.0, k) - 1);
  return t[levels - 1];
}

// int_R K_w(x) K_w0(x) dx for the sine kernel with parameter t: quadrature on
// [-X, X] plus asymptotic tails.
double reproducing_integral(double t, double w, double w0) {
  const double a = t * kPi, X = 2000.0;
  auto Kw = [&](double c, double x) { return std::sin(a * (x - c)) / (kPi * (x - c)); };
  QuadRule q = composite_gauss_legendre(8000, 16, -X, X);
  double s = 0;
  for (std::size_t i = 0; i < q.size(); ++i) s += q.weights[i] * Kw(w, q.nodes[i]) * Kw(w0, q.nodes[i]);
  double C = std::cos(a * (w - w0)), phi = a * (w + w0);
  auto g = [&](double x) { return 1 / (2 * kPi * kPi * (x - w) * (x - w0)); };
  double tail_plus = std::log((X - w0) / (X - w)) / (w - w0);
  double tail_minus = std::log((X + w0) / (X + w)) / (w0 - w);
  s += C / (2 * kPi * kPi) * (tail_plus + tail_minus);
  double osc_plus = -std::sin(2 * a * X - phi) * g(X) / (2 * a);
  double osc_minus = -std::sin(2 * a * X + phi) * g(-X) / (2 * a);
  s -= osc_plus + osc_minus;
  return s;
}

}  // namespace

TEST_CASE("kernel symmetry on sampled pairs") {
  std::vector<KernelSpec> ks = {sine_kernel(1.3),         airy_kernel(),           bessel_hard_kernel(0.7),
                                airy_hankel_symbol(-0.5), bessel_log_symbol(1, 0.2), qbessel_kernel(0.5, 0.3),
                                sine_circle_kernel(4)};
  for (auto& k : ks) {
    for (double x : {0.1, 0.45, 0.9, 2.5})
      for (double y : {0.2, 0.45 + 1e-7, 1.7}) {
        INFO(k.tag() << " x=" << x << " y=" << y);
        double a = kernel_eval(k, x, y), b = kernel_eval(k, y, x);
        CHECK(std::fabs(a - b) <= 1e-12 * std::max(1.0, std::fabs(a)));
      }
  }
}

TEST_CASE("closed-form diagonals") {
  CHECK(kernel_eval(sine_kernel(2), 0.3, 0.3) == 2.0);
  auto a0 = airy(0);
  CHECK(std::fabs(kernel_eval(airy_kernel(), 0, 0) - a0.aip * a0.aip) < 1e-15);
  CHECK(std::fabs(kernel_eval(sine_circle_kernel(3), 1.0, 1.0) - 9) < 1e-12);
  CHECK(std::fabs(kernel_eval(sine_circle_kernel(3), 1.0, 1.0 + 1e-9) - 9) < 1e-12);
}

TEST_CASE("diagonal rules match near-diagonal extrapolation") {
  std::vector<KernelSpec> ks = {sine_kernel(1.0), airy_kernel(), bessel_hard_kernel(0.5), bessel_hard_kernel(2.0),
                                qbessel_kernel(0.5, 0.0), qbessel_kernel(2.0, 0.4)};
  for (auto& k : ks) {
    for (double x : {0.3, 0.8, 1.6}) {
      double oracle = richardson([&](double h) { return kernel_eval_raw(k, x, x + h); }, 0.02, 5);
      double d = kernel_eval(k, x, x);
      INFO(k.tag() << " x=" << x);
      CHECK(std::fabs(d - oracle) < 1e-9 * std::max(1.0, std::fabs(oracle)));
      // switch region: the value at (x, x + d) agrees with the symmetric limit at the midpoint to O(d^2)
      double m = x + 2.5e-7;
      double mid = richardson([&](double h) { return kernel_eval_raw(k, m - h, m + h); }, 0.02, 5);
      CHECK(std::fabs(kernel_eval(k, x, x + 5e-7) - mid) < 1e-9 * std::max(1.0, std::fabs(mid)));
    }
  }
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(kernel_eval(bessel_hard_kernel(0.5), -0.1, 0.2), Error);
  CHECK_THROWS_AS(kernel_eval(airy_kernel(), NAN, 0.2), Error);
}

TEST_CASE("hankel_square_eval") {
  auto zero = hankel_symbol([](double) { return 0.0; }, "zero", 10);
  CHECK(hankel_square_eval(zero, 0.3, 0.4, 10) == 0.0);
  double lhs = hankel_square_eval(airy_hankel_symbol(0), 0.5, 1.0, 14);
  CHECK(std::fabs(lhs - kernel_eval(airy_kernel(), 0.5, 1.0)) < 1e-9);
  double q = hankel_square_eval(bessel_log_symbol(0.5, 0), 0.2, 0.7, 18);
  CHECK(std::fabs(q - kernel_eval(qbessel_kernel(0.5, 0), 0.2, 0.7)) < 1e-8);
  CHECK_THROWS_AS(hankel_square_eval(airy_hankel_symbol(0), 0.5, 1.0, 2.0), Error);
  CHECK_THROWS_AS(hankel_square_eval(airy_kernel(), 0.5, 1.0, 14), Error);
}

TEST_CASE("hankel squares are positive") {
  std::vector<std::pair<KernelSpec, double>> syms = {
      {airy_hankel_symbol(-2.0), 14.0},
      {bessel_log_symbol(0.5, 0.0), 18.0},
      {hankel_symbol([](double u) { return std::exp(-u); }, "exp", 30.0), 30.0}};
  for (auto& [s, L] : syms) {
    auto op = discretize(hankel_square_kernel(s, L), {0, L}, 40);
    auto ev = symmetric_eigenvalues(op.matrix);
    INFO(s.tag());
    CHECK(ev.front() >= -1e-9);
  }
}

TEST_CASE("soft-edge determinant identity") {
  for (double alpha : {0.0, 1.0}) {
    auto w = discretize(airy_kernel(), {alpha, kInf}, 80);
    auto g = discretize(airy_hankel_symbol(alpha), {0, kInf}, 80);
    auto gam = symmetric_eigenvalues(g.matrix);
    for (double z : {0.5, 1.0}) {
      double lhs = fredholm_det(w, z);
      double rhs = 1;
      for (double v : gam) rhs *= 1 - z * v * v;
      INFO("alpha=" << alpha << " z=" << z);
      CHECK(std::fabs(lhs - rhs) < 1e-8);
    }
  }
}

TEST_CASE("bulk reproducing property") {
  for (double t : {1.0, 0.7})
    for (auto [w, w0] : {std::pair{0.3, -1.1}, {2.0, 0.5}, {-0.25, 0.6}}) {
      double lhs = reproducing_integral(t, w, w0);
      double rhs = kernel_eval(sine_kernel(t), w, w0);
      INFO("t=" << t << " w=" << w << " w0=" << w0);
      CHECK(std::fabs(lhs - rhs) < 1e-8);
    }
}

TEST_CASE("QBessel is the log-variable image of the hard-edge kernel") {
  for (double nu : {0.0, 0.5, 2.0})
    for (double xi : {-0.5, 0.2, 1.3})
      for (double eta : {-0.2, 0.7, 2.0}) {
        double q = kernel_eval(qbessel_kernel(nu, 0), xi, eta);
        double f = 2 * std::exp(-xi - eta) *
                   kernel_eval(bessel_hard_kernel(nu), std::exp(-2 * xi), std::exp(-2 * eta));
        CHECK(std::fabs(q - f) < 1e-9);
      }
}
