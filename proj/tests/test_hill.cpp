#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "rmedge/error.hpp"
#include "rmedge/hill.hpp"
#include "rmedge/matrix.hpp"

using namespace rmedge;

namespace {

constexpr double kPi = std::numbers::pi;

// Periodic spectrum of -y'' - alpha cos(2x) y from Fourier truncations: even
// wavenumbers give the pi-periodic part, odd ones the 2pi-periodic part.
std::vector<double> fourier_spectrum(double alpha, int modes) {
  std::vector<double> all;
  for (int parity : {0, 1}) {
    Matrix m(modes, modes);
    for (int i = 0; i < modes; ++i) {
      double k = 2 * (i - modes / 2) + parity;
      m(i, i) = k * k;
      if (i + 1 < modes) m(i, i + 1) = m(i + 1, i) = -alpha / 2;
    }
    auto ev = symmetric_eigenvalues(m);
    all.insert(all.end(), ev.begin(), ev.end());
  }
  std::sort(all.begin(), all.end());
  return all;
}

double fd5(const std::function<double(double)>& f, double x, double h) {
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

double fd5_2(const std::function<double(double)>& f, double x, double h) {
  return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) / (12 * h * h);
}

}  // namespace

TEST_CASE("monodromy closed cases") {
  Mat2 s = monodromy({0, 1});
  CHECK(std::fabs(s[0] + 1) < 1e-10);
  CHECK(std::fabs(s[1]) < 1e-10);
  CHECK(std::fabs(s[2]) < 1e-10);
  CHECK(std::fabs(s[3] + 1) < 1e-10);
  s = monodromy({0, 4});
  CHECK(std::fabs(s[0] - 1) < 1e-10);
  CHECK(std::fabs(s[1]) < 1e-10);
  CHECK(std::fabs(s[2]) < 1e-10);
  CHECK(std::fabs(s[3] - 1) < 1e-10);
  for (double lam : {-3.0, 0.0, 2.5, 30.0}) {
    auto r = monodromy_with_drift({1, lam});
    CHECK(r.max_det_drift < 1e-10);
    CHECK(std::fabs(r.S[0] * r.S[3] - r.S[1] * r.S[2] - 1) < 1e-10 * std::max(1.0, std::fabs(r.S[0] * r.S[3])));
  }
}

TEST_CASE("discriminant") {
  for (double lam : {0.3, 1.0, 2.0, 7.5})
    CHECK(std::fabs(discriminant({0, lam}) - 2 * std::cos(kPi * std::sqrt(lam))) < 1e-9);
  CHECK(std::fabs(discriminant({0, -2}) - 2 * std::cosh(kPi * std::sqrt(2.0))) < 1e-8);
  CHECK(std::fabs(discriminant({1, 100}) - 2 * std::cos(10 * kPi)) < 0.05);
  for (double lam : {-1.0, 0.7, 5.2}) {
    auto d = discriminant_with_derivative({1, lam});
    double fd = fd5([&](double l) { return discriminant({1, l}); }, lam, 1e-3);
    CHECK(std::fabs(d[0] - discriminant({1, lam})) < 1e-10);
    CHECK(std::fabs(d[1] - fd) < 1e-6 * std::max(1.0, std::fabs(fd)));
  }
}

TEST_CASE("free periodic spectrum") {
  auto sp = periodic_spectrum(0, 13);
  std::vector<double> expect = {0, 1, 1, 4, 4, 9, 9, 16, 16, 25, 25, 36, 36};
  REQUIRE(sp.lambdas.size() == 13);
  for (int i = 0; i < 13; ++i) {
    INFO("i=" << i);
    CHECK(std::fabs(sp.lambdas[i] - expect[i]) < 1e-8);
    int r = static_cast<int>(std::lround(std::sqrt(expect[i])));
    CHECK((sp.period_tags[i] == Period::two_pi_periodic) == (r % 2 == 1));
  }
  CHECK_FALSE(sp.double_root[0]);
  CHECK(sp.double_root[1]);
  CHECK_THROWS_AS(periodic_spectrum(0, 41), Error);
}

TEST_CASE("Mathieu spectrum vs Fourier truncation") {
  for (double alpha : {1.0, 4.0}) {
    auto sp = periodic_spectrum(alpha, 20);
    auto fo = fourier_spectrum(alpha, 64);
    for (int i = 0; i < 20; ++i) {
      INFO("alpha=" << alpha << " i=" << i);
      CHECK(std::fabs(sp.lambdas[i] - fo[i]) < 1e-7);
      double d = discriminant({alpha, sp.lambdas[i]});
      CHECK(std::fabs(d * d - 4) < 1e-8);
    }
    for (int i = 0; i + 1 < 20; ++i) CHECK(sp.lambdas[i] <= sp.lambdas[i + 1]);
    CHECK(sp.lambdas[0] < sp.lambdas[1]);
  }
}

TEST_CASE("instability intervals agree with the sign of Delta^2 - 4") {
  const double alpha = 1.0;
  auto sp = periodic_spectrum(alpha, 21);
  auto unstable = [&](double l) {
    if (l < sp.lambdas[0]) return true;
    for (int j = 1; 2 * j < 21; ++j)
      if (l > sp.lambdas[2 * j - 1] && l < sp.lambdas[2 * j]) return true;
    return false;
  };
  int checked = 0;
  for (double l = -3; l < 95; l += 0.1) {
    bool near = false;
    for (double r : sp.lambdas) near = near || std::fabs(l - r) < 1e-6;
    if (near) continue;
    double d = discriminant({alpha, l});
    INFO("lambda=" << l);
    CHECK((d * d > 4) == unstable(l));
    ++checked;
  }
  CHECK(checked > 900);
}

TEST_CASE("Hochstadt asymptotics trend") {
  const double alpha = 1.0;
  auto sp = periodic_spectrum(alpha, 23);
  std::vector<double> dev;
  for (int n = 3; n <= 6; ++n) {
    int r = 2 * n - 1;
    double lower = sp.lambdas[2 * r - 1];
    dev.push_back(std::fabs(lower - (r * r + alpha * alpha / (32.0 * n * n))));
    // the pair is nearly degenerate
    CHECK(sp.lambdas[2 * r] - lower >= 0);
    CHECK(sp.lambdas[2 * r] - lower < 1.0 / (n * n));
  }
  for (std::size_t i = 0; i + 1 < dev.size(); ++i) CHECK(dev[i + 1] < dev[i]);
}

TEST_CASE("product formula") {
  auto z = product_formula_check(1.0, periodic_spectrum(1.0, 1).lambdas[0], 5);
  CHECK(std::fabs(z.lhs) < 1e-8);
  CHECK(std::fabs(z.rhs) < 1e-8);
  double prev = 1e300;
  for (int n : {5, 10, 15, 20}) {
    auto pc = product_formula_check(0.0, 0.5, n);
    CHECK(pc.gap < prev);
    prev = pc.gap;
    CHECK(pc.rel_gap_corrected < 1e-8);
  }
  auto pc = product_formula_check(1.0, 0.3, 20);
  // the raw truncated product still misses prod_{j>20} (1 - lambda/j^2)^2
  CHECK(pc.rel_gap < 0.04);
  CHECK(pc.rel_gap_corrected < 0.02);
  CHECK(pc.rel_gap_corrected < pc.rel_gap);
}

TEST_CASE("Mathieu kernel for alpha = 0 is the circular kernel") {
  for (int idx : {5, 6}) {
    auto k = mathieu_tw_kernel(0.0, idx);
    CHECK(std::fabs(k->lambda - 9) < 1e-8);
    for (double x : {0.2, 1.1, 4.0})
      for (double y : {0.5, 2.9, 5.5}) {
        double w = 3 * std::sin(3 * (x - y)) / std::sin(x - y);
        CHECK(std::fabs(k->eval(x, y) - w) < 1e-8);
      }
    CHECK(std::fabs(k->eval(1.0, 1.0) - 9) < 1e-7);
    CHECK(std::fabs(k->eval(1.0, 1.0 + kPi) - 9) < 1e-7);
  }
  auto k = mathieu_tw_kernel(0.0, 5);
  const int n = 64;
  const double w = 2 * kPi / n;
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = w * k->eval(w * i, w * j);
  auto ev = symmetric_eigenvalues(m);
  for (int i = 0; i < n; ++i) {
    double expect = i >= n - 3 ? 6 * kPi : 0.0;
    CHECK(std::fabs(ev[i] - expect) < 1e-8);
  }
  CHECK_THROWS_AS(mathieu_tw_kernel(0.0, 0), Error);
  CHECK_THROWS_AS(mathieu_tw_kernel(0.0, 3), Error);
  try {
    mathieu_tw_kernel(1.0, 0);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::wrong_period);
  }
}

TEST_CASE("Mathieu kernel structure for alpha = 1") {
  const double alpha = 1.0;
  auto k = mathieu_tw_kernel(alpha, 1);
  CHECK(k->ode_residual < 1e-8);
  double nrm = 0;
  for (double v : k->a) nrm += v * v;
  CHECK(std::fabs(nrm * 2 * kPi / k->grid_n - kPi) < 1e-10);
  // the stored derivative agrees with a finite difference of the interpolant
  for (double x : {0.3, 2.0, 5.1})
    CHECK(std::fabs(fd5([&](double s) { return k->A(s); }, x, 1e-3) - k->Ap(x)) < 1e-8);
  for (double x : {0.3, 1.7, 3.3, 6.0})
    for (double y : {0.1, 2.2, 4.4}) {
      double wv = k->eval(x, y);
      CHECK(std::fabs(wv - k->eval(y, x)) < 1e-12);
      CHECK(std::fabs(wv - k->eval(x + 2 * kPi, y)) < 1e-10);
      CHECK(std::fabs(wv - k->eval(x, y + 2 * kPi)) < 1e-10);
      // derivative-sum identity
      double dsum = fd5([&](double s) { return k->eval(x + s, y + s); }, 0.0, 1e-3);
      CHECK(std::fabs(dsum + 2 * alpha * std::sin(x + y) * k->A(x) * k->A(y)) < 1e-6);
      // wave-type identity; the sign is fixed by differentiating the derivative-sum identity
      double wxx = fd5_2([&](double s) { return k->eval(s, y); }, x, 1e-2);
      double wyy = fd5_2([&](double s) { return k->eval(x, s); }, y, 1e-2);
      double r = wxx - wyy - alpha * (std::cos(2 * y) - std::cos(2 * x)) * wv;
      CHECK(std::fabs(r) < 1e-6 * std::max(1.0, std::fabs(wv)));
    }
  // continuity across the diagonal
  CHECK(std::fabs(k->eval(1.0, 1.0) - k->eval(1.0, 1.0 + 1e-4)) < 1e-3);
}

TEST_CASE("Mathieu eigenfunction check") {
  auto k0 = mathieu_tw_kernel(0.0, 1);
  auto r0 = mathieu_eigencheck(*k0, 48);
  REQUIRE(!r0.items.empty());
  CHECK_FALSE(r0.items[0].skipped);
  CHECK(std::fabs(r0.items[0].eigenvalue - 2 * kPi) < 1e-8);
  CHECK(r0.worst_residual < 1e-8);
  for (std::size_t i = 1; i < r0.items.size(); ++i) CHECK(r0.items[i].tag == "zero");

  auto k1 = mathieu_tw_kernel(1.0, 1);
  auto r1 = mathieu_eigencheck(*k1, 96);
  int simple = 0;
  for (auto& it : r1.items)
    if (!it.skipped) {
      ++simple;
      CHECK(it.residual < 1e-4);
    }
  CHECK(simple >= 1);
  CHECK(r1.worst_residual < 1e-4);
}
