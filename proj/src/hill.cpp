#include "rmedge/hill.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "rmedge/error.hpp"
#include "rmedge/interp.hpp"
#include "rmedge/matrix.hpp"
#include "rmedge/ode.hpp"

namespace rmedge {

namespace {

constexpr double kPi = std::numbers::pi;

OdeOptions hill_options() {
  OdeOptions o;
  o.rtol = 1e-12;
  o.atol = 1e-14;
  o.max_abs = 1e200;
  return o;
}

}  // namespace

MonodromyResult monodromy_with_drift(const HillModel& m) {
  auto rhs = [&](double x, const std::vector<double>& y, std::vector<double>& dy) {
    double c = m.lambda + m.alpha * std::cos(2 * x);
    dy[0] = y[2];
    dy[1] = y[3];
    dy[2] = -c * y[0];
    dy[3] = -c * y[1];
  };
  DormandPrince dp(rhs, hill_options());
  std::vector<double> y = {1, 0, 0, 1};
  double x = 0, drift = 0;
  const int pieces = 32;
  for (int k = 1; k <= pieces; ++k) {
    dp.advance(x, y, kPi * k / pieces);
    double det = y[0] * y[3] - y[1] * y[2];
    // relative to the size of the entries, which grow in the unstable regime
    double scale = std::max(1.0, std::fabs(y[0] * y[3]) + std::fabs(y[1] * y[2]));
    drift = std::max(drift, std::fabs(det - 1) / scale);
  }
  return {{y[0], y[1], y[2], y[3]}, drift};
}

Mat2 monodromy(const HillModel& m) { return monodromy_with_drift(m).S; }

double discriminant(const HillModel& m) {
  Mat2 s = monodromy(m);
  return s[0] + s[3];
}

std::array<double, 2> discriminant_with_derivative(const HillModel& m) {
  auto rhs = [&](double x, const std::vector<double>& y, std::vector<double>& dy) {
    double c = m.lambda + m.alpha * std::cos(2 * x);
    dy[0] = y[2];
    dy[1] = y[3];
    dy[2] = -c * y[0];
    dy[3] = -c * y[1];
    dy[4] = y[6];
    dy[5] = y[7];
    dy[6] = -c * y[4] - y[0];
    dy[7] = -c * y[5] - y[1];
  };
  DormandPrince dp(rhs, hill_options());
  std::vector<double> y = {1, 0, 0, 1, 0, 0, 0, 0};
  double x = 0;
  dp.advance(x, y, kPi);
  return {y[0] + y[3], y[4] + y[7]};
}

namespace {

double bisect(const std::function<double(double)>& f, double a, double b, double fa) {
  for (int it = 0; it < 200; ++it) {
    double c = 0.5 * (a + b);
    if (c <= a || c >= b || b - a < 1e-13 * std::max(1.0, std::fabs(c))) break;
    double fc = f(c);
    if (fc == 0) return c;
    if ((fc < 0) == (fa < 0)) {
      a = c;
      fa = fc;
    } else {
      b = c;
    }
  }
  return 0.5 * (a + b);
}

// For the even potential alpha cos 2x, s00 = s11 and det S = 1 give
// Delta^2 - 4 = 4 s01 s10, so every periodic eigenvalue is a simple root of
// s01 (odd eigenfunction) or s10 (even eigenfunction). Roots of the two are
// found separately on a lambda grid and merged.
PeriodicSpectrum scan_spectrum(double alpha, int count) {
  struct Root {
    double lambda;
    bool even;
  };
  std::vector<Root> roots;
  const double lam_cap = (2.0 * count) * (2.0 * count) + 10;
  double lam = -std::fabs(alpha) - 1;
  Mat2 prev = monodromy({alpha, lam});
  if (!(prev[1] > 0 && prev[2] > 0))
    throw Error(ErrorKind::resolution, "hill", "monodromy entries not positive at the scan start");
  while (true) {
    std::sort(roots.begin(), roots.end(), [](const Root& a, const Root& b) { return a.lambda < b.lambda; });
    if (static_cast<int>(roots.size()) >= count) break;
    double step = 0.05 * std::max(1.0, std::sqrt(std::max(lam, 0.0)));
    double next = lam + step;
    if (next > lam_cap) {
      std::ostringstream os;
      os << "found only " << roots.size() << " of " << count << " periodic eigenvalues below " << lam_cap;
      throw Error(ErrorKind::resolution, "hill", os.str());
    }
    Mat2 cur = monodromy({alpha, next});
    for (int e : {1, 2}) {
      double fp = prev[e], fq = cur[e];
      if (fq == 0 || (fp < 0) != (fq < 0)) {
        double r = fq == 0 ? next : bisect([&](double l) { return monodromy({alpha, l})[e]; }, lam, next, fp);
        roots.push_back({r, e == 2});
      }
    }
    lam = next;
    prev = cur;
  }
  PeriodicSpectrum out;
  out.alpha = alpha;
  for (int i = 0; i < count; ++i) {
    const Root& r = roots[i];
    double d = discriminant({alpha, r.lambda});
    out.lambdas.push_back(r.lambda);
    out.period_tags.push_back(d > 0 ? Period::pi_periodic : Period::two_pi_periodic);
    out.even.push_back(r.even);
    auto close = [&](std::size_t j) {
      return j < roots.size() && std::fabs(roots[j].lambda - r.lambda) < 1e-9 * std::max(1.0, std::fabs(r.lambda));
    };
    out.double_root.push_back((i > 0 && close(i - 1)) || close(i + 1));
  }
  return out;
}

}  // namespace

PeriodicSpectrum periodic_spectrum(double alpha, int count) {
  if (count < 1 || count > 40) throw Error(ErrorKind::invalid_argument, "hill", "count must be in [1, 40]");
  return scan_spectrum(alpha, count);
}

ProductCheck product_formula_check(double alpha, double lambda, int n_terms) {
  if (n_terms < 1) throw Error(ErrorKind::invalid_argument, "hill", "n_terms must be >= 1");
  PeriodicSpectrum sp = scan_spectrum(alpha, 2 * n_terms + 1);
  double d = discriminant({alpha, lambda});
  ProductCheck pc;
  pc.lhs = 4 - d * d;
  double rhs = 4 * kPi * kPi * (lambda - sp.lambdas[0]);
  double free = 1;
  for (int j = 1; j <= n_terms; ++j) {
    double jj = double(j) * j;
    rhs *= (sp.lambdas[2 * j - 1] - lambda) * (sp.lambdas[2 * j] - lambda) / (jj * jj);
    free *= (1 - lambda / jj) * (1 - lambda / jj);
  }
  pc.rhs = rhs;
  // free tail prod_{j > n} (1 - lambda/j^2)^2 = [sinc]^2 / prod_{j <= n}
  double s;
  if (lambda > 0) {
    double r = kPi * std::sqrt(lambda);
    s = std::sin(r) / r;
  } else if (lambda < 0) {
    double r = kPi * std::sqrt(-lambda);
    s = std::sinh(r) / r;
  } else {
    s = 1;
  }
  pc.rhs_corrected = free != 0 ? rhs * s * s / free : rhs;
  pc.gap = std::fabs(pc.lhs - pc.rhs);
  double denom = std::max(std::fabs(pc.lhs), 1e-300);
  pc.rel_gap = pc.gap / denom;
  pc.rel_gap_corrected = std::fabs(pc.lhs - pc.rhs_corrected) / denom;
  return pc;
}

double MathieuKernel::A(double x) const {
  double h = 2 * kPi / grid_n;
  double u = std::fmod(x, 2 * kPi);
  if (u < 0) u += 2 * kPi;
  int i = std::min(static_cast<int>(u / h), grid_n - 1);
  int j = (i + 1) % grid_n;
  double x0 = i * h, x1 = (i + 1) * h;
  double t = (u - x0) / h;
  auto c = [&](double s) { return lambda + alpha * std::cos(2 * s); };
  return quintic_hermite(t, h, a[i], ap[i], -c(x0) * a[i], a[j], ap[j], -c(x1) * a[j]);
}

double MathieuKernel::Ap(double x) const {
  double h = 2 * kPi / grid_n;
  double u = std::fmod(x, 2 * kPi);
  if (u < 0) u += 2 * kPi;
  int i = std::min(static_cast<int>(u / h), grid_n - 1);
  int j = (i + 1) % grid_n;
  double x0 = i * h, x1 = (i + 1) * h;
  double t = (u - x0) / h;
  auto c = [&](double s) { return lambda + alpha * std::cos(2 * s); };
  auto cp = [&](double s) { return -2 * alpha * std::sin(2 * s); };
  // A''' = -c A' - c' A
  return quintic_hermite(t, h, ap[i], -c(x0) * a[i], -c(x0) * ap[i] - cp(x0) * a[i], ap[j], -c(x1) * a[j],
                 -c(x1) * ap[j] - cp(x1) * a[j]);
}

double MathieuKernel::eval_raw(double x, double y) const {
  return (A(x) * Ap(y) - Ap(x) * A(y)) / std::sin(x - y);
}

double MathieuKernel::eval(double x, double y) const {
  double d = x - y;
  if (std::fabs(std::sin(d)) >= 1e-6) return eval_raw(x, y);
  // nearest point on the singular line x - y = d0, then a symmetric limit across it
  double d0 = std::round(d / kPi) * kPi;
  double u = 0.5 * (x + y);
  double xc = u + d0 / 2, yc = u - d0 / 2;
  auto g = [&](double s) { return 0.5 * (eval_raw(xc + s, yc - s) + eval_raw(xc - s, yc + s)); };
  const double h = 1e-5;
  return (4 * g(h / 2) - g(h)) / 3;
}

std::shared_ptr<const MathieuKernel> mathieu_tw_kernel(double alpha, int spectral_index) {
  if (spectral_index < 0 || spectral_index >= 40)
    throw Error(ErrorKind::invalid_argument, "hill", "spectral index must be in [0, 40)");
  PeriodicSpectrum sp = periodic_spectrum(alpha, spectral_index + 1);
  if (sp.period_tags[spectral_index] != Period::two_pi_periodic) {
    std::ostringstream os;
    os << "index " << spectral_index << " (lambda=" << sp.lambdas[spectral_index]
       << ") has only a pi-periodic eigenfunction";
    throw Error(ErrorKind::wrong_period, "hill", os.str());
  }
  auto k = std::make_shared<MathieuKernel>();
  k->alpha = alpha;
  k->lambda = sp.lambdas[spectral_index];
  k->index = spectral_index;
  k->grid_n = 2048;

  // even eigenfunctions start from (1, 0), odd ones from (0, 1)
  double v0 = sp.even[spectral_index] ? 1 : 0, v1 = 1 - v0;

  const double lam = k->lambda;
  auto rhs = [&](double x, const std::vector<double>& y, std::vector<double>& dy) {
    dy[0] = y[1];
    dy[1] = -(lam + alpha * std::cos(2 * x)) * y[0];
  };
  DormandPrince dp(rhs, hill_options());
  std::vector<double> y = {v0, v1};
  double x = 0;
  const int N = k->grid_n;
  k->a.resize(N);
  k->ap.resize(N);
  for (int i = 0; i < N; ++i) {
    dp.advance(x, y, 2 * kPi * i / N);
    k->a[i] = y[0];
    k->ap[i] = y[1];
  }
  // normalize: int_0^{2pi} A^2 = pi (as for sin nx), first nonzero initial datum positive
  double norm = 0;
  for (int i = 0; i < N; ++i) norm += k->a[i] * k->a[i];
  norm *= 2 * kPi / N;
  double sc = std::sqrt(kPi / norm);
  for (int i = 0; i < N; ++i) k->a[i] *= sc, k->ap[i] *= sc;

  // sixth-order first differences of the stored A and A'
  double h = 2 * kPi / N, res = 0;
  auto d1 = [&](const std::vector<double>& v, int i) {
    auto at = [&](int j) { return v[((j % N) + N) % N]; };
    return (45 * (at(i + 1) - at(i - 1)) - 9 * (at(i + 2) - at(i - 2)) + (at(i + 3) - at(i - 3))) / (60 * h);
  };
  for (int i = 0; i < N; ++i) {
    double c = lam + alpha * std::cos(2 * i * h);
    res = std::max(res, std::fabs(d1(k->ap, i) + c * k->a[i]));
    res = std::max(res, std::fabs(d1(k->a, i) - k->ap[i]));
  }
  k->ode_residual = res;
  return k;
}

EigencheckReport mathieu_eigencheck(const MathieuKernel& k, int n, int top) {
  if (n < 8) throw Error(ErrorKind::invalid_argument, "hill", "eigencheck needs n >= 8");
  const double w = 2 * kPi / n;
  Matrix m(n, n);
  std::vector<double> xs(n);
  for (int i = 0; i < n; ++i) xs[i] = w * i;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) m(i, j) = m(j, i) = w * k.eval(xs[i], xs[j]);
  EigenResult er = jacobi_eigen(m);
  EigencheckReport rep;
  rep.eigenvalues = er.values;
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return std::fabs(er.values[a]) > std::fabs(er.values[b]); });
  double vmax = std::fabs(er.values[order[0]]);
  for (int r = 0; r < std::min(top, n); ++r) {
    int idx = order[r];
    EigenfunctionCheck c;
    c.eigenvalue = er.values[idx];
    if (std::fabs(c.eigenvalue) < 1e-8 * vmax) {
      c.skipped = true;
      c.tag = "zero";
      rep.items.push_back(c);
      continue;
    }
    bool degenerate = false;
    for (int j = 0; j < n; ++j)
      if (j != idx && std::fabs(er.values[j] - c.eigenvalue) < 1e-6 * vmax) degenerate = true;
    if (degenerate) {
      c.skipped = true;
      c.tag = "degenerate";
      rep.items.push_back(c);
      continue;
    }
    std::vector<double> f(n);
    for (int i = 0; i < n; ++i) f[i] = er.vectors(i, idx);
    // spectral second derivative by a direct real DFT
    std::vector<double> f2(n, 0.0);
    for (int q = 0; q <= n / 2; ++q) {
      std::complex<double> c0 = 0;
      for (int i = 0; i < n; ++i) c0 += f[i] * std::polar(1.0, -2 * kPi * q * i / n);
      double mult = (q == 0 || (n % 2 == 0 && q == n / 2)) ? 1.0 : 2.0;
      for (int i = 0; i < n; ++i)
        f2[i] += -double(q) * q * mult * (c0 * std::polar(1.0, 2 * kPi * q * i / n)).real() / n;
    }
    std::vector<double> g(n);
    double gf = 0, ff = 0;
    for (int i = 0; i < n; ++i) {
      g[i] = f2[i] + k.alpha * std::cos(2 * xs[i]) * f[i];
      gf += g[i] * f[i];
      ff += f[i] * f[i];
    }
    c.mu = -gf / ff;
    double rmax = 0, f2max = 0, fmax = 0;
    for (int i = 0; i < n; ++i) {
      rmax = std::max(rmax, std::fabs(g[i] + c.mu * f[i]));
      f2max = std::max(f2max, std::fabs(f2[i]));
      fmax = std::max(fmax, std::fabs(f[i]));
    }
    c.residual = rmax / (f2max + (1 + std::fabs(c.mu) + std::fabs(k.alpha)) * fmax);
    c.tag = "simple";
    rep.worst_residual = std::max(rep.worst_residual, c.residual);
    rep.items.push_back(c);
  }
  return rep;
}

}  // namespace rmedge
