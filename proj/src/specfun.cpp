#include "rmedge/specfun.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "rmedge/error.hpp"

namespace rmedge {

namespace {

struct RefRule {
  std::vector<double> x;
  std::vector<double> w;
};

// Nodes and weights on (-1,1), ascending.
RefRule build_reference(int n) {
  RefRule r;
  r.x.resize(n);
  r.w.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    long double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    long double dp = 0;
    for (int it = 0; it < 100; ++it) {
      long double p0 = 1, p1 = 0;
      for (int k = 1; k <= n; ++k) {
        long double p2 = p1;
        p1 = p0;
        p0 = ((2 * k - 1) * z * p1 - (k - 1) * p2) / k;
      }
      dp = n * (z * p0 - p1) / (z * z - 1);
      long double dz = p0 / dp;
      z -= dz;
      if (std::fabs(static_cast<double>(dz)) < 1e-15) {
        // one more pass for the derivative at the converged node
        p0 = 1, p1 = 0;
        for (int k = 1; k <= n; ++k) {
          long double p2 = p1;
          p1 = p0;
          p0 = ((2 * k - 1) * z * p1 - (k - 1) * p2) / k;
        }
        dp = n * (z * p0 - p1) / (z * z - 1);
        break;
      }
    }
    double w = static_cast<double>(2 / ((1 - z * z) * dp * dp));
    r.x[i] = -static_cast<double>(z);
    r.x[n - 1 - i] = static_cast<double>(z);
    r.w[i] = w;
    r.w[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.x[n / 2] = 0.0;
  return r;
}

const RefRule& reference(int n) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<RefRule>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<RefRule>(build_reference(n));
  return *slot;
}

void check_rule_args(int n, double lo, double hi) {
  if (n < 1) throw Error(ErrorKind::invalid_argument, "specfun", "quadrature needs n >= 1");
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
    throw Error(ErrorKind::invalid_argument, "specfun", "quadrature needs finite lo < hi");
}

}  // namespace

QuadRule gauss_legendre(int n, double lo, double hi) {
  check_rule_args(n, lo, hi);
  const RefRule& r = reference(n);
  QuadRule q;
  q.lo = lo;
  q.hi = hi;
  q.nodes.resize(n);
  q.weights.resize(n);
  double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
  for (int i = 0; i < n; ++i) {
    q.nodes[i] = mid + half * r.x[i];
    q.weights[i] = half * r.w[i];
  }
  return q;
}

QuadRule graded_gauss_legendre(int n, double lo, double hi) {
  check_rule_args(n, lo, hi);
  const RefRule& r = reference(n);
  QuadRule q;
  q.lo = lo;
  q.hi = hi;
  q.nodes.resize(n);
  q.weights.resize(n);
  double len = hi - lo;
  for (int i = 0; i < n; ++i) {
    double u = 0.5 * (1 + r.x[i]);
    q.nodes[i] = lo + len * u * u;
    q.weights[i] = 0.5 * r.w[i] * 2 * u * len;
  }
  return q;
}

QuadRule composite_gauss_legendre(int panels, int n, double lo, double hi) {
  check_rule_args(n, lo, hi);
  if (panels < 1) throw Error(ErrorKind::invalid_argument, "specfun", "need at least one panel");
  const RefRule& r = reference(n);
  QuadRule q;
  q.lo = lo;
  q.hi = hi;
  double h = (hi - lo) / panels;
  for (int p = 0; p < panels; ++p) {
    double a = lo + p * h;
    for (int i = 0; i < n; ++i) {
      q.nodes.push_back(a + 0.5 * h * (1 + r.x[i]));
      q.weights.push_back(0.5 * h * r.w[i]);
    }
  }
  return q;
}

namespace {

constexpr long double kAi0 = 0.355028053887817239260063186004183176L;
constexpr long double kAip0 = 0.258819403792806798405183560189203963L;  // -Ai'(0)

AiryValue airy_maclaurin(double xd) {
  long double x = xd, x3 = x * x * x;
  long double f = 1, g = x, fp = 0, gp = 1;
  long double tf = 1, tg = x, tfp = x * x / 2, tgp = 1;
  fp = tfp;
  for (int k = 1; k < 200; ++k) {
    tf *= x3 / ((3 * k - 1) * (3.0L * k));
    tg *= x3 / ((3.0L * k) * (3 * k + 1));
    tgp *= x3 / ((3 * k - 2) * (3.0L * k));
    if (k >= 2) tfp *= x3 / (3.0L * (k - 1) * (3 * k - 1));
    f += tf;
    g += tg;
    gp += tgp;
    if (k >= 2) fp += tfp;
    long double big = std::fabs(tf) + std::fabs(tg) + std::fabs(tfp) + std::fabs(tgp);
    if (k > 3 && big < 1e-22L * (std::fabs(f) + std::fabs(g) + 1e-300L)) break;
  }
  return {static_cast<double>(kAi0 * f - kAip0 * g), static_cast<double>(kAi0 * fp - kAip0 * gp)};
}

// Steepest-descent form: Ai(x) = e^{-zeta}/pi * int_0^inf cos(s^3/3) e^{-sqrt(x) s^2} ds.
AiryValue airy_integral(double x) {
  double zeta = 2.0 / 3.0 * x * std::sqrt(x);
  if (zeta > 740) return {0.0, 0.0};
  double rx = std::sqrt(x);
  double S = std::sqrt(42.0 / rx);
  const RefRule& r = reference(80);
  double i0 = 0, i2 = 0;
  for (std::size_t k = 0; k < r.x.size(); ++k) {
    double s = 0.5 * S * (1 + r.x[k]);
    double w = 0.5 * S * r.w[k];
    double v = w * std::cos(s * s * s / 3) * std::exp(-rx * s * s);
    i0 += v;
    i2 += v * s * s;
  }
  double e = std::exp(-zeta) / std::numbers::pi;
  double ai = e * i0;
  double aip = -rx * ai - e * i2 / (2 * rx);
  return {ai, aip};
}

AiryValue airy_negative_asymptotic(double x) {
  double z = -x;
  double zeta = 2.0 / 3.0 * z * std::sqrt(z);
  // u_k, v_k coefficients; alternate even/odd into the two series
  double u = 1, v = 1;
  double pu = 0, qu = 0, pv = 0, qv = 0;
  double zp = 1;
  double last = 1e300;
  for (int k = 0; k < 60; ++k) {
    if (k > 0) {
      u *= (6.0 * k - 5) * (6.0 * k - 3) * (6.0 * k - 1) / ((2.0 * k - 1) * 216.0 * k);
      v = -(6.0 * k + 1) / (6.0 * k - 1) * u;
      zp *= zeta;
    }
    double tu = u / zp, tv = v / zp;
    if (std::fabs(tu) > last) break;
    last = std::fabs(tu);
    double sgn = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
    if (k % 2 == 0) {
      pu += sgn * tu;
      pv += sgn * tv;
    } else {
      qu += sgn * tu;
      qv += sgn * tv;
    }
    if (last < 1e-17) break;
  }
  double ph = zeta - std::numbers::pi / 4;
  double c = std::cos(ph), s = std::sin(ph);
  double q4 = std::pow(z, 0.25);
  double ai = (c * pu + s * qu) / (std::sqrt(std::numbers::pi) * q4);
  double aip = q4 * (s * pv - c * qv) / std::sqrt(std::numbers::pi);
  return {ai, aip};
}

}  // namespace

AiryValue airy(double x) {
  if (!std::isfinite(x)) throw Error(ErrorKind::invalid_argument, "specfun", "airy: non-finite argument");
  if (x > 4.5) return airy_integral(x);
  if (x < -9.0) return airy_negative_asymptotic(x);
  return airy_maclaurin(x);
}

namespace {

BesselValue bessel_series(double nu, double xd) {
  long double x = xd, h = x / 2, h2 = h * h;
  long double lead = std::pow(h, static_cast<long double>(nu)) / std::tgamma(static_cast<long double>(nu) + 1);
  long double term = lead, sum = 0, dsum = 0;
  for (int k = 0; k < 500; ++k) {
    if (k > 0) term *= -h2 / (k * (k + static_cast<long double>(nu)));
    sum += term;
    dsum += term * (2 * k + nu);
    if (k > 2 && std::fabs(term) < 1e-22L * std::fabs(sum)) break;
  }
  return {static_cast<double>(sum), static_cast<double>(dsum / x)};
}

double bessel_hankel(double nu, double x) {
  double mu = 4 * nu * nu;
  double p = 0, q = 0, a = 1, last = 1e300;
  for (int k = 0; k < 80; ++k) {
    if (k > 0) a *= (mu - (2.0 * k - 1) * (2.0 * k - 1)) / (k * 8.0 * x);
    if (std::fabs(a) > last && k > 2) break;
    last = std::fabs(a);
    double sgn = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
    if (k % 2 == 0)
      p += sgn * a;
    else
      q += sgn * a;
    if (last < 1e-17) break;
  }
  double w = x - nu * std::numbers::pi / 2 - std::numbers::pi / 4;
  return std::sqrt(2 / (std::numbers::pi * x)) * (p * std::cos(w) - q * std::sin(w));
}

}  // namespace

BesselValue bessel_j(double nu, double x) {
  if (!std::isfinite(x) || !std::isfinite(nu)) throw Error(ErrorKind::invalid_argument, "specfun", "bessel_j: non-finite input");
  if (x < 0) throw Error(ErrorKind::invalid_argument, "specfun", "bessel_j: x < 0");
  if (x == 0) {
    if (nu == 0) return {1.0, 0.0};
    if (nu == 1) return {0.0, 0.5};
    if (nu > 1) return {0.0, 0.0};
    throw Error(ErrorKind::out_of_domain, "specfun", "bessel_j: J or J' unbounded at x=0 for this order");
  }
  if (x <= std::max(20.0, 2 * nu)) {
    if (nu <= -1) throw Error(ErrorKind::out_of_domain, "specfun", "bessel_j: series branch needs nu > -1");
    return bessel_series(nu, x);
  }
  double j = bessel_hankel(nu, x);
  double jm = bessel_hankel(nu - 1, x);
  return {j, jm - nu / x * j};
}

std::complex<double> log_gamma_complex(std::complex<double> z) {
  if (!(z.real() > 0)) throw Error(ErrorKind::out_of_domain, "specfun", "log_gamma_complex needs Re z > 0");
  static const double p[9] = {0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                              771.32342877765313,   -176.61502916214059,   12.507343278686905,
                              -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  std::complex<double> shift = 0;
  while (z.real() < 0.5) {
    shift -= std::log(z);
    z += 1.0;
  }
  std::complex<double> w = z - 1.0;
  std::complex<double> s = p[0];
  for (int i = 1; i < 9; ++i) s += p[i] / (w + static_cast<double>(i));
  std::complex<double> t = w + 7.5;
  return shift + 0.5 * std::log(2 * std::numbers::pi) + (w + 0.5) * std::log(t) - t + std::log(s);
}

}  // namespace rmedge
