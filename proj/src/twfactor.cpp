#include "rmedge/twfactor.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "rmedge/error.hpp"
#include "rmedge/interp.hpp"
#include "rmedge/ode.hpp"
#include "rmedge/specfun.hpp"

namespace rmedge {

OdeSystem airy_system() {
  OdeSystem s;
  s.beta = {1, 0};
  s.gamma = {0, -1};
  auto a0 = airy(0);
  s.A0 = a0.ai;
  s.B0 = a0.aip;
  s.closed_form = [](double x) {
    auto a = airy(x);
    return std::array<double, 2>{a.ai, a.aip};
  };
  s.tag = "airy";
  return s;
}

OdeSystem sine_system(double t) {
  const double w = t * std::numbers::pi, c = 1 / std::sqrt(std::numbers::pi);
  OdeSystem s;
  s.beta = {w, 0};
  s.gamma = {w, 0};
  s.B0 = c;
  s.closed_form = [w, c](double x) { return std::array<double, 2>{c * std::sin(w * x), c * std::cos(w * x)}; };
  std::ostringstream os;
  os << "sine(t=" << t << ")";
  s.tag = os.str();
  return s;
}

OdeSystem zero_system() {
  OdeSystem s;
  s.tag = "zero";
  return s;
}

Mat2 system_matrix(const OdeSystem& sys, double x) {
  return {sys.alpha(x), sys.beta(x), -sys.gamma(x), -sys.alpha(x)};
}

Mat2 build_c_matrix(const OdeSystem& sys) {
  return {sys.gamma.c1, sys.alpha.c1, sys.alpha.c1, sys.beta.c1};
}

SystemSolution::SystemSolution(OdeSystem sys, Interval range) : sys_(std::move(sys)), range_(range) {
  if (!(range.lo <= range.hi) || !std::isfinite(range.lo) || !std::isfinite(range.hi))
    throw Error(ErrorKind::invalid_argument, "twfactor", "solution range must be finite with lo <= hi");
  if (sys_.closed_form) return;
  double lo = std::min(range.lo, sys_.x0), hi = std::max(range.hi, sys_.x0);
  int n = std::max(1, static_cast<int>(std::ceil((hi - lo) * 32)));
  h_ = (hi - lo) / n;
  if (h_ == 0) h_ = 1;
  range_ = {lo, lo + n * h_};
  a_.assign(n + 1, 0.0);
  b_.assign(n + 1, 0.0);
  auto rhs = [this](double x, const std::vector<double>& y, std::vector<double>& dy) {
    Mat2 m = system_matrix(sys_, x);
    dy[0] = m[0] * y[0] + m[1] * y[1];
    dy[1] = m[2] * y[0] + m[3] * y[1];
  };
  OdeOptions opt;
  opt.rtol = 1e-12;
  opt.atol = 1e-300;
  opt.max_abs = 1e100;
  int i0 = std::clamp(static_cast<int>(std::floor((sys_.x0 - lo) / h_)), 0, n);
  {
    DormandPrince dp(rhs, opt);
    double x = sys_.x0;
    std::vector<double> y = {sys_.A0, sys_.B0};
    for (int i = i0; i >= 0; --i) {
      dp.advance(x, y, lo + i * h_);
      a_[i] = y[0];
      b_[i] = y[1];
    }
  }
  {
    DormandPrince dp(rhs, opt);
    double x = sys_.x0;
    std::vector<double> y = {sys_.A0, sys_.B0};
    for (int i = i0 + 1; i <= n; ++i) {
      dp.advance(x, y, lo + i * h_);
      a_[i] = y[0];
      b_[i] = y[1];
    }
  }
}

std::array<double, 2> SystemSolution::operator()(double x) const {
  if (sys_.closed_form) return sys_.closed_form(x);
  const double tol = 1e-12 * std::max(1.0, std::fabs(x));
  if (!(x >= range_.lo - tol && x <= range_.hi + tol)) {
    std::ostringstream os;
    os << "x=" << x << " outside the integrated range [" << range_.lo << ", " << range_.hi << "]";
    throw Error(ErrorKind::out_of_domain, "twfactor", os.str());
  }
  const int n = static_cast<int>(a_.size()) - 1;
  int i = std::clamp(static_cast<int>(std::floor((x - range_.lo) / h_)), 0, n - 1);
  if (n == 0) return {a_[0], b_[0]};
  double x0 = range_.lo + i * h_, x1 = x0 + h_, t = (x - x0) / h_;
  Mat2 mp = {sys_.alpha.c1, sys_.beta.c1, -sys_.gamma.c1, -sys_.alpha.c1};
  // v' = M v, v'' = M' v + M v'
  auto derivs = [&](double xx, double a, double b, double out[4]) {
    Mat2 m = system_matrix(sys_, xx);
    double da = m[0] * a + m[1] * b, db = m[2] * a + m[3] * b;
    out[0] = da;
    out[1] = db;
    out[2] = mp[0] * a + mp[1] * b + m[0] * da + m[1] * db;
    out[3] = mp[2] * a + mp[3] * b + m[2] * da + m[3] * db;
  };
  double d0[4], d1[4];
  derivs(x0, a_[i], b_[i], d0);
  derivs(x1, a_[i + 1], b_[i + 1], d1);
  return {quintic_hermite(t, h_, a_[i], d0[0], d0[2], a_[i + 1], d1[0], d1[2]),
          quintic_hermite(t, h_, b_[i], d0[1], d0[3], b_[i + 1], d1[1], d1[3])};
}

double system_kernel(const SystemSolution& sol, double x, double y) {
  if (std::fabs(x - y) < 1e-6) {
    double m = 0.5 * (x + y);
    auto v = sol(m);
    const OdeSystem& s = sol.system();
    return s.gamma(m) * v[0] * v[0] + 2 * s.alpha(m) * v[0] * v[1] + s.beta(m) * v[1] * v[1];
  }
  auto u = sol(x), v = sol(y);
  return (u[0] * v[1] - v[0] * u[1]) / (x - y);
}

FactorPair factorize(const OdeSystem& sys, Interval range) {
  FactorPair p;
  p.C = build_c_matrix(sys);
  const double pp = -p.C[0], q = -p.C[1], r = -p.C[3];
  const double mean = 0.5 * (pp + r), rad = std::hypot(0.5 * (pp - r), q);
  const double mu1 = mean + rad, mu2 = mean - rad;
  if (mu2 < -1e-12 * std::max(1.0, std::fabs(mu1))) {
    std::ostringstream os;
    os << "-C is not positive semidefinite (eigenvalues " << mu1 << ", " << mu2 << ") for " << sys.tag;
    throw Error(ErrorKind::hypothesis_violation, "twfactor", os.str());
  }
  p.theta = 0.5 * std::atan2(2 * q, pp - r);
  p.lambda1 = std::sqrt(std::max(mu1, 0.0));
  p.lambda2 = std::sqrt(std::max(mu2, 0.0));
  const double c = std::cos(p.theta), s = std::sin(p.theta), l1 = p.lambda1, l2 = p.lambda2;
  p.X = {l1 * c * c + l2 * s * s, (l1 - l2) * c * s, (l1 - l2) * c * s, l1 * s * s + l2 * c * c};
  if (l1 == 0 && l2 == 0) {
    p.F = p.G = [](double) { return 0.0; };
    return p;
  }
  auto sol = std::make_shared<SystemSolution>(sys, range);
  p.F = [sol, l1, c, s](double x) {
    auto v = (*sol)(x);
    return l1 * (v[0] * c + v[1] * s);
  };
  if (l2 == 0) {
    p.G = [](double) { return 0.0; };
  } else {
    p.G = [sol, l2, c, s](double x) {
      auto v = (*sol)(x);
      return l2 * (-v[0] * s + v[1] * c);
    };
  }
  return p;
}

FactorizationReport verify_factorization(const OdeSystem& sys, Interval iv, int n) {
  if (n < 2) throw Error(ErrorKind::invalid_argument, "twfactor", "verify needs n >= 2");
  if (!(iv.lo < iv.hi) || !std::isfinite(iv.hi))
    throw Error(ErrorKind::invalid_argument, "twfactor", "verify needs a finite interval with lo < hi");
  FactorizationReport rep;
  FactorPair fp;
  std::shared_ptr<SystemSolution> sol;
  bool ok = false;
  for (double L = 2; L <= 256; L *= 2) {
    Interval range{iv.lo, iv.hi + L};
    try {
      fp = factorize(sys, range);
      sol = std::make_shared<SystemSolution>(sys, range);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::divergence) throw;
      break;
    }
    auto end = (*sol)(iv.hi + L);
    double tail = 0;
    for (int k = 0; k <= 20; ++k) {
      double x = iv.lo + L + (iv.hi - iv.lo) * k / 20;
      double f = fp.F(x), g = fp.G(x);
      tail = std::max(tail, f * f + g * g);
    }
    rep.L = L;
    rep.tail = tail;
    rep.decay = std::fabs(end[0]) + std::fabs(end[1]);
    if (tail < 1e-13 && rep.decay < 1e-10) {
      ok = true;
      break;
    }
  }
  if (!ok) {
    std::ostringstream os;
    os << "A, B are not integrable on (" << iv.lo << ", inf) for " << sys.tag << ": |A|+|B| = " << rep.decay
       << " at x = " << iv.hi + rep.L;
    throw Error(ErrorKind::hypothesis_violation, "twfactor", os.str());
  }
  QuadRule q = composite_gauss_legendre(static_cast<int>(std::ceil(rep.L * 2)), 16, 0, rep.L);
  std::vector<double> xs(n);
  for (int i = 0; i < n; ++i) xs[i] = iv.lo + (iv.hi - iv.lo) * i / (n - 1);
  std::vector<std::vector<double>> f(n, std::vector<double>(q.size())), g = f;
  for (int i = 0; i < n; ++i)
    for (std::size_t k = 0; k < q.size(); ++k) {
      f[i][k] = fp.F(xs[i] + q.nodes[k]);
      g[i][k] = fp.G(xs[i] + q.nodes[k]);
    }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double rhs = 0;
      for (std::size_t k = 0; k < q.size(); ++k) rhs += q.weights[k] * (f[i][k] * f[j][k] + g[i][k] * g[j][k]);
      rep.max_residual = std::max(rep.max_residual, std::fabs(system_kernel(*sol, xs[i], xs[j]) - rhs));
    }
  return rep;
}

std::array<double, 2> bessel_log_pair(double nu, double xi) {
  double s = std::exp(-xi);
  auto b = bessel_j(nu, s);
  return {s * b.j, s * s * b.jp};
}

Mat2 bessel_log_system_matrix(double nu, double xi) {
  return {-1, -1, std::exp(-2 * xi) - nu * nu, -1};
}

Mat2 bessel_bracket(double nu, double xi, double eta) {
  Mat2 m = bessel_log_system_matrix(nu, xi), w = bessel_log_system_matrix(nu, eta);
  // J M(xi) with J = [[0, -1], [1, 0]]
  Mat2 jm = {-m[2], -m[3], m[0], m[1]};
  // M(eta)^T J
  Mat2 wj = {w[2], -w[0], w[3], -w[1]};
  return {jm[0] + wj[0], jm[1] + wj[1], jm[2] + wj[2], jm[3] + wj[3]};
}

Mat2 bessel_bracket_expected(double xi, double eta) {
  return {std::exp(-2 * eta) - std::exp(-2 * xi), 2, -2, 0};
}

}  // namespace rmedge
