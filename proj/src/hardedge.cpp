#include "rmedge/hardedge.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "rmedge/error.hpp"
#include "rmedge/linop.hpp"
#include "rmedge/matrix.hpp"

namespace rmedge {

double HardEdgeConfig::alpha() const { return -0.5 * std::log(a); }

void validate(const HardEdgeConfig& cfg) {
  if (!(cfg.nu > -0.5) || !std::isfinite(cfg.nu))
    throw Error(ErrorKind::invalid_argument, "hardedge", "nu must be finite and > -1/2");
  if (!(cfg.a > 0 && cfg.a < 1)) throw Error(ErrorKind::invalid_argument, "hardedge", "a must lie in (0, 1)");
  if (!std::isfinite(cfg.ell)) throw Error(ErrorKind::invalid_argument, "hardedge", "ell must be finite");
}

double bessel_log_value(double nu, double u) {
  double z = std::exp(-u);
  return z * bessel_j(nu, z).j;
}

QuadRule hankel_rule(double X, int panels, int per_panel) {
  if (!(X > 0) || panels < 1 || per_panel < 2)
    throw Error(ErrorKind::invalid_argument, "hardedge", "hankel_rule needs X > 0, panels >= 1, per_panel >= 2");
  return composite_gauss_legendre(panels, per_panel, 0, X);
}

std::vector<double> hankel_transform(const QuadRule& rule, const std::vector<double>& f, double nu,
                                     const std::vector<double>& xs) {
  if (f.size() != rule.size()) throw Error(ErrorKind::invalid_argument, "hardedge", "samples do not match the rule");
  if (!(nu > -1)) throw Error(ErrorKind::invalid_argument, "hardedge", "hankel_transform needs nu > -1");
  double fmax = 0, tail = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    fmax = std::max(fmax, std::fabs(f[i]));
    if (rule.nodes[i] > rule.lo + 0.9 * (rule.hi - rule.lo)) tail = std::max(tail, std::fabs(f[i]));
  }
  if (tail > 1e-10 * std::max(1.0, fmax)) {
    std::ostringstream os;
    os << "sampled function is " << tail << " near X = " << rule.hi;
    throw Error(ErrorKind::truncation, "hardedge", os.str());
  }
  std::vector<double> out(xs.size(), 0.0);
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (!(xs[k] >= 0)) throw Error(ErrorKind::invalid_argument, "hardedge", "transform points must be >= 0");
    double s = 0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
      double y = rule.nodes[i];
      double j = xs[k] == 0 ? (nu == 0 ? 1.0 : 0.0) : bessel_j(nu, xs[k] * y).j;
      s += rule.weights[i] * j * f[i] * y;
    }
    out[k] = s;
  }
  return out;
}

namespace {

const QuadRule& ref_rule() {
  static const QuadRule r = gauss_legendre(12, 0, 1);
  return r;
}

// int_lo^hi k(c + eta) g(eta) d eta; panels hold at most ~6 radians of the
// kernel's oscillation, whose frequency in eta is e^{-c-eta}.
template <class G>
double log_kernel_integral(double nu, double c, const G& g, double lo, double hi) {
  const QuadRule& ref = ref_rule();
  double s = 0, right = hi;
  while (right > lo) {
    double z = std::exp(-(c + right));
    double left = std::max(lo, right - std::min(0.25, 6.0 / std::max(z, 1.0)));
    double len = right - left;
    for (std::size_t k = 0; k < ref.size(); ++k) {
      double eta = left + len * ref.nodes[k];
      s += len * ref.weights[k] * bessel_log_value(nu, c + eta) * g(eta);
    }
    right = left;
  }
  return s;
}

// Piecewise polynomial on equal panels, barycentric Lagrange on the 12 reference nodes.
class PanelFunction {
 public:
  PanelFunction(double lo, double hi, double width) : lo_(lo) {
    panels_ = std::max(1, static_cast<int>(std::ceil((hi - lo) / width - 1e-9)));
    width_ = (hi - lo) / panels_;
    const QuadRule& ref = ref_rule();
    bw_.resize(ref.size());
    for (std::size_t j = 0; j < ref.size(); ++j) {
      double p = 1;
      for (std::size_t k = 0; k < ref.size(); ++k)
        if (k != j) p *= ref.nodes[j] - ref.nodes[k];
      bw_[j] = 1 / p;
    }
    values_.assign(panels_ * ref.size(), 0.0);
  }

  std::vector<double> nodes() const {
    std::vector<double> x;
    for (int p = 0; p < panels_; ++p)
      for (double t : ref_rule().nodes) x.push_back(lo_ + (p + t) * width_);
    return x;
  }
  std::vector<double>& values() { return values_; }
  double lo() const { return lo_; }
  double hi() const { return lo_ + panels_ * width_; }

  double operator()(double x) const {
    if (x < lo() || x > hi()) return 0.0;
    int p = std::clamp(static_cast<int>((x - lo_) / width_), 0, panels_ - 1);
    double t = (x - lo_) / width_ - p;
    const auto& nd = ref_rule().nodes;
    double num = 0, den = 0;
    for (std::size_t j = 0; j < nd.size(); ++j) {
      double d = t - nd[j];
      if (d == 0) return values_[p * nd.size() + j];
      double c = bw_[j] / d;
      num += c * values_[p * nd.size() + j];
      den += c;
    }
    return num / den;
  }

 private:
  double lo_, width_;
  int panels_;
  std::vector<double> bw_, values_;
};

}  // namespace

std::vector<double> g_apply(double nu, double ell, const TestFunction& f, const std::vector<double>& xs) {
  if (!(nu > -1)) throw Error(ErrorKind::invalid_argument, "hardedge", "G needs nu > -1");
  if (!(f.support.lo < f.support.hi) || !std::isfinite(f.support.lo) || !std::isfinite(f.support.hi))
    throw Error(ErrorKind::invalid_argument, "hardedge", "test function support must be a finite interval");
  std::vector<double> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    out[i] = log_kernel_integral(nu, ell + xs[i], f.f, f.support.lo, f.support.hi);
  return out;
}

InvolutionReport g_involution_check(double nu, double ell, const std::vector<TestFunction>& fns) {
  InvolutionReport rep;
  for (const TestFunction& f : fns) {
    // G f lives near xi = -ell - eta for eta in the support; it decays like
    // e^{-(1+nu) xi} to the right and much faster to the left.
    const double centre = -ell - 0.5 * (f.support.lo + f.support.hi);
    const double hi = -ell - f.support.lo + 32 / (1 + nu);
    double lo = centre, peak = 0;
    for (double x = centre + 2; x > centre; x -= 0.25) peak = std::max(peak, std::fabs(g_apply(nu, ell, f, {x})[0]));
    int quiet = 0;
    while (quiet < 4) {
      lo -= 0.25;
      if (lo < centre - 10)
        throw Error(ErrorKind::truncation, "hardedge", "G f does not decay to the left of " + f.tag);
      double v = std::fabs(g_apply(nu, ell, f, {lo})[0]);
      peak = std::max(peak, v);
      quiet = v < 1e-10 * peak ? quiet + 1 : 0;
    }
    PanelFunction h(lo, hi, 0.25);
    h.values() = g_apply(nu, ell, f, h.nodes());
    TestFunction hf{[&h](double x) { return h(x); }, {h.lo(), h.hi()}, "G " + f.tag};
    std::vector<double> xs(61);
    for (int i = 0; i < 61; ++i) xs[i] = f.support.lo + (f.support.hi - f.support.lo) * i / 60;
    std::vector<double> back = g_apply(nu, ell, hf, xs);
    double dev = 0;
    for (int i = 0; i < 61; ++i) dev = std::max(dev, std::fabs(back[i] - f.f(xs[i])));
    rep.deviations.push_back(dev);
    rep.max_deviation = std::max(rep.max_deviation, dev);
  }
  return rep;
}

DetIdentity bessel_det_identity(const HardEdgeConfig& cfg, double z, int n) {
  validate(cfg);
  if (n < 2) throw Error(ErrorKind::invalid_argument, "hardedge", "n must be >= 2");
  DetIdentity d;
  if (z == 0) return d;
  const double a = cfg.a * std::exp(-2 * cfg.ell);
  d.lhs = fredholm_det(discretize(bessel_hard_kernel(cfg.nu), {0, a}, n), z);
  DiscretizedOp op = discretize(bessel_log_symbol(cfg.nu, cfg.ell + cfg.alpha()), {0, kInf}, n);
  d.rhs = 1;
  for (double g : symmetric_eigenvalues(op.matrix)) d.rhs *= 1 - z * g * g;
  d.gap = std::fabs(d.lhs - d.rhs);
  return d;
}

namespace {

std::vector<int> by_magnitude(const std::vector<double>& v) {
  std::vector<int> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) { return std::fabs(v[i]) > std::fabs(v[j]); });
  return order;
}

}  // namespace

EigenMatch phi_eigen_correspondence(double nu, double s, int n, int count) {
  if (!(nu > -0.5)) throw Error(ErrorKind::invalid_argument, "hardedge", "nu must be > -1/2");
  if (!(s > 0 && s <= 1)) throw Error(ErrorKind::invalid_argument, "hardedge", "s must lie in (0, 1]");
  if (n < 20) throw Error(ErrorKind::invalid_argument, "hardedge", "n must be >= 20");
  if (count < 1 || count > n) throw Error(ErrorKind::invalid_argument, "hardedge", "count must be in [1, n]");
  EigenMatch m;
  m.ell = -0.5 * std::log(s);

  // (0, 1) side on x = u^4, which makes the x^{nu/2} endpoint behaviour smooth
  QuadRule u = gauss_legendre(n, 0, 1), q;
  for (std::size_t i = 0; i < u.size(); ++i) {
    double t = u.nodes[i];
    q.nodes.push_back(t * t * t * t);
    q.weights.push_back(4 * t * t * t * u.weights[i]);
  }
  q.lo = 0;
  q.hi = 1;
  auto kern = [&](double x, double y) { return bessel_j(nu, std::sqrt(s * x * y)).j; };
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) a(i, j) = a(j, i) = std::sqrt(q.weights[i] * q.weights[j]) * kern(q.nodes[i], q.nodes[j]);
  EigenResult ea = jacobi_eigen(a);

  DiscretizedOp op = discretize(bessel_log_symbol(nu, m.ell), {0, kInf}, n);
  EigenResult eb = jacobi_eigen(op.matrix);

  auto oa = by_magnitude(ea.values), ob = by_magnitude(eb.values);
  const double top = std::fabs(eb.values[ob[0]]);
  for (int k = 0; k < count; ++k) {
    double lam = ea.values[oa[k]];
    m.mapped.push_back(lam * std::sqrt(s) / 2);
    m.hankel.push_back(eb.values[ob[k]]);
    m.max_value_gap = std::max(m.max_value_gap, std::fabs(m.mapped.back() - m.hankel.back()));
    double res = 0;
    if (std::fabs(m.hankel.back()) > 1e-8 * std::max(top, 1e-300) && std::fabs(m.hankel.back()) > 1e-12) {
      // f by Nystrom interpolation, g from the Hankel eigenvector
      auto f = [&](double x) {
        double v = 0;
        for (int j = 0; j < n; ++j) v += kern(x, q.nodes[j]) * std::sqrt(q.weights[j]) * ea.vectors(j, oa[k]);
        return v / lam;
      };
      std::vector<double> g(n), t(n);
      double dot = 0, gmax = 0;
      for (int i = 0; i < n; ++i) {
        double xi = op.rule.nodes[i];
        g[i] = eb.vectors(i, ob[k]) / std::sqrt(op.rule.weights[i]);
        t[i] = std::numbers::sqrt2 * std::exp(-xi) * f(std::exp(-2 * xi));
        dot += op.rule.weights[i] * g[i] * t[i];
        gmax = std::max(gmax, std::fabs(g[i]));
      }
      double sg = dot < 0 ? -1.0 : 1.0;
      for (int i = 0; i < n; ++i) res = std::max(res, std::fabs(g[i] - sg * t[i]));
      res /= gmax;
    }
    m.vector_residual.push_back(res);
    m.max_vector_residual = std::max(m.max_vector_residual, res);
  }
  return m;
}

std::complex<double> u_nu_eval(double nu, double x) {
  if (!(nu > -1) || !std::isfinite(x)) throw Error(ErrorKind::invalid_argument, "hardedge", "u_nu needs nu > -1, finite x");
  std::complex<double> zp(0.5 * (1 + nu), 0.5 * x), zm(0.5 * (1 + nu), -0.5 * x);
  std::complex<double> i(0, 1);
  return std::exp(i * x * std::numbers::ln2 + log_gamma_complex(zp) - log_gamma_complex(zm));
}

namespace {

// Rule on (0, U) with panels short enough for the oscillation of k(ell + u).
QuadRule log_symbol_rule(double ell, double U) {
  QuadRule r;
  const QuadRule& ref = ref_rule();
  double left = 0;
  while (left < U) {
    double w = std::min(0.5, 2.0 / std::max(std::exp(-(ell + left)), 1.0));
    double right = std::min(U, left + w);
    for (std::size_t k = 0; k < ref.size(); ++k) {
      r.nodes.push_back(left + (right - left) * ref.nodes[k]);
      r.weights.push_back((right - left) * ref.weights[k]);
    }
    left = right;
  }
  r.lo = 0;
  r.hi = U;
  return r;
}

}  // namespace

HsIdentity hs_norm_identity(double nu, double ell) {
  if (!(nu > -0.5)) throw Error(ErrorKind::invalid_argument, "hardedge", "nu must be > -1/2");
  if (!(ell >= -2) || !std::isfinite(ell)) throw Error(ErrorKind::invalid_argument, "hardedge", "ell must be >= -2");
  const double U = std::max(0.0, -ell) + 40 / (1 + nu);
  QuadRule r = log_symbol_rule(ell, U);
  const std::size_t n = r.size();
  HsIdentity h;
  for (std::size_t i = 0; i < n; ++i) {
    double k = bessel_log_value(nu, ell + r.nodes[i]);
    h.single_integral += r.weights[i] * r.nodes[i] * k * k;
    for (std::size_t j = 0; j < n; ++j) {
      double v = bessel_log_value(nu, ell + r.nodes[i] + r.nodes[j]);
      h.double_integral += r.weights[i] * r.weights[j] * v * v;
    }
  }
  h.gap = std::fabs(h.double_integral - h.single_integral);
  return h;
}

double q_projection_defect(double nu, double ell, double window_lo, int panels_per_unit) {
  if (!(nu > -0.5)) throw Error(ErrorKind::invalid_argument, "hardedge", "nu must be > -1/2");
  if (panels_per_unit < 1) throw Error(ErrorKind::invalid_argument, "hardedge", "panels_per_unit must be >= 1");
  const double hi = -ell + 32 / (1 + nu);
  if (!(window_lo < 1 && window_lo < hi)) throw Error(ErrorKind::invalid_argument, "hardedge", "window must contain 1");
  int panels = static_cast<int>(std::ceil((hi - window_lo) * panels_per_unit));
  QuadRule r = composite_gauss_legendre(panels, 8, window_lo, hi);
  const std::size_t n = r.size();
  // A = e^{-v} J(e^{-v}), B = e^{-2v} J'(e^{-v}) with v = ell + xi
  std::vector<double> A(n), B(n), E(n), sw(n);
  for (std::size_t i = 0; i < n; ++i) {
    double z = std::exp(-(ell + r.nodes[i]));
    auto b = bessel_j(nu, z);
    A[i] = z * b.j;
    B[i] = z * z * b.jp;
    E[i] = z * z;
    sw[i] = std::sqrt(r.weights[i]);
  }
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = r.weights[i] * ((E[i] - nu * nu) * A[i] * A[i] + B[i] * B[i]) / (2 * E[i]);
    for (std::size_t j = i + 1; j < n; ++j)
      m(i, j) = m(j, i) = sw[i] * sw[j] * (A[i] * B[j] - B[i] * A[j]) / (E[i] - E[j]);
  }
  std::vector<double> b(n);
  for (std::size_t i = 0; i < n; ++i) b[i] = sw[i] * std::exp(-(r.nodes[i] - 1) * (r.nodes[i] - 1));
  auto apply = [&](const std::vector<double>& v) {
    std::vector<double> o(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) o[i] += m(i, j) * v[j];
    return o;
  };
  std::vector<double> mb = apply(b), mmb = apply(mb);
  double num = 0, den = 0;
  for (std::size_t i = 0; i < n; ++i) {
    num += (mmb[i] - mb[i]) * (mmb[i] - mb[i]);
    den += mb[i] * mb[i];
  }
  return std::sqrt(num / den);
}

EigenOdeCheck eigen_ode_check(double nu, double ell, double eta, double xi, double h) {
  if (!(h > 0)) throw Error(ErrorKind::invalid_argument, "hardedge", "step h must be positive");
  auto f = [&](double x) { return bessel_log_value(nu, ell + x + eta); };
  double fm2 = f(xi - 2 * h), fm1 = f(xi - h), f0 = f(xi), fp1 = f(xi + h), fp2 = f(xi + 2 * h);
  double d1 = (-fp2 + 8 * fp1 - 8 * fm1 + fm2) / (12 * h);
  double d2 = (-fp2 + 16 * fp1 - 30 * f0 + 16 * fm1 - fm2) / (12 * h * h);
  EigenOdeCheck c;
  c.lhs = -std::exp(2 * xi) * (d2 + 2 * d1 + (1 - nu * nu) * f0);
  c.rhs = std::exp(-2 * ell - 2 * eta) * f0;
  c.gap = std::fabs(c.lhs - c.rhs);
  return c;
}

}  // namespace rmedge
