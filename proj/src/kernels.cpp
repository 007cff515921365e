#include "rmedge/kernels.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "rmedge/error.hpp"
#include "rmedge/hill.hpp"
#include "rmedge/specfun.hpp"

namespace rmedge {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kDiagSwitch = 1e-6;

double bessel_log_a(double nu, double ell, double u) {
  double s = std::exp(-ell - u);
  return s * bessel_j(nu, s).j;
}

double qbessel_offdiag(double nu, double ell, double xi, double eta) {
  double sx = std::exp(-ell - xi), sy = std::exp(-ell - eta);
  auto bx = bessel_j(nu, sx), by = bessel_j(nu, sy);
  double ax = sx * bx.j, ay = sy * by.j;
  double cx = sx * sx * bx.jp, cy = sy * sy * by.jp;
  return (ax * cy - ay * cx) / (sx * sx - sy * sy);
}

double bessel_hard_offdiag(double nu, double x, double y) {
  double rx = std::sqrt(x), ry = std::sqrt(y);
  auto bx = bessel_j(nu, rx), by = bessel_j(nu, ry);
  return (bx.j * ry * by.jp - rx * bx.jp * by.j) / (2 * (x - y));
}

double bessel_hard_diag(double nu, double x) {
  if (x == 0) return nu == 0 ? 0.25 : 0.0;
  double r = std::sqrt(x);
  auto b = bessel_j(nu, r);
  return 0.25 * (b.jp * b.jp + (1 - nu * nu / x) * b.j * b.j);
}

double airy_offdiag(double x, double y) {
  auto a = airy(x), b = airy(y);
  return (a.ai * b.aip - a.aip * b.ai) / (x - y);
}

double circle_value(int n, double d) {
  double s = std::sin(d);
  if (std::fabs(s) < kDiagSwitch) {
    double d0 = std::round(d / std::numbers::pi) * std::numbers::pi;
    return double(n) * n * std::cos(n * d0) / std::cos(d0);
  }
  return n * std::sin(n * d) / s;
}

bool in_domain(const Interval& d, double x) {
  const double slack = 1e-12 * (1 + std::fabs(x));
  return x >= d.lo - slack && x <= d.hi + slack;
}

}  // namespace

std::string KernelSpec::tag() const {
  std::ostringstream os;
  os.precision(12);
  std::visit(overloaded{
                 [&](const family::Sine& f) { os << "sine(t=" << f.t << ")"; },
                 [&](const family::Airy&) { os << "airy"; },
                 [&](const family::BesselHard& f) { os << "bessel_hard(nu=" << f.nu << ")"; },
                 [&](const family::AiryHankelSymbol& f) { os << "airy_hankel(shift=" << f.shift << ")"; },
                 [&](const family::BesselLogSymbol& f) { os << "bessel_log(nu=" << f.nu << ",ell=" << f.ell << ")"; },
                 [&](const family::QBessel& f) { os << "qbessel(nu=" << f.nu << ",ell=" << f.ell << ")"; },
                 [&](const family::Mathieu& f) {
                   os << "mathieu(alpha=" << f.kernel->alpha << ",index=" << f.kernel->index << ")";
                 },
                 [&](const family::SineCircle& f) { os << "sine_circle(n=" << f.n << ")"; },
                 [&](const family::HankelSymbol& f) { os << "hankel(" << f.tag << ")"; },
                 [&](const family::Custom& f) { os << f.tag; },
             },
             family);
  return os.str();
}

KernelSpec sine_kernel(double t) { return {family::Sine{t}, {-kInf, kInf}, DiagonalRule::closed_form}; }
KernelSpec airy_kernel() { return {family::Airy{}, {-kInf, kInf}, DiagonalRule::closed_form}; }
KernelSpec bessel_hard_kernel(double nu) {
  if (!(nu > -0.5)) throw Error(ErrorKind::invalid_argument, "kernels", "bessel kernel needs nu > -1/2");
  return {family::BesselHard{nu}, {0.0, kInf}, DiagonalRule::closed_form};
}
KernelSpec airy_hankel_symbol(double shift) {
  return {family::AiryHankelSymbol{shift}, {-kInf, kInf}, DiagonalRule::closed_form};
}
KernelSpec bessel_log_symbol(double nu, double ell) {
  if (!(nu > -0.5)) throw Error(ErrorKind::invalid_argument, "kernels", "bessel symbol needs nu > -1/2");
  return {family::BesselLogSymbol{nu, ell}, {-kInf, kInf}, DiagonalRule::closed_form};
}
KernelSpec qbessel_kernel(double nu, double ell) {
  if (!(nu > -0.5)) throw Error(ErrorKind::invalid_argument, "kernels", "bessel kernel needs nu > -1/2");
  return {family::QBessel{nu, ell}, {-kInf, kInf}, DiagonalRule::symmetric_limit};
}
KernelSpec mathieu_kernel_spec(std::shared_ptr<const MathieuKernel> k) {
  if (!k) throw Error(ErrorKind::invalid_argument, "kernels", "null Mathieu kernel");
  return {family::Mathieu{std::move(k)}, {-kInf, kInf}, DiagonalRule::symmetric_limit};
}
KernelSpec sine_circle_kernel(int n) {
  if (n < 1) throw Error(ErrorKind::invalid_argument, "kernels", "circle kernel needs n >= 1");
  return {family::SineCircle{n}, {-kInf, kInf}, DiagonalRule::closed_form};
}
KernelSpec hankel_symbol(std::function<double(double)> a, std::string tag, double decay_length) {
  return {family::HankelSymbol{std::move(a), std::move(tag), decay_length}, {-kInf, kInf}, DiagonalRule::closed_form};
}
KernelSpec custom_kernel(std::function<double(double, double)> k, Interval domain, std::string tag,
                         std::function<double(double)> diag) {
  return {family::Custom{std::move(k), std::move(diag), std::move(tag)}, domain,
          DiagonalRule::closed_form};
}

double symmetric_limit(const std::function<double(double, double)>& k, double x, double h) {
  double f1 = k(x - h, x + h);
  double f2 = k(x - h / 2, x + h / 2);
  return (4 * f2 - f1) / 3;
}

double kernel_eval_raw(const KernelSpec& spec, double x, double y) {
  return std::visit(
      overloaded{
          [&](const family::Sine& f) {
            double d = x - y;
            return std::sin(f.t * std::numbers::pi * d) / (std::numbers::pi * d);
          },
          [&](const family::Airy&) { return airy_offdiag(x, y); },
          [&](const family::BesselHard& f) { return bessel_hard_offdiag(f.nu, x, y); },
          [&](const family::AiryHankelSymbol& f) { return airy(f.shift + x + y).ai; },
          [&](const family::BesselLogSymbol& f) { return bessel_log_a(f.nu, f.ell, x + y); },
          [&](const family::QBessel& f) { return qbessel_offdiag(f.nu, f.ell, x, y); },
          [&](const family::Mathieu& f) { return f.kernel->eval_raw(x, y); },
          [&](const family::SineCircle& f) { return circle_value(f.n, x - y); },
          [&](const family::HankelSymbol& f) { return f.a(x + y); },
          [&](const family::Custom& f) { return f.k(x, y); },
      },
      spec.family);
}

namespace {

double diagonal(const KernelSpec& spec, double x) {
  auto raw = [&](double a, double b) { return kernel_eval_raw(spec, a, b); };
  return std::visit(overloaded{
                        [&](const family::Sine& f) { return f.t; },
                        [&](const family::Airy&) {
                          auto a = airy(x);
                          return a.aip * a.aip - x * a.ai * a.ai;
                        },
                        [&](const family::BesselHard& f) { return bessel_hard_diag(f.nu, x); },
                        [&](const family::AiryHankelSymbol& f) { return airy(f.shift + 2 * x).ai; },
                        [&](const family::BesselLogSymbol& f) { return bessel_log_a(f.nu, f.ell, 2 * x); },
                        [&](const family::QBessel&) { return symmetric_limit(raw, x); },
                        [&](const family::Mathieu& f) { return f.kernel->eval(x, x); },
                        [&](const family::SineCircle& f) { return double(f.n) * f.n; },
                        [&](const family::HankelSymbol& f) { return f.a(2 * x); },
                        [&](const family::Custom& f) { return f.diag ? f.diag(x) : f.k(x, x); },
                    },
                    spec.family);
}

}  // namespace

double kernel_eval(const KernelSpec& spec, double x, double y) {
  if (!std::isfinite(x) || !std::isfinite(y) || !in_domain(spec.domain, x) || !in_domain(spec.domain, y))
    throw Error(ErrorKind::invalid_argument, "kernels", "point outside the domain of " + spec.tag());
  // Mathieu handles its own singular set (x - y = k pi)
  if (std::holds_alternative<family::Mathieu>(spec.family))
    return std::get<family::Mathieu>(spec.family).kernel->eval(x, y);
  if (std::holds_alternative<family::SineCircle>(spec.family))
    return circle_value(std::get<family::SineCircle>(spec.family).n, x - y);
  if (std::fabs(x - y) < kDiagSwitch) return diagonal(spec, 0.5 * (x + y));
  return kernel_eval_raw(spec, x, y);
}

bool is_hankel_symbol(const KernelSpec& spec) {
  return std::holds_alternative<family::AiryHankelSymbol>(spec.family) ||
         std::holds_alternative<family::BesselLogSymbol>(spec.family) ||
         std::holds_alternative<family::HankelSymbol>(spec.family);
}

double symbol_eval(const KernelSpec& spec, double u) {
  if (!is_hankel_symbol(spec))
    throw Error(ErrorKind::invalid_argument, "kernels", spec.tag() + " is not a Hankel symbol");
  return kernel_eval_raw(spec, u, 0.0);
}

double truncation_length(const KernelSpec& spec) {
  return std::visit(overloaded{
                        [](const family::Airy&) { return 14.0; },
                        [](const family::AiryHankelSymbol&) { return 14.0; },
                        // the symbol decays like e^{-(1+nu)u}; stretch L for negative orders
                        [](const family::BesselLogSymbol& f) { return f.nu >= 0 ? 18.0 : 18.0 / (1 + f.nu); },
                        [](const family::QBessel& f) { return f.nu >= 0 ? 18.0 : 18.0 / (1 + f.nu); },
                        [](const family::HankelSymbol& f) { return f.decay_length; },
                        [](const auto&) -> double {
                          throw Error(ErrorKind::out_of_domain, "kernels",
                                      "kernel is not trace class on a half-line");
                        },
                    },
                    spec.family);
}

double hankel_square_eval(const KernelSpec& symbol, double x, double y, double L) {
  if (!is_hankel_symbol(symbol))
    throw Error(ErrorKind::invalid_argument, "kernels", symbol.tag() + " is not a Hankel symbol");
  if (!(L > 0)) throw Error(ErrorKind::invalid_argument, "kernels", "hankel square needs L > 0");
  double tail = std::fabs(symbol_eval(symbol, x + L) * symbol_eval(symbol, y + L));
  if (tail > 1e-12)
    throw Error(ErrorKind::truncation, "kernels", "symbol tail at L is too large for " + symbol.tag());
  static const QuadRule ref = gauss_legendre(200, 0.0, 1.0);
  double s = 0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    double u = L * ref.nodes[i];
    s += L * ref.weights[i] * symbol_eval(symbol, x + u) * symbol_eval(symbol, u + y);
  }
  return s;
}

KernelSpec hankel_square_kernel(const KernelSpec& symbol, double L) {
  return custom_kernel([symbol, L](double x, double y) { return hankel_square_eval(symbol, x, y, L); },
                       {0.0, kInf}, "hankel_square(" + symbol.tag() + ")");
}

}  // namespace rmedge
