#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <variant>

namespace rmedge {

struct MathieuKernel;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

namespace family {

struct Sine {
  double t = 1.0;
};
struct Airy {};
// Hard-edge kernel [J(sqrt x) sqrt(y) J'(sqrt y) - sqrt(x) J'(sqrt x) J(sqrt y)] / (2(x-y)).
struct BesselHard {
  double nu = 0.0;
};
// Hankel kernel Ai(shift + x + y).
struct AiryHankelSymbol {
  double shift = 0.0;
};
// Hankel kernel A(x + y), A(u) = e^{-ell-u} J_nu(e^{-ell-u}).
struct BesselLogSymbol {
  double nu = 0.0;
  double ell = 0.0;
};
// Bessel kernel in log variables (square of the BesselLogSymbol Hankel operator).
struct QBessel {
  double nu = 0.0;
  double ell = 0.0;
};
struct Mathieu {
  std::shared_ptr<const MathieuKernel> kernel;
};
// n sin(n(x-y)) / sin(x-y)
struct SineCircle {
  int n = 1;
};
// Arbitrary Hankel symbol A, kernel A(x + y).
struct HankelSymbol {
  std::function<double(double)> a;
  std::string tag;
  double decay_length = 14.0;
};
struct Custom {
  std::function<double(double, double)> k;
  std::function<double(double)> diag;  // may be empty: then k(x, x) is used
  std::string tag;
};

}  // namespace family

using KernelFamily = std::variant<family::Sine, family::Airy, family::BesselHard, family::AiryHankelSymbol,
                                  family::BesselLogSymbol, family::QBessel, family::Mathieu, family::SineCircle,
                                  family::HankelSymbol, family::Custom>;

enum class DiagonalRule { closed_form, symmetric_limit };

struct KernelSpec {
  KernelFamily family;
  Interval domain;
  DiagonalRule diagonal_rule = DiagonalRule::closed_form;

  std::string tag() const;
};

KernelSpec sine_kernel(double t);
KernelSpec airy_kernel();
KernelSpec bessel_hard_kernel(double nu);
KernelSpec airy_hankel_symbol(double shift);
KernelSpec bessel_log_symbol(double nu, double ell);
KernelSpec qbessel_kernel(double nu, double ell);
KernelSpec mathieu_kernel_spec(std::shared_ptr<const MathieuKernel> k);
KernelSpec sine_circle_kernel(int n);
KernelSpec hankel_symbol(std::function<double(double)> a, std::string tag, double decay_length);
KernelSpec custom_kernel(std::function<double(double, double)> k, Interval domain, std::string tag,
                         std::function<double(double)> diag = {});

double kernel_eval(const KernelSpec& spec, double x, double y);

// Off-diagonal formula evaluated with no diagonal switch; used by tests and the limit rule.
double kernel_eval_raw(const KernelSpec& spec, double x, double y);

// Symmetric-limit diagonal: Richardson on K(x-h, x+h), h = 1e-5.
double symmetric_limit(const std::function<double(double, double)>& k, double x, double h = 1e-5);

bool is_hankel_symbol(const KernelSpec& spec);

// Symbol A with kernel(x, y) = A(x + y); Hankel families only.
double symbol_eval(const KernelSpec& spec, double u);

// Truncation length for semi-infinite intervals, from the kernel's decay.
double truncation_length(const KernelSpec& spec);

// int_0^L A(x+u) A(u+y) du with a 200-point Gauss-Legendre rule.
double hankel_square_eval(const KernelSpec& symbol, double x, double y, double L);

// Kernel (x, y) -> hankel_square_eval(symbol, x, y, L) on (0, inf).
KernelSpec hankel_square_kernel(const KernelSpec& symbol, double L);

}  // namespace rmedge
