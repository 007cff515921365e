#pragma once

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "rmedge/kernels.hpp"
#include "rmedge/matrix.hpp"

namespace rmedge {

// c0 + c1 x
struct Affine {
  double c0 = 0.0;
  double c1 = 0.0;
  double operator()(double x) const { return c0 + c1 * x; }
};

// d/dx (A, B) = [[alpha, beta], [-gamma, -alpha]] (A, B), with (A, B)(x0) = (A0, B0).
struct OdeSystem {
  Affine alpha, beta, gamma;
  double x0 = 0.0, A0 = 0.0, B0 = 0.0;
  // optional closed form for (A, B); the initial data is then ignored
  std::function<std::array<double, 2>(double)> closed_form;
  std::string tag = "custom";
};

OdeSystem airy_system();             // A = Ai, B = Ai'
OdeSystem sine_system(double t);     // W = sin(t pi (x - y)) / (pi (x - y))
OdeSystem zero_system();

Mat2 system_matrix(const OdeSystem& sys, double x);
Mat2 build_c_matrix(const OdeSystem& sys);

// (A, B) on [lo, hi]: closed form when registered, otherwise integrated from x0
// and interpolated (quintic Hermite, grid step 1/32).
class SystemSolution {
 public:
  SystemSolution(OdeSystem sys, Interval range);
  std::array<double, 2> operator()(double x) const;
  Interval range() const { return range_; }
  const OdeSystem& system() const { return sys_; }

 private:
  OdeSystem sys_;
  Interval range_;
  double h_ = 0.0;
  std::vector<double> a_, b_;
};

// (A(x)B(y) - A(y)B(x)) / (x - y), diagonal gamma A^2 + 2 alpha A B + beta B^2
double system_kernel(const SystemSolution& sol, double x, double y);

struct FactorPair {
  Mat2 C{}, X{};
  double theta = 0.0;
  double lambda1 = 0.0, lambda2 = 0.0;
  std::function<double(double)> F, G;
};

FactorPair factorize(const OdeSystem& sys, Interval range);

struct FactorizationReport {
  double max_residual = 0.0;
  double L = 0.0;           // truncation of the t-integral
  double tail = 0.0;        // F^2 + G^2 at lo + L
  double decay = 0.0;       // |A| + |B| at hi + L
};

FactorizationReport verify_factorization(const OdeSystem& sys, Interval iv, int n);

// Bessel analogue in log variables: A = e^{-xi} J(e^{-xi}), B = e^{-2xi} J'(e^{-xi}).
std::array<double, 2> bessel_log_pair(double nu, double xi);
Mat2 bessel_log_system_matrix(double nu, double xi);
// J M(xi) + M(eta)^T J with J = [[0, -1], [1, 0]]
Mat2 bessel_bracket(double nu, double xi, double eta);
// closed form [[e^{-2 eta} - e^{-2 xi}, 2], [-2, 0]]
Mat2 bessel_bracket_expected(double xi, double eta);

}  // namespace rmedge
