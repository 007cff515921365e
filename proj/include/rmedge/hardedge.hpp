#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "rmedge/kernels.hpp"
#include "rmedge/specfun.hpp"

namespace rmedge {

// Hard-edge parameters; a in (0, 1) sets the shift alpha = -log(a) / 2.
struct HardEdgeConfig {
  double nu = 0.0;
  double ell = 0.0;
  double a = 0.5;

  double alpha() const;
};

void validate(const HardEdgeConfig& cfg);

// Log-variable symbol e^{-u} J_nu(e^{-u}).
double bessel_log_value(double nu, double u);

// Composite Gauss-Legendre rule on (0, X) for sampled functions.
QuadRule hankel_rule(double X, int panels, int per_panel = 16);

// int_0^X J_nu(x y) f(y) y dy at each x, with f sampled on the rule nodes.
// Throws truncation when f has not decayed below 1e-10 near X.
std::vector<double> hankel_transform(const QuadRule& rule, const std::vector<double>& f, double nu,
                                     const std::vector<double>& xs);

// Function on R that is negligible outside its support.
struct TestFunction {
  std::function<double(double)> f;
  Interval support;
  std::string tag;
};

// G_ell f(xi) = int e^{-ell-xi-eta} J_nu(e^{-ell-xi-eta}) f(eta) d eta at each xi.
std::vector<double> g_apply(double nu, double ell, const TestFunction& f, const std::vector<double>& xs);

struct InvolutionReport {
  double max_deviation = 0.0;
  std::vector<double> deviations;  // per test function, sup over 61 points of its support
};

InvolutionReport g_involution_check(double nu, double ell, const std::vector<TestFunction>& fns);

struct DetIdentity {
  double lhs = 1.0;  // det(I - z F) with F the hard-edge kernel on (0, a e^{-2 ell})
  double rhs = 1.0;  // det(I - z Phi^2), Phi the Hankel operator of e^{-v} J(e^{-v}), v = ell + alpha + u
  double gap = 0.0;
};

DetIdentity bessel_det_identity(const HardEdgeConfig& cfg, double z, int n);

// Eigenpairs of J_nu(sqrt(s x y)) on (0, 1) against those of the log-variable
// Hankel operator with ell = -log(s) / 2.
struct EigenMatch {
  double ell = 0.0;
  std::vector<double> mapped;      // lambda sqrt(s) / 2, by decreasing magnitude
  std::vector<double> hankel;      // Hankel operator eigenvalues, same order
  std::vector<double> vector_residual;  // sup |g - sqrt(2) e^{-xi} f(e^{-2 xi})| / sup |g|
  double max_value_gap = 0.0;
  double max_vector_residual = 0.0;
};

EigenMatch phi_eigen_correspondence(double nu, double s, int n, int count = 5);

// 2^{ix} Gamma((1 + nu + ix) / 2) / Gamma((1 + nu - ix) / 2)
std::complex<double> u_nu_eval(double nu, double x);

// int int_{(0,inf)^2} k(ell + xi + eta)^2 against int_0^inf u k(ell + u)^2 du.
struct HsIdentity {
  double double_integral = 0.0;
  double single_integral = 0.0;
  double gap = 0.0;
};

HsIdentity hs_norm_identity(double nu, double ell);

// Relative idempotence defect |(M^2 - M) b| / |M b| of the Nystrom matrix M of the
// projection kernel compressed to [window_lo, inf), for a bump b centred at 1.
double q_projection_defect(double nu, double ell, double window_lo, int panels_per_unit);

// -e^{2 xi} (f'' + 2 f' + (1 - nu^2) f) against e^{-2 ell - 2 eta} f for
// f(xi) = k(ell + xi + eta), by finite differences.
struct EigenOdeCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;
};

EigenOdeCheck eigen_ode_check(double nu, double ell, double eta, double xi, double h = 1e-3);

}  // namespace rmedge
