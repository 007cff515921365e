#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace rmedge {

struct QuadRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  double lo = 0.0;
  double hi = 0.0;

  std::size_t size() const { return nodes.size(); }
};

QuadRule gauss_legendre(int n, double lo, double hi);

// x = lo + (hi-lo) u^2 with u Gauss-Legendre on (0,1); clusters nodes at lo,
// which tames kernels with a sqrt-type singularity at the left end.
QuadRule graded_gauss_legendre(int n, double lo, double hi);

// n-point rule on each of `panels` equal subintervals.
QuadRule composite_gauss_legendre(int panels, int n, double lo, double hi);

struct AiryValue {
  double ai;
  double aip;
};

AiryValue airy(double x);

struct BesselValue {
  double j;
  double jp;
};

// J_nu and its derivative for real order nu > -1/2 (any order is accepted for
// x large enough that the asymptotic branch is used).
BesselValue bessel_j(double nu, double x);

std::complex<double> log_gamma_complex(std::complex<double> z);

}  // namespace rmedge
