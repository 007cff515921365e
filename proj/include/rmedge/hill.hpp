#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "rmedge/matrix.hpp"

namespace rmedge {

// y'' + (lambda + alpha cos 2x) y = 0
struct HillModel {
  double alpha = 0.0;
  double lambda = 0.0;
};

struct MonodromyResult {
  Mat2 S{};
  double max_det_drift = 0.0;  // max |det S(x) - 1| over the integration steps
};

MonodromyResult monodromy_with_drift(const HillModel& m);
Mat2 monodromy(const HillModel& m);
double discriminant(const HillModel& m);

// Delta and dDelta/dlambda (variational equations).
std::array<double, 2> discriminant_with_derivative(const HillModel& m);

enum class Period { pi_periodic, two_pi_periodic };

struct PeriodicSpectrum {
  double alpha = 0.0;
  std::vector<double> lambdas;
  std::vector<Period> period_tags;
  std::vector<bool> double_root;
  std::vector<bool> even;  // eigenfunction parity about x = 0
};

PeriodicSpectrum periodic_spectrum(double alpha, int count);

struct ProductCheck {
  double lhs = 0.0;  // 4 - Delta^2 computed directly
  double rhs = 0.0;  // truncated product
  double gap = 0.0;
  double rel_gap = 0.0;
  double rhs_corrected = 0.0;  // product times the free (alpha = 0) tail factor
  double rel_gap_corrected = 0.0;
};

ProductCheck product_formula_check(double alpha, double lambda, int n_terms);

struct MathieuKernel {
  double alpha = 0.0;
  double lambda = 0.0;
  int index = 0;
  int grid_n = 0;  // samples on [0, 2pi), periodic
  std::vector<double> a, ap;
  double ode_residual = 0.0;  // grid ODE residual from sixth-order differences of A and A'

  double A(double x) const;
  double Ap(double x) const;
  double eval_raw(double x, double y) const;
  double eval(double x, double y) const;
};

std::shared_ptr<const MathieuKernel> mathieu_tw_kernel(double alpha, int spectral_index);

struct EigenfunctionCheck {
  double eigenvalue = 0.0;
  double mu = 0.0;  // best-fit spectral constant
  double residual = 0.0;
  bool skipped = false;
  std::string tag;
};

struct EigencheckReport {
  std::vector<double> eigenvalues;  // descending, full discretized spectrum
  std::vector<EigenfunctionCheck> items;
  double worst_residual = 0.0;
};

EigencheckReport mathieu_eigencheck(const MathieuKernel& k, int n, int top = 3);

}  // namespace rmedge
