#pragma once

#include <string>
#include <vector>

#include "rmedge/kernels.hpp"
#include "rmedge/matrix.hpp"

namespace rmedge {

enum class MarchenkoRoute { resolvent, eigen_expansion };

// K(x, z) - kappa^2 int_x^inf K(x, y) W(y, z) dy = kappa W(x, z), W the square
// of the Hankel operator with symbol A.
struct MarchenkoSolution {
  std::string symbol_tag;
  double kappa = 0.0;
  double x = 0.0;
  MarchenkoRoute route = MarchenkoRoute::resolvent;
  double norm_condition = 0.0;  // kappa^2 int_0^inf u A(u)^2 du
  std::vector<double> z;        // Gauss-Legendre nodes on (x, x + L)
  std::vector<double> K;        // K(x, z_i); resolvent route only
  double K_diag = 0.0;
  double residual = 0.0;  // discrete max residual of the integral equation
};

// int_0^inf u A(u)^2 du
double symbol_moment(const KernelSpec& symbol);

MarchenkoSolution solve_marchenko(const KernelSpec& symbol, double kappa, double x, int n = 80);
MarchenkoSolution solve_marchenko_expansion(const KernelSpec& symbol, double kappa, double x, int n = 80,
                                            int rank = 0);

// log det(I - kappa^2 Gamma_x^2), Gamma_x with kernel A(x + s + t) on (0, L)
double hankel_logdet(const KernelSpec& symbol, double kappa, double x, int n = 80);

struct LogdetSlope {
  double lhs = 0.0;  // centered difference of the log-determinant
  double rhs = 0.0;  // kappa K(x, x)
  double gap = 0.0;
};

LogdetSlope verify_logdet_slope(const KernelSpec& symbol, double kappa, double x, double h = 1e-3, int n = 80);

struct HsExpansion {
  std::vector<double> gammas;  // eigenvalues of Gamma_0, by decreasing magnitude, first `rank`
  Matrix phi;                  // Phi(x)_jk = gamma_j gamma_k int_x^inf phi_j phi_k
  double gamma_sq_sum = 0.0;   // over the full discretized spectrum
  double moment = 0.0;         // int_0^inf u A(u)^2 du
  double phi_hs_norm = 0.0;
};

HsExpansion hs_expansion(const KernelSpec& symbol, double x, int rank, int n = 80);

}  // namespace rmedge
