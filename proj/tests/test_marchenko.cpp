#include <cmath>

#include "doctest.h"
#include "rmedge/error.hpp"
#include "rmedge/marchenko.hpp"
#include "rmedge/specfun.hpp"

using namespace rmedge;

namespace {

KernelSpec exp_symbol(double c = 1.0) {
  return hankel_symbol([c](double u) { return c * std::exp(-u); }, "exp", 40.0);
}

// Rank-one case A(u) = e^{-u}: W(x, y) = e^{-x-y}/2.
double exact_K(double kappa, double x, double z) {
  return kappa * std::exp(-x - z) / (2 - kappa * kappa * std::exp(-2 * x) / 2);
}

// K(x, z) = kappa W(x,z) + kappa^3 W(x,.) P (I - kappa^2 P W P)^{-1} P W(., z), with W
// evaluated by its own quadrature.
double resolvent_K(const KernelSpec& sym, double kappa, double x, double z, int n) {
  const double L = truncation_length(sym);
  QuadRule q = gauss_legendre(n, x, x + L);
  Matrix s(n, n);
  std::vector<double> bx(n), bz(n);
  for (int i = 0; i < n; ++i) {
    double wi = std::sqrt(q.weights[i]);
    bx[i] = wi * hankel_square_eval(sym, x, q.nodes[i], L);
    bz[i] = wi * hankel_square_eval(sym, q.nodes[i], z, L);
    for (int j = 0; j < n; ++j)
      s(i, j) = (i == j ? 1.0 : 0.0) -
                kappa * kappa * wi * hankel_square_eval(sym, q.nodes[i], q.nodes[j], L) * std::sqrt(q.weights[j]);
  }
  auto u = lu_solve(s, bz);
  double v = 0;
  for (int i = 0; i < n; ++i) v += bx[i] * u[i];
  return kappa * hankel_square_eval(sym, x, z, L) + kappa * kappa * kappa * v;
}

}  // namespace

TEST_CASE("rank-one symbol closed forms") {
  const double kappa = 0.5, x = 1.0;
  auto sym = exp_symbol();
  auto sol = solve_marchenko(sym, kappa, x, 60);
  CHECK(sol.residual < 1e-12);
  for (std::size_t i = 0; i < sol.z.size(); ++i) CHECK(std::fabs(sol.K[i] - exact_K(kappa, x, sol.z[i])) < 1e-9);
  double kd = exact_K(kappa, x, x);
  CHECK(std::fabs(sol.K_diag - kd) < 1e-9);
  auto ex = solve_marchenko_expansion(sym, kappa, x, 60);
  CHECK(std::fabs(ex.K_diag - kd) < 1e-9);
  auto sl = verify_logdet_slope(sym, kappa, x);
  double analytic = (kappa * kappa * std::exp(-2 * x) / 2) / (1 - kappa * kappa * std::exp(-2 * x) / 4);
  CHECK(std::fabs(sl.lhs - analytic) < 1e-7);
  CHECK(std::fabs(sl.rhs - analytic) < 1e-7);
  CHECK(sl.gap < 1e-7);
}

TEST_CASE("kappa = 0") {
  auto sol = solve_marchenko(airy_hankel_symbol(0), 0.0, 0.5, 40);
  for (double k : sol.K) CHECK(k == 0.0);
  CHECK(sol.K_diag == 0.0);
  auto sl = verify_logdet_slope(airy_hankel_symbol(0), 0.0, 0.5);
  CHECK(sl.lhs == 0.0);
  CHECK(sl.rhs == 0.0);
}

TEST_CASE("Airy symbol: discrete residual and resolvent formula") {
  auto sym = airy_hankel_symbol(0);
  auto sol = solve_marchenko(sym, 0.9, 0.0, 80);
  CHECK(sol.residual < 1e-8);
  for (std::size_t i : {0ul, 7ul, 30ul, 55ul}) {
    double r = resolvent_K(sym, 0.9, 0.0, sol.z[i], 40);
    INFO("z=" << sol.z[i]);
    CHECK(std::fabs(sol.K[i] - r) < 1e-8);
  }
  CHECK(std::fabs(sol.K_diag - resolvent_K(sym, 0.9, 0.0, 0.0, 40)) < 1e-8);
}

TEST_CASE("route equivalence for the Airy symbol") {
  auto sym = airy_hankel_symbol(0);
  for (double kappa : {0.3, 0.9})
    for (double x : {0.0, 1.0}) {
      auto a = solve_marchenko(sym, kappa, x);
      auto b = solve_marchenko_expansion(sym, kappa, x);
      INFO("kappa=" << kappa << " x=" << x);
      CHECK(std::fabs(a.K_diag - b.K_diag) < 1e-7);
    }
}

TEST_CASE("log-determinant slope for the Airy symbol") {
  auto sym = airy_hankel_symbol(0);
  for (double kappa : {0.5, 0.9, 1.0})
    for (double x : {0.0, 1.0}) {
      auto s = verify_logdet_slope(sym, kappa, x);
      INFO("kappa=" << kappa << " x=" << x << " lhs=" << s.lhs << " rhs=" << s.rhs);
      CHECK(s.gap < 1e-6);
      CHECK(s.lhs > 0);
    }
}

TEST_CASE("Hilbert-Schmidt expansion") {
  auto e = hs_expansion(exp_symbol(), 0.0, 4);
  CHECK(std::fabs(e.gamma_sq_sum - 0.25) < 1e-6);
  CHECK(std::fabs(e.moment - 0.25) < 1e-10);
  CHECK(std::fabs(e.gammas[0] - 0.5) < 1e-10);
  CHECK(e.phi_hs_norm <= e.gamma_sq_sum + 1e-12);
  auto far = hs_expansion(exp_symbol(), 30.0, 4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) CHECK(std::fabs(far.phi(i, j)) < 1e-8);

  auto a0 = airy(0);
  double moment = -a0.ai * a0.aip / 3;  // int_0^inf u Ai(u)^2 du
  auto ea = hs_expansion(airy_hankel_symbol(0), 0.0, 10);
  CHECK(std::fabs(ea.gamma_sq_sum - moment) < 1e-6);
  CHECK(std::fabs(ea.moment - moment) < 1e-10);
  CHECK(ea.phi_hs_norm <= ea.gamma_sq_sum);
  auto fa = hs_expansion(airy_hankel_symbol(0), 12.0, 10);
  CHECK(fa.phi.frobenius() < 1e-8);
}

TEST_CASE("determinant is polynomial-smooth in kappa^2") {
  auto sym = airy_hankel_symbol(0);
  const int deg = 8;
  std::vector<double> t(deg + 1), d(deg + 1);
  for (int i = 0; i <= deg; ++i) {
    t[i] = 0.125 + 0.125 * std::cos(M_PI * (i + 0.5) / (deg + 1));
    d[i] = std::exp(hankel_logdet(sym, std::sqrt(t[i]), 0.0));
  }
  auto interp = [&](double s) {
    double v = 0;
    for (int i = 0; i <= deg; ++i) {
      double l = 1;
      for (int j = 0; j <= deg; ++j)
        if (j != i) l *= (s - t[j]) / (t[i] - t[j]);
      v += l * d[i];
    }
    return v;
  };
  for (int k = 0; k <= 20; ++k) {
    double kappa = 0.5 * k / 20;
    CHECK(std::fabs(interp(kappa * kappa) - std::exp(hankel_logdet(sym, kappa, 0.0))) < 1e-8);
  }
}

TEST_CASE("contraction hypothesis") {
  try {
    solve_marchenko(exp_symbol(3.0), 0.9, 0.0);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::contraction_failure);
  }
  CHECK_THROWS_AS(solve_marchenko(airy_kernel(), 0.5, 0.0), Error);
}
