#include "rmedge/marchenko.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "rmedge/error.hpp"
#include "rmedge/specfun.hpp"

namespace rmedge {

namespace {

void require_symbol(const KernelSpec& symbol) {
  if (!is_hankel_symbol(symbol))
    throw Error(ErrorKind::invalid_argument, "marchenko", symbol.tag() + " is not a Hankel symbol");
}

void check_contraction(double kappa, double moment, const std::string& tag, double& nc) {
  nc = kappa * kappa * moment;
  if (!(nc < 1)) {
    std::ostringstream os;
    os << "kappa^2 int u A^2 = " << nc << " >= 1 for " << tag;
    throw Error(ErrorKind::contraction_failure, "marchenko", os.str());
  }
}

// G_ik = sqrt(w_i) A(shift + s_i + s_k) sqrt(w_k) on the rule for (0, L)
Matrix hankel_matrix(const KernelSpec& symbol, const QuadRule& q, double shift) {
  const std::size_t n = q.size();
  Matrix g(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = i; k < n; ++k)
      g(i, k) = g(k, i) = std::sqrt(q.weights[i] * q.weights[k]) * symbol_eval(symbol, shift + q.nodes[i] + q.nodes[k]);
  return g;
}

}  // namespace

double symbol_moment(const KernelSpec& symbol) {
  require_symbol(symbol);
  double L = truncation_length(symbol);
  QuadRule q = composite_gauss_legendre(static_cast<int>(std::ceil(L)), 20, 0, L);
  double s = 0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    double a = symbol_eval(symbol, q.nodes[i]);
    s += q.weights[i] * q.nodes[i] * a * a;
  }
  return s;
}

MarchenkoSolution solve_marchenko(const KernelSpec& symbol, double kappa, double x, int n) {
  require_symbol(symbol);
  if (n < 2) throw Error(ErrorKind::invalid_argument, "marchenko", "n must be >= 2");
  MarchenkoSolution sol;
  sol.symbol_tag = symbol.tag();
  sol.kappa = kappa;
  sol.x = x;
  sol.route = MarchenkoRoute::resolvent;
  check_contraction(kappa, symbol_moment(symbol), sol.symbol_tag, sol.norm_condition);
  const double L = truncation_length(symbol);
  QuadRule q = gauss_legendre(n, 0, L);
  std::vector<double> w = q.weights, a(n);
  Matrix h(n, n);
  for (int i = 0; i < n; ++i) {
    a[i] = symbol_eval(symbol, x + q.nodes[i]);
    for (int k = i; k < n; ++k) h(i, k) = h(k, i) = symbol_eval(symbol, x + q.nodes[i] + q.nodes[k]);
  }
  // W(y_i, y_j) = sum_k H_ik w_k H_kj and W(x, y_i) = sum_k w_k a_k H_ki
  Matrix W(n, n);
  std::vector<double> b(n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) b[i] += w[k] * a[k] * h(k, i);
    for (int j = i; j < n; ++j) {
      double s = 0;
      for (int k = 0; k < n; ++k) s += h(i, k) * w[k] * h(k, j);
      W(i, j) = W(j, i) = s;
    }
  }
  Matrix m(n, n);
  std::vector<double> rhs(n);
  for (int i = 0; i < n; ++i) {
    rhs[i] = kappa * b[i];
    for (int j = 0; j < n; ++j) m(i, j) = (i == j ? 1.0 : 0.0) - kappa * kappa * W(i, j) * w[j];
  }
  sol.K = lu_solve(m, rhs);
  sol.z.resize(n);
  for (int i = 0; i < n; ++i) {
    sol.z[i] = x + q.nodes[i];
    double r = sol.K[i] - rhs[i];
    for (int j = 0; j < n; ++j) r -= kappa * kappa * W(i, j) * w[j] * sol.K[j];
    sol.residual = std::max(sol.residual, std::fabs(r));
  }
  // diagonal from kappa K(x,x) = kappa^2 <(I - kappa^2 Gamma_x^2)^{-1} a, a>
  Matrix g = hankel_matrix(symbol, q, x);
  Matrix g2 = g * g;
  Matrix r(n, n);
  std::vector<double> at(n);
  for (int i = 0; i < n; ++i) {
    at[i] = std::sqrt(w[i]) * a[i];
    for (int j = 0; j < n; ++j) r(i, j) = (i == j ? 1.0 : 0.0) - kappa * kappa * g2(i, j);
  }
  std::vector<double> u = lu_solve(r, at);
  sol.K_diag = kappa * std::inner_product(u.begin(), u.end(), at.begin(), 0.0);
  return sol;
}

namespace {

struct Expansion {
  std::vector<double> gammas;  // by decreasing magnitude
  std::vector<std::vector<double>> psi_nodes;  // psi_j(x + s_p) = gamma_j phi_j(x + s_p)
  std::vector<double> psi_x;                   // psi_j(x)
  double gamma_sq_sum = 0.0;
  QuadRule q;
};

Expansion expand(const KernelSpec& symbol, double x, int rank, int n) {
  if (n < 2) throw Error(ErrorKind::invalid_argument, "marchenko", "n must be >= 2");
  const double L = truncation_length(symbol);
  Expansion e;
  e.q = gauss_legendre(n, 0, L);
  EigenResult er = jacobi_eigen(hankel_matrix(symbol, e.q, 0.0));
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int i, int j) { return std::fabs(er.values[i]) > std::fabs(er.values[j]); });
  for (double v : er.values) e.gamma_sq_sum += v * v;
  const double gmax = std::fabs(er.values[order[0]]);
  int r = rank > 0 ? std::min(rank, n) : n;
  // psi_j(y) = sum_i sqrt(w_i) A(y + s_i) v_ij
  auto psi = [&](int col, double y) {
    double s = 0;
    for (int i = 0; i < n; ++i) s += std::sqrt(e.q.weights[i]) * symbol_eval(symbol, y + e.q.nodes[i]) * er.vectors(i, col);
    return s;
  };
  for (int t = 0; t < r; ++t) {
    int col = order[t];
    if (rank <= 0 && std::fabs(er.values[col]) <= 1e-14 * gmax) break;
    e.gammas.push_back(er.values[col]);
    std::vector<double> pn(n);
    for (int p = 0; p < n; ++p) pn[p] = psi(col, x + e.q.nodes[p]);
    e.psi_nodes.push_back(std::move(pn));
    e.psi_x.push_back(psi(col, x));
  }
  return e;
}

Matrix phi_matrix(const Expansion& e) {
  const std::size_t m = e.gammas.size();
  Matrix phi(m, m);
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t k = j; k < m; ++k) {
      double s = 0;
      for (std::size_t p = 0; p < e.q.size(); ++p) s += e.q.weights[p] * e.psi_nodes[j][p] * e.psi_nodes[k][p];
      phi(j, k) = phi(k, j) = s;
    }
  return phi;
}

}  // namespace

MarchenkoSolution solve_marchenko_expansion(const KernelSpec& symbol, double kappa, double x, int n, int rank) {
  require_symbol(symbol);
  MarchenkoSolution sol;
  sol.symbol_tag = symbol.tag();
  sol.kappa = kappa;
  sol.x = x;
  sol.route = MarchenkoRoute::eigen_expansion;
  check_contraction(kappa, symbol_moment(symbol), sol.symbol_tag, sol.norm_condition);
  Expansion e = expand(symbol, x, rank, n);
  Matrix phi = phi_matrix(e);
  const std::size_t m = e.gammas.size();
  Matrix a(m, m);
  std::vector<double> rhs(m);
  for (std::size_t j = 0; j < m; ++j) {
    rhs[j] = kappa * e.psi_x[j];
    for (std::size_t k = 0; k < m; ++k) a(j, k) = (j == k ? 1.0 : 0.0) - kappa * kappa * phi(j, k);
  }
  std::vector<double> chi = lu_solve(a, rhs);
  for (std::size_t j = 0; j < m; ++j) {
    double r = chi[j] - rhs[j];
    for (std::size_t k = 0; k < m; ++k) r -= kappa * kappa * phi(j, k) * chi[k];
    sol.residual = std::max(sol.residual, std::fabs(r));
    sol.K_diag += chi[j] * e.psi_x[j];
  }
  return sol;
}

double hankel_logdet(const KernelSpec& symbol, double kappa, double x, int n) {
  require_symbol(symbol);
  QuadRule q = gauss_legendre(n, 0, truncation_length(symbol));
  double s = 0;
  for (double g : symmetric_eigenvalues(hankel_matrix(symbol, q, x))) {
    double f = 1 - kappa * kappa * g * g;
    if (!(f > 0)) throw Error(ErrorKind::near_singular, "marchenko", "I - kappa^2 Gamma_x^2 is not positive");
    s += std::log(f);
  }
  return s;
}

LogdetSlope verify_logdet_slope(const KernelSpec& symbol, double kappa, double x, double h, int n) {
  if (!(h > 0)) throw Error(ErrorKind::invalid_argument, "marchenko", "step h must be positive");
  LogdetSlope r;
  r.lhs = (hankel_logdet(symbol, kappa, x + h, n) - hankel_logdet(symbol, kappa, x - h, n)) / (2 * h);
  r.rhs = kappa * solve_marchenko(symbol, kappa, x, n).K_diag;
  r.gap = std::fabs(r.lhs - r.rhs);
  return r;
}

HsExpansion hs_expansion(const KernelSpec& symbol, double x, int rank, int n) {
  require_symbol(symbol);
  if (rank < 1 || rank > n) throw Error(ErrorKind::invalid_argument, "marchenko", "rank must be in [1, n]");
  Expansion e = expand(symbol, x, rank, n);
  HsExpansion out;
  out.gammas = e.gammas;
  out.phi = phi_matrix(e);
  out.gamma_sq_sum = e.gamma_sq_sum;
  out.moment = symbol_moment(symbol);
  out.phi_hs_norm = out.phi.frobenius();
  return out;
}

}  // namespace rmedge
