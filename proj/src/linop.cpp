#include "rmedge/linop.hpp"

#include <cmath>
#include <sstream>

#include "rmedge/error.hpp"

namespace rmedge {

DiscretizedOp discretize(const KernelSpec& kernel, const QuadRule& rule) {
  const std::size_t n = rule.size();
  if (n < 2) throw Error(ErrorKind::invalid_argument, "linop", "discretize needs n >= 2");
  DiscretizedOp op;
  op.rule = rule;
  op.kernel_tag = kernel.tag();
  op.matrix = Matrix(n, n);
  std::vector<double> sw(n);
  for (std::size_t i = 0; i < n; ++i) sw[i] = std::sqrt(rule.weights[i]);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      double v = sw[i] * kernel_eval(kernel, rule.nodes[i], rule.nodes[j]) * sw[j];
      if (!std::isfinite(v))
        throw Error(ErrorKind::out_of_domain, "linop", "non-finite kernel value for " + op.kernel_tag);
      op.matrix(i, j) = op.matrix(j, i) = v;
    }
  }
  return op;
}

DiscretizedOp discretize(const KernelSpec& kernel, Interval iv, int n) {
  if (n < 2) throw Error(ErrorKind::invalid_argument, "linop", "discretize needs n >= 2");
  if (!(iv.lo < iv.hi) || !std::isfinite(iv.lo))
    throw Error(ErrorKind::invalid_argument, "linop", "discretize needs lo < hi with finite lo");
  if (iv.lo < kernel.domain.lo || iv.hi > kernel.domain.hi)
    throw Error(ErrorKind::out_of_domain, "linop", "interval outside the domain of " + kernel.tag());
  double hi = iv.hi;
  if (!std::isfinite(hi)) {
    double L = truncation_length(kernel);
    hi = iv.lo + L;
    QuadRule tail = gauss_legendre(40, hi, hi + 20);
    double t = 0;
    for (std::size_t i = 0; i < tail.size(); ++i)
      t += tail.weights[i] * std::fabs(kernel_eval(kernel, tail.nodes[i], tail.nodes[i]));
    if (t > 1e-12) {
      std::ostringstream os;
      os << "trace tail beyond L=" << L << " is " << t << " for " << kernel.tag();
      throw Error(ErrorKind::truncation, "linop", os.str());
    }
  }
  bool graded = std::holds_alternative<family::BesselHard>(kernel.family) && iv.lo == 0.0;
  QuadRule rule = graded ? graded_gauss_legendre(n, iv.lo, hi) : gauss_legendre(n, iv.lo, hi);
  return discretize(kernel, rule);
}

Spectrum sym_eigen(const DiscretizedOp& op) {
  EigenResult r = jacobi_eigen(op.matrix);
  Spectrum s;
  s.eigenvalues = std::move(r.values);
  s.eigenvectors = std::move(r.vectors);
  s.rule_size = op.rule.size();
  s.kernel_tag = op.kernel_tag;
  return s;
}

double fredholm_det(const std::vector<double>& eigenvalues, double z) {
  double d = 1;
  for (double l : eigenvalues) d *= 1 - z * l;
  return d;
}

double fredholm_det(const DiscretizedOp& op, double z) {
  if (z == 0.0) return 1.0;
  return fredholm_det(symmetric_eigenvalues(op.matrix), z);
}

GapDistribution gap_probs(const std::vector<double>& eigenvalues, int kmax, Interval interval) {
  if (kmax < 0) throw Error(ErrorKind::invalid_argument, "linop", "kmax must be >= 0");
  double prod = 1;
  std::vector<double> e(kmax + 1, 0.0);
  e[0] = 1;
  std::size_t seen = 0;
  for (double l : eigenvalues) {
    if (l >= 1 - 1e-8) {
      std::ostringstream os;
      os.precision(17);
      os << "eigenvalue " << l << " too close to 1";
      throw Error(ErrorKind::near_singular, "linop", os.str());
    }
    prod *= 1 - l;
    double mu = l / (1 - l);
    ++seen;
    for (std::size_t k = std::min<std::size_t>(kmax, seen); k >= 1; --k) e[k] += mu * e[k - 1];
  }
  GapDistribution g;
  g.interval = interval;
  g.probs.resize(kmax + 1);
  for (int k = 0; k <= kmax; ++k) g.probs[k] = prod * e[k];
  return g;
}

GapDistribution gap_probs(const DiscretizedOp& op, int kmax) {
  return gap_probs(symmetric_eigenvalues(op.matrix), kmax, {op.rule.lo, op.rule.hi});
}

double nystrom_interpolate(const KernelSpec& kernel, const DiscretizedOp& op, const Spectrum& sp, int k, double x) {
  double lam = sp.eigenvalues.at(k);
  if (lam == 0.0) throw Error(ErrorKind::near_singular, "linop", "cannot interpolate a null eigenvector");
  double s = 0;
  for (std::size_t j = 0; j < op.rule.size(); ++j)
    s += kernel_eval(kernel, x, op.rule.nodes[j]) * std::sqrt(op.rule.weights[j]) * sp.eigenvectors(j, k);
  return s / lam;
}

}  // namespace rmedge
