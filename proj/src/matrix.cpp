#include "rmedge/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "rmedge/error.hpp"

namespace rmedge {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::transpose() const {
  Matrix t(c_, r_);
  for (std::size_t i = 0; i < r_; ++i)
    for (std::size_t j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double Matrix::frobenius() const {
  double s = 0;
  for (double v : a_) s += v * v;
  return std::sqrt(s);
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw Error(ErrorKind::invalid_argument, "matrix", "dimension mismatch in product");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double* ci = c.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      double aik = a(i, k);
      if (aik == 0.0) continue;
      const double* bk = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) ci[j] += aik * bk[j];
    }
  }
  return c;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  Matrix c = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) += b(i, j);
  return c;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  Matrix c = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) -= b(i, j);
  return c;
}

Matrix operator*(double s, const Matrix& a) {
  Matrix c = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) *= s;
  return c;
}

std::vector<double> operator*(const Matrix& a, const std::vector<double>& x) {
  std::vector<double> y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double* ai = a.row(i);
    double s = 0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += ai[j] * x[j];
    y[i] = s;
  }
  return y;
}

namespace {

// In-place LU with partial pivoting; returns sign of the permutation, 0 if singular.
int lu_factor(Matrix& a, std::vector<std::size_t>& piv) {
  std::size_t n = a.rows();
  piv.resize(n);
  std::iota(piv.begin(), piv.end(), 0);
  int sign = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::fabs(a(k, k));
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::fabs(a(i, k)) > best) best = std::fabs(a(i, k)), p = i;
    if (best == 0.0) return 0;
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      std::swap(piv[k], piv[p]);
      sign = -sign;
    }
    double d = a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      double f = a(i, k) / d;
      a(i, k) = f;
      if (f == 0.0) continue;
      double* ai = a.row(i);
      const double* ak = a.row(k);
      for (std::size_t j = k + 1; j < n; ++j) ai[j] -= f * ak[j];
    }
  }
  return sign;
}

}  // namespace

double lu_det(Matrix a) {
  if (a.rows() != a.cols()) throw Error(ErrorKind::invalid_argument, "matrix", "determinant of non-square matrix");
  std::vector<std::size_t> piv;
  int sign = lu_factor(a, piv);
  if (sign == 0) return 0.0;
  double d = sign;
  for (std::size_t i = 0; i < a.rows(); ++i) d *= a(i, i);
  return d;
}

std::vector<double> lu_solve(Matrix a, std::vector<double> b) {
  std::size_t n = a.rows();
  if (a.cols() != n || b.size() != n) throw Error(ErrorKind::invalid_argument, "matrix", "lu_solve dimension mismatch");
  std::vector<std::size_t> piv;
  if (lu_factor(a, piv) == 0) throw Error(ErrorKind::near_singular, "matrix", "singular system");
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[piv[i]];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) x[i] -= a(i, j) * x[j];
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = i + 1; j < n; ++j) x[i] -= a(i, j) * x[j];
    x[i] /= a(i, i);
  }
  return x;
}

EigenResult jacobi_eigen(Matrix a, double tol) {
  std::size_t n = a.rows();
  if (a.cols() != n) throw Error(ErrorKind::invalid_argument, "matrix", "eigen of non-square matrix");
  for (double v : a.data())
    if (!std::isfinite(v)) throw Error(ErrorKind::invalid_argument, "matrix", "non-finite matrix entry");
  Matrix v = Matrix::identity(n);
  double norm = a.frobenius();
  auto off = [&] {
    double s = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
  };
  for (int sweep = 0; sweep < 100 && norm > 0; ++sweep) {
    if (off() <= tol * norm) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double apq = a(p, q);
        if (std::fabs(apq) < 1e-300) continue;
        double theta = (a(q, q) - a(p, p)) / (2 * apq);
        double t = (theta >= 0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1));
        double c = 1 / std::sqrt(t * t + 1), s = t * c;
        double app = a(p, p) - t * apq, aqq = a(q, q) + t * apq;
        for (std::size_t k = 0; k < n; ++k) {
          double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, p) = app;
        a(q, q) = aqq;
        a(p, q) = a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });
  EigenResult r;
  r.values.resize(n);
  r.vectors = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    r.values[k] = a(order[k], order[k]);
    for (std::size_t i = 0; i < n; ++i) r.vectors(i, k) = v(i, order[k]);
  }
  return r;
}

std::vector<double> symmetric_eigenvalues(Matrix a) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw Error(ErrorKind::invalid_argument, "matrix", "eigen of non-square matrix");
  if (n == 0) return {};
  std::vector<double> d(n), e(n, 0.0);
  // Householder reduction to tridiagonal form (lower part, no vectors)
  for (std::size_t i = n - 1; i > 0; --i) {
    std::size_t l = i - 1;
    double h = 0, scale = 0;
    if (l > 0) {
      for (std::size_t k = 0; k <= l; ++k) scale += std::fabs(a(i, k));
      if (scale == 0.0) {
        e[i] = a(i, l);
      } else {
        double* ai = a.row(i);
        for (std::size_t k = 0; k <= l; ++k) {
          ai[k] /= scale;
          h += ai[k] * ai[k];
        }
        double f = ai[l];
        double g = f >= 0 ? -std::sqrt(h) : std::sqrt(h);
        e[i] = scale * g;
        h -= f * g;
        ai[l] = f - g;
        f = 0;
        for (std::size_t j = 0; j <= l; ++j) {
          g = 0;
          const double* aj = a.row(j);
          for (std::size_t k = 0; k <= j; ++k) g += aj[k] * ai[k];
          for (std::size_t k = j + 1; k <= l; ++k) g += a(k, j) * ai[k];
          e[j] = g / h;
          f += e[j] * ai[j];
        }
        double hh = f / (h + h);
        for (std::size_t j = 0; j <= l; ++j) {
          f = ai[j];
          e[j] = g = e[j] - hh * f;
          double* aj = a.row(j);
          for (std::size_t k = 0; k <= j; ++k) aj[k] -= (f * e[k] + g * ai[k]);
        }
      }
    } else {
      e[i] = a(i, l);
    }
    d[i] = h;
  }
  for (std::size_t i = 0; i < n; ++i) d[i] = a(i, i);
  // implicit QL with Wilkinson-type shifts
  for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0;
  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t m;
    do {
      for (m = l; m + 1 < n; ++m) {
        double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
        if (std::fabs(e[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
      }
      if (m != l) {
        if (++iter > 60) throw Error(ErrorKind::divergence, "matrix", "QL iteration did not converge");
        double g = (d[l + 1] - d[l]) / (2 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + (g >= 0 ? std::fabs(r) : -std::fabs(r)));
        double s = 1, c = 1, p = 0;
        std::size_t i;
        bool early = false;
        for (i = m; i-- > l;) {
          double f = s * e[i], b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0;
            early = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
        }
        if (early) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0;
      }
    } while (m != l);
  }
  std::sort(d.begin(), d.end());
  return d;
}

}  // namespace rmedge
