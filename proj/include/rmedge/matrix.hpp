#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace rmedge {

using Mat2 = std::array<double, 4>;  // row-major 2x2 [[m00, m01], [m10, m11]]

// Dense row-major matrix; just enough for Nystrom work.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0) : r_(rows), c_(cols), a_(rows * cols, fill) {}

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return r_; }
  std::size_t cols() const { return c_; }
  double& operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }
  double* row(std::size_t i) { return a_.data() + i * c_; }
  const double* row(std::size_t i) const { return a_.data() + i * c_; }
  const std::vector<double>& data() const { return a_; }

  Matrix transpose() const;
  double frobenius() const;

 private:
  std::size_t r_ = 0, c_ = 0;
  std::vector<double> a_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& a);
std::vector<double> operator*(const Matrix& a, const std::vector<double>& x);

// Determinant by LU with partial pivoting.
double lu_det(Matrix a);

// Solves a x = b (LU with partial pivoting); throws near-singular on a zero pivot.
std::vector<double> lu_solve(Matrix a, std::vector<double> b);

struct EigenResult {
  std::vector<double> values;  // descending
  Matrix vectors;              // column k pairs with values[k]
};

// Cyclic Jacobi; stops when the off-diagonal Frobenius norm < tol * ||A||_F.
EigenResult jacobi_eigen(Matrix a, double tol = 1e-13);

// Eigenvalues only: Householder tridiagonalization + implicit QL. Ascending.
std::vector<double> symmetric_eigenvalues(Matrix a);

}  // namespace rmedge
