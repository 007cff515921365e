#pragma once

#include <string>
#include <vector>

#include "rmedge/kernels.hpp"
#include "rmedge/matrix.hpp"
#include "rmedge/specfun.hpp"

namespace rmedge {

// M_ij = sqrt(w_i) K(x_i, x_j) sqrt(w_j)
struct DiscretizedOp {
  QuadRule rule;
  Matrix matrix;
  std::string kernel_tag;
};

struct Spectrum {
  std::vector<double> eigenvalues;  // descending
  std::size_t rule_size = 0;
  std::string kernel_tag;
  Matrix eigenvectors;  // column k pairs with eigenvalues[k]
};

struct GapDistribution {
  std::vector<double> probs;  // E(0..kmax)
  double z_reference = 1.0;
  Interval interval;
};

// Gauss-Legendre on the interval; an infinite upper end is truncated to
// lo + truncation_length(kernel) after checking the trace tail. The hard-edge
// Bessel kernel gets a graded rule when the interval starts at 0.
DiscretizedOp discretize(const KernelSpec& kernel, Interval interval, int n);
DiscretizedOp discretize(const KernelSpec& kernel, const QuadRule& rule);

Spectrum sym_eigen(const DiscretizedOp& op);

double fredholm_det(const DiscretizedOp& op, double z);
double fredholm_det(const std::vector<double>& eigenvalues, double z);

GapDistribution gap_probs(const DiscretizedOp& op, int kmax);
GapDistribution gap_probs(const std::vector<double>& eigenvalues, int kmax, Interval interval = {});

// Nystrom interpolation of an eigenvector: f(x) = (1/lambda) sum_j K(x, x_j) w_j f_j,
// with f_j = v_j / sqrt(w_j).
double nystrom_interpolate(const KernelSpec& kernel, const DiscretizedOp& op, const Spectrum& sp, int k, double x);

}  // namespace rmedge
