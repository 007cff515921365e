#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace rmedge {

using OdeRhs = std::function<void(double x, const std::vector<double>& y, std::vector<double>& dy)>;

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double h0 = 0.0;      // 0 picks a small start step
  double max_abs = 1e12;  // state magnitude treated as blow-up
  long max_steps = 2000000;
};

// Dormand-Prince 5(4) with a persistent step size, so repeated advance() calls
// along an output grid do not restart the controller.
class DormandPrince {
 public:
  DormandPrince(OdeRhs f, OdeOptions opt = {});

  // Advances (x, y) to x_end exactly; direction taken from sign(x_end - x).
  // Throws a divergence error on blow-up or step-size collapse.
  void advance(double& x, std::vector<double>& y, double x_end);

  long steps() const { return steps_; }
  long rejected() const { return rejected_; }

 private:
  OdeRhs f_;
  OdeOptions opt_;
  double h_ = 0.0;
  long steps_ = 0, rejected_ = 0;
  std::vector<double> k_[7], tmp_, ynew_;
};

}  // namespace rmedge
