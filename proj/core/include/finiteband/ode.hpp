#pragma once

#include <functional>
#include <vector>

#include "finiteband/linalg.hpp"

namespace finiteband {

struct OdeOptions {
  double atol = 1e-11;
  double rtol = 1e-11;
  double initial_step = 0.0;  // 0 picks |x1 - x0| / 100
  long max_steps = 2000000;
};

using OdeRhs = std::function<CMatrix(double, const CMatrix&)>;

struct OdeStats {
  long accepted = 0;
  long rejected = 0;
  double last_step = 0.0;  // accepted step length proposed for continuing
};

// Dormand-Prince 5(4) with classic step control; integrates forward or backward.
CMatrix dopri5(const OdeRhs& f, CMatrix y, double x0, double x1, const OdeOptions& opt = {}, OdeStats* stats = nullptr);

// States at each checkpoint, integrating piecewise from x0 through xs in order.
std::vector<CMatrix> dopri5_dense(const OdeRhs& f, const CMatrix& y0, double x0, const std::vector<double>& xs,
                                  const OdeOptions& opt = {});

}  // namespace finiteband
