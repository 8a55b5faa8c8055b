#pragma once

#include <functional>

namespace gsense {

struct ScalarMinimum {
  double x;
  double value;
  int evaluations;
};

/// Golden-section minimization of a unimodal function on [lo, hi], stopping
/// once the bracket is narrower than `tol`. Both endpoints are evaluated as
/// well, so a minimum sitting on the boundary is returned exactly.
ScalarMinimum golden_section_minimize(const std::function<double(double)>& f, double lo,
                                      double hi, double tol = 1e-10);

/// Root of a monotone function on [lo, hi] (sign change required) by
/// bisection to relative tolerance `rel_tol`. Throws NumericFailure when the
/// bracket has no sign change or the iteration cap is hit.
double bisect_root(const std::function<double(double)>& f, double lo, double hi,
                   double rel_tol = 1e-15, int max_iter = 200);

}  // namespace gsense
