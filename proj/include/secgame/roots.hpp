#pragma once

#include <stdexcept>

namespace secgame {

// Root of a strictly decreasing continuous function on [lo, hi], located by
// bisection to absolute tolerance `tol` in the argument. The caller must
// have established f(lo) >= 0 >= f(hi); corner handling happens before this
// is reached.
template <class F>
double bisect_decreasing(F&& f, double lo, double hi, double tol = 1e-10,
                         int max_iterations = 200) {
  if (!(lo <= hi)) {
    throw std::invalid_argument("bisect_decreasing: empty interval");
  }
  for (int i = 0; i < max_iterations && (hi - lo) > tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace secgame
