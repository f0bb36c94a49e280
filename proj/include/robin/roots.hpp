#pragma once

#include <cmath>
#include <optional>
#include <sstream>
#include <utility>

#include "robin/error.hpp"

namespace robin {

struct RootOptions {
  double bisection_width = 1e-8;  // absolute bracket width handed to Newton
  double tol = 1e-14;             // relative Newton step tolerance
  int max_iterations = 200;
  // When set (and inside the bracket) Newton starts here and the bisection
  // stage is skipped.
  std::optional<double> initial_guess;
};

/// Root of a continuous function with a sign change on [lo, hi]: bisection
/// down to `bisection_width`, then Newton steps that are rejected (bisected
/// instead) whenever they leave the current bracket. `fdf(x)` returns
/// {f(x), f'(x)}.
template <class FDF>
double bracketed_root(FDF&& fdf, double lo, double hi, const RootOptions& opt = {}) {
  auto [flo, dlo] = fdf(lo);
  auto [fhi, dhi] = fdf(hi);
  (void)dlo;
  (void)dhi;
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "no sign change on bracket [" << lo << ", " << hi << "] (f = " << flo << ", " << fhi << ")";
    throw RootFindError(msg.str());
  }
  const bool increasing = fhi > 0.0;
  const bool use_guess = opt.initial_guess && *opt.initial_guess > lo && *opt.initial_guess < hi;
  int iter = 0;
  while (!use_guess && hi - lo > opt.bisection_width) {
    if (++iter > opt.max_iterations) throw RootFindError("bisection did not converge");
    const double mid = 0.5 * (lo + hi);
    const double fm = fdf(mid).first;
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == increasing) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  double x = use_guess ? *opt.initial_guess : 0.5 * (lo + hi);
  for (int k = 0; k < opt.max_iterations; ++k) {
    const auto [f, df] = fdf(x);
    if (f == 0.0) return x;
    if ((f > 0.0) == increasing) {
      hi = x;
    } else {
      lo = x;
    }
    double next = (df != 0.0 && std::isfinite(df)) ? x - f / df : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - x);
    x = next;
    if (step <= opt.tol * std::max(1.0, std::abs(x)) || hi - lo <= opt.tol * std::max(1.0, std::abs(x))) return x;
  }
  throw RootFindError("Newton polish did not converge within the iteration cap");
}

}  // namespace robin
