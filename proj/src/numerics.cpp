#include "gsirs/numerics.hpp"

#include <algorithm>
#include <cmath>

#include "gsirs/errors.hpp"

namespace gsirs::numerics {

LimitEstimate limit_at_zero(const std::function<double(double)>& g, double eps) {
  LimitEstimate est;
  est.samples = {g(eps), g(eps / 2.0), g(eps / 4.0)};
  const auto [v0, v1, v2] = est.samples;
  const double r1 = 2.0 * v1 - v0;
  const double r2 = 2.0 * v2 - v1;
  est.value = (4.0 * r2 - r1) / 3.0;
  est.change = std::abs(r2 - r1);
  const double scale = std::max(std::abs(r1), std::abs(r2));
  est.converged = std::isfinite(est.value) && est.change <= kLimitRelTol * scale;
  if (scale == 0.0) est.converged = true;
  return est;
}

double derivative(const std::function<double(double)>& g, double x, double h, double lower) {
  if (x - h >= lower) return (g(x + h) - g(x - h)) / (2.0 * h);
  return (-3.0 * g(x) + 4.0 * g(x + h) - g(x + 2.0 * h)) / (2.0 * h);
}

double bisect(const std::function<double(double)>& g, double lo, double hi, double tol,
              int max_iter) {
  double g_lo = g(lo);
  if (g_lo == 0.0) return lo;
  const double g_hi = g(hi);
  if (g_hi == 0.0) return hi;
  if ((g_lo > 0.0) == (g_hi > 0.0)) {
    throw InvalidArgument("bisect: interval does not bracket a sign change");
  }
  for (int it = 0; it < max_iter && hi - lo >= tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double g_mid = g(mid);
    if (g_mid == 0.0) return mid;
    if ((g_mid > 0.0) == (g_lo > 0.0)) {
      lo = mid;
      g_lo = g_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

Minimum golden_section_minimize(const std::function<double(double)>& g, double lo, double hi,
                                double tol, int max_iter) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double gc = g(c);
  double gd = g(d);
  int evals = 2;
  for (int it = 0; it < max_iter && hi - lo > tol; ++it) {
    if (gc <= gd) {
      hi = d;
      d = c;
      gd = gc;
      c = hi - inv_phi * (hi - lo);
      gc = g(c);
    } else {
      lo = c;
      c = d;
      gc = gd;
      d = lo + inv_phi * (hi - lo);
      gd = g(d);
    }
    ++evals;
  }
  if (gc <= gd) return {c, gc, evals};
  return {d, gd, evals};
}

}  // namespace gsirs::numerics
