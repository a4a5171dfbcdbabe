#pragma once

// Small one-dimensional numerical kernels shared by the analysis modules.

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>

namespace gsirs::numerics {

struct LimitEstimate {
  double value = 0.0;            // two-level Richardson extrapolant
  double change = 0.0;           // |r2 - r1| between first-level extrapolants
  bool converged = false;
  std::array<double, 3> samples{};  // g(eps), g(eps/2), g(eps/4)
};

/// Relative threshold on the change between Richardson levels.
inline constexpr double kLimitRelTol = 1e-6;

/// Estimates lim_{x->0+} g(x) from g at eps, eps/2, eps/4.
///
/// Assumes g(x) = L + c1 x + c2 x^2 + ...; the first level removes the linear
/// term, the second the quadratic one. Convergence requires the two
/// first-level extrapolants to agree to kLimitRelTol.
LimitEstimate limit_at_zero(const std::function<double(double)>& g, double eps);

/// Central difference with step h; falls back to a second-order forward
/// stencil when x - h would leave [lower, inf).
double derivative(const std::function<double(double)>& g, double x, double h,
                  double lower = -INFINITY);

/// Bisection on a bracket [lo, hi] with g(lo), g(hi) of opposite sign (or one
/// of them zero). Stops when hi - lo < tol.
double bisect(const std::function<double(double)>& g, double lo, double hi, double tol,
              int max_iter = 400);

struct Minimum {
  double x = 0.0;
  double value = 0.0;
  int evaluations = 0;
};

/// Golden-section search for a unimodal function on [lo, hi].
Minimum golden_section_minimize(const std::function<double(double)>& g, double lo,
                                double hi, double tol, int max_iter = 200);

/// n evenly spaced points from lo to hi inclusive (n >= 2).
inline double grid_point(double lo, double hi, std::size_t i, std::size_t n) {
  if (i + 1 == n) return hi;
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

}  // namespace gsirs::numerics
