#pragma once

#include <functional>
#include <span>

namespace joint_effect {

struct Integral {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
};

/// Adaptive 31-point Gauss-Kronrod on [a, b]. `tol` is relative to the L1 norm
/// of the integrand.
Integral integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-10);

/// Integral over [a, b] split at every breakpoint strictly inside (a, b).
/// Breakpoints may be unsorted and contain duplicates.
Integral integrate_piecewise(const std::function<double(double)>& f, double a, double b,
                             std::span<const double> breakpoints, double tol = 1e-10);

}  // namespace joint_effect
