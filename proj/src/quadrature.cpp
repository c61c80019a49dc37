#include "joint_effect/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace joint_effect {

Integral integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  if (a == b) return {};
  // Tanh-sinh copes with derivative blow-up at the ends (quantile transforms
  // of heavy or light tails); Gauss-Kronrod is kept for when it does better.
  thread_local boost::math::quadrature::tanh_sinh<double> ts;
  double ts_error = 0.0;
  double l1 = 0.0;
  double ts_value = 0.0;
  try {
    ts_value = ts.integrate(f, a, b, tol, &ts_error, &l1);
  } catch (const std::exception&) {
    ts_error = std::numeric_limits<double>::infinity();
  }
  // Relative accuracy is unreachable for near-zero integrals; the floor is
  // absolute.
  const double floor = 1e-14 * (b - a);
  if (std::isfinite(ts_value) && ts_error <= std::max(100.0 * tol * l1, floor)) return {ts_value, ts_error};
  double gk_error = 0.0;
  const double gk_value =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 12, tol, &gk_error);
  if (!std::isfinite(ts_value) || gk_error < ts_error) return {gk_value, gk_error};
  return {ts_value, ts_error};
}

Integral integrate_piecewise(const std::function<double(double)>& f, double a, double b,
                             std::span<const double> breakpoints, double tol) {
  std::vector<double> cuts{a, b};
  for (double c : breakpoints) {
    if (c > a && c < b) cuts.push_back(c);
  }
  std::sort(cuts.begin(), cuts.end());
  // Slivers of rounding width defeat the error estimates; merge them.
  const double slack = std::isfinite(b - a) ? 1e-12 * (b - a) : 0.0;
  std::vector<double> kept{cuts.front()};
  for (std::size_t i = 1; i + 1 < cuts.size(); ++i) {
    if (cuts[i] - kept.back() > slack && b - cuts[i] > slack) kept.push_back(cuts[i]);
  }
  kept.push_back(b);
  cuts = std::move(kept);
  Integral total;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const Integral piece = integrate(f, cuts[i], cuts[i + 1], tol);
    total.value += piece.value;
    total.error += piece.error;
  }
  return total;
}

}  // namespace joint_effect
