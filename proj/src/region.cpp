#include "joint_effect/region.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "joint_effect/errors.hpp"

namespace joint_effect {

namespace {

// Witnesses are built in terms of tau = integral of G dF = P(Y < X) = 1 - theta.
// The triangle is symmetric, so (tau, i2) lies in A iff (theta, i2) does.

// Integral of clamp((t - a) / (b - a), 0, 1) from -inf to t.
double uniform_cdf_antiderivative(double a, double b, double t) {
  if (t <= a) return 0.0;
  if (t >= b) return 0.5 * (b - a) + (t - b);
  return (t - a) * (t - a) / (2.0 * (b - a));
}

bool in_closed(double v, double lo, double hi) {
  constexpr double slack = 1e-12;
  return v >= lo - slack && v <= hi + slack;
}

// a in [0, 1/2], b in [1/2, 1]: closed-form inverse, either root.
bool try_central(double tau, double i2, UniformPair& out) {
  const double disc = 4.0 * tau * (1.0 - tau) + i2 * (i2 - 2.0);
  if (disc < 0.0) return false;
  const double root = std::sqrt(disc);
  for (double sign : {-1.0, 1.0}) {
    const double a = (-2.0 * tau + i2 + 1.0 + sign * root) / 2.0;
    const double b = 2.0 - a - 2.0 * tau;
    if (!(in_closed(a, 0.0, 0.5) && in_closed(b, 0.5, 1.0) && b - a > 1e-12)) continue;
    // Squaring admits the degenerate width-zero root; keep only exact solutions.
    const double s = 0.5 - a;
    if (std::abs(2.0 * tau - 2.0 * s * s / (b - a) - i2) > 1e-9) continue;
    out = {a, b};
    return true;
  }
  return false;
}

// a in [0, 1/2], b > 1: i2 / tau = (1 - 2a^2) / (1 - a)^2 in [1, 2].
UniformPair left_wedge(double tau, double i2) {
  const double r = std::clamp(i2 / tau, 1.0, 2.0);
  const double a = (r - std::sqrt(2.0 - r)) / (r + 2.0);
  const double width = 0.5 * (1.0 - a) * (1.0 - a) / tau;
  return {a, a + width};
}

}  // namespace

double region_ceiling(double theta) {
  if (theta < 0.0 || theta > 1.0) return 0.0;
  return std::min(2.0 * theta, 2.0 - 2.0 * theta);
}

bool in_region(double theta, double i2, double tol) {
  if (std::isnan(theta) || std::isnan(i2)) return false;
  if (theta < -tol || theta > 1.0 + tol) return false;
  const double t = std::clamp(theta, 0.0, 1.0);
  return i2 >= -tol && i2 <= std::min(2.0 * t, 2.0 - 2.0 * t) + tol;
}

ClippedRect clip_to_region(const Rect& r) {
  if (!(r.theta_lo <= r.theta_hi) || !(r.i2_lo <= r.i2_hi)) {
    throw DomainError("clip_to_region: rectangle bounds are not ordered");
  }
  // theta range of the slab i2 in [i2_lo, i2_hi] inside A: the ceiling must
  // reach max(i2_lo, 0), i.e. theta in [i/2, 1 - i/2].
  const double floor_i2 = std::max(r.i2_lo, 0.0);
  if (floor_i2 > 1.0) throw EmptyRegionError("clip_to_region: rectangle lies above the apex of A");
  const double t_lo = std::max({r.theta_lo, 0.0, floor_i2 / 2.0});
  const double t_hi = std::min({r.theta_hi, 1.0, 1.0 - floor_i2 / 2.0});
  if (t_lo > t_hi) throw EmptyRegionError("clip_to_region: rectangle does not meet region A");
  // Highest attainable i2 over [t_lo, t_hi] is the ceiling's max on that interval.
  const double peak = (t_lo <= 0.5 && t_hi >= 0.5) ? 1.0
                                                    : std::max(region_ceiling(t_lo), region_ceiling(t_hi));
  const double i_lo = floor_i2;
  const double i_hi = std::min(r.i2_hi, peak);
  if (i_lo > i_hi) throw EmptyRegionError("clip_to_region: rectangle does not meet region A");

  ClippedRect out{{t_lo, t_hi, i_lo, i_hi}, false};
  out.clipped = t_lo != r.theta_lo || t_hi != r.theta_hi || i_lo != r.i2_lo || i_hi != r.i2_hi;
  return out;
}

Subarea subarea_of(double theta, double i2) {
  const double tau = 1.0 - theta;
  UniformPair unused{};
  if (try_central(tau, i2, unused)) return Subarea::A4;
  if (tau <= 0.5 && i2 >= tau) return Subarea::A2;
  if (tau >= 0.5 && i2 >= 1.0 - tau) return Subarea::A3;
  return Subarea::A1;
}

UniformPair uniform_pair_for(double theta, double i2) {
  if (!(theta > 0.0 && theta < 1.0 && i2 > 0.0 && i2 < region_ceiling(theta))) {
    throw DomainError("uniform_pair_for: (" + std::to_string(theta) + ", " + std::to_string(i2) +
                      ") is not an interior point of A");
  }
  const double tau = 1.0 - theta;
  UniformPair p{};
  switch (subarea_of(theta, i2)) {
    case Subarea::A4:
      try_central(tau, i2, p);
      return p;
    case Subarea::A2:
      return left_wedge(tau, i2);
    case Subarea::A3: {
      // Mirror image x -> 1 - x of the A2 construction.
      const UniformPair m = left_wedge(1.0 - tau, i2);
      return {1.0 - m.b, 1.0 - m.a};
    }
    case Subarea::A1: {
      // a < 0, b > 1: i2 = 1/(2(b - a)), tau = (1/2 - a)/(b - a).
      const double width = 0.5 / i2;
      const double a = 0.5 - tau * width;
      return {a, a + width};
    }
  }
  return p;
}

ThetaI2Exact uniform_pair_functionals(const UniformPair& p) {
  if (!(p.a < p.b)) throw DomainError("uniform_pair_functionals: need a < b");
  const auto h = [&](double t) { return uniform_cdf_antiderivative(p.a, p.b, t); };
  const double lower = h(0.5) - h(0.0);
  const double upper = h(1.0) - h(0.5);
  return {1.0 - (lower + upper), 2.0 * (upper - lower)};
}

}  // namespace joint_effect
