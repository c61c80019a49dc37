#pragma once

namespace joint_effect {

/// The feasible set of (theta, I2) pairs is the triangle
///   A = {(t, i) : 0 <= t <= 1, 0 <= i <= min(2t, 2 - 2t)}.
/// It is symmetric about theta = 1/2 with apex (1/2, 1).
bool in_region(double theta, double i2, double tol = 0.0);

/// Upper edge of A at theta: min(2 theta, 2 - 2 theta), zero outside [0, 1].
double region_ceiling(double theta);

struct Rect {
  double theta_lo, theta_hi, i2_lo, i2_hi;
};

struct ClippedRect {
  Rect rect;
  bool clipped;
};

/// Bounding box of (rect intersected with A). `clipped` is set when any bound
/// moved. Throws EmptyRegionError if the rectangle misses A, DomainError if its
/// bounds are not ordered.
ClippedRect clip_to_region(const Rect& rect);

/// Witness pair F = U[0, 1], G = U[a, b].
struct UniformPair {
  double a;
  double b;
};

enum class Subarea { A1, A2, A3, A4 };

/// Which construction produces a witness for an interior point.
Subarea subarea_of(double theta, double i2);

/// (a, b) such that X ~ U[0,1], Y ~ U[a,b] has relative effect theta and
/// overlap index i2. Requires (theta, i2) strictly inside A; throws DomainError
/// otherwise.
UniformPair uniform_pair_for(double theta, double i2);

/// Closed-form (theta, I2) of X ~ U[0,1] vs Y ~ U[a,b], used as a cross-check
/// of the witness construction.
struct ThetaI2Exact {
  double theta;
  double i2;
};
ThetaI2Exact uniform_pair_functionals(const UniformPair& p);

}  // namespace joint_effect
