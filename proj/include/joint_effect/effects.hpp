#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "joint_effect/ranks.hpp"

namespace joint_effect {

/// Point estimates of the relative effect and the overlap indices.
///
/// theta is P(X < Y) + P(X = Y)/2. i2 is the overlap index of G (the Y
/// distribution) with respect to F, i1 the same with the roles swapped. The
/// adjusted functionals are present only when the joint-median split is
/// non-degenerate.
struct EffectEstimates {
  double theta = 0.5;
  double i1 = 0.5;
  double i2 = 0.5;
  std::optional<double> theta_adj;
  std::optional<double> i2_adj;
  std::size_t n = 0;
  std::size_t m = 0;
};

/// Relative effect via the rank-mean form (mean Y midrank - (m+1)/2) / n.
double theta_hat(std::span<const double> x, std::span<const double> y);

/// Overlap index I2 from pooled midranks.
///
/// x is sorted and split after its K = floor((n+1)/2) smallest values; with
/// P_i the placement of x_(i) among y (pooled midrank minus within-x midrank,
/// i.e. #{y < x_(i)} + #{y = x_(i)}/2),
///   I2 = 2/(m n) * (sum_{i > K} P_i - sum_{i <= K} P_i).
/// For even n without ties this is 2/(mn)(R^{X>} - R^{X<}) - n/(2m).
double i2_hat(std::span<const double> x, std::span<const double> y);

/// I1(x, y) = I2(y, x).
double i1_hat(std::span<const double> x, std::span<const double> y);

struct AdjustedEffects {
  double theta_adj;
  double i2_adj;
  double p_below;  // relative effect between x_below and y_below
  double p_above;  // relative effect between x_above and y_above
};

/// theta_adj = (1 + p1 + p2) / 4, i2_adj = (1 + p2 - p1) / 2.
AdjustedEffects adjusted_effects(const SplitSamples& s);

/// All estimates; the adjusted ones are left empty if the split is degenerate.
EffectEstimates estimate_effects(std::span<const double> x, std::span<const double> y);

struct ThetaI2 {
  double theta;
  double i2;
};

/// theta and I2 for samples that are already sorted ascending, in O(n + m).
/// Used on the bootstrap hot path; agrees exactly with theta_hat/i2_hat.
ThetaI2 theta_i2_sorted(std::span<const double> x_sorted, std::span<const double> y_sorted);

}  // namespace joint_effect
