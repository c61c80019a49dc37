#include "joint_effect/effects.hpp"

#include <algorithm>
#include <vector>

#include "joint_effect/errors.hpp"

namespace joint_effect {

double theta_hat(std::span<const double> x, std::span<const double> y) {
  const RankedPool pool = pool_and_rank(x, y);
  const double n = static_cast<double>(pool.n);
  const double m = static_cast<double>(pool.m);
  // (mean Y rank - (m+1)/2) / n, evaluated as one division of exact values.
  return (pool.rank_sum(Group::Y) - m * (m + 1.0) / 2.0) / (n * m);
}

double i2_hat(std::span<const double> x, std::span<const double> y) {
  if (x.size() < 2) throw DomainError("i2_hat: need n >= 2");
  const RankedPool pool = pool_and_rank(x, y);
  // X entries appear in the pool in ascending order (stable sort).
  std::vector<double> xs;
  std::vector<double> pooled_rank;
  xs.reserve(pool.n);
  pooled_rank.reserve(pool.n);
  for (std::size_t i = 0; i < pool.values.size(); ++i) {
    if (pool.group[i] == Group::X) {
      xs.push_back(pool.values[i]);
      pooled_rank.push_back(pool.midrank[i]);
    }
  }
  const std::vector<double> within = midranks(xs);
  const std::size_t n = pool.n;
  const std::size_t split = (n + 1) / 2;
  double lower = 0.0;
  double upper = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double placement = pooled_rank[i] - within[i];
    (i < split ? lower : upper) += placement;
  }
  return 2.0 * (upper - lower) / (static_cast<double>(n) * static_cast<double>(pool.m));
}

double i1_hat(std::span<const double> x, std::span<const double> y) { return i2_hat(y, x); }

AdjustedEffects adjusted_effects(const SplitSamples& s) {
  if (s.x_below.size() < 2 || s.x_above.size() < 2 || s.y_below.size() < 2 ||
      s.y_above.size() < 2) {
    throw DegenerateSplitError("adjusted_effects: degenerate joint-median split");
  }
  const double p1 = theta_hat(s.x_below, s.y_below);
  const double p2 = theta_hat(s.x_above, s.y_above);
  return {0.25 * (1.0 + p1 + p2), 0.5 * (1.0 + p2 - p1), p1, p2};
}

EffectEstimates estimate_effects(std::span<const double> x, std::span<const double> y) {
  EffectEstimates e;
  e.n = x.size();
  e.m = y.size();
  e.theta = theta_hat(x, y);
  e.i2 = i2_hat(x, y);
  e.i1 = i1_hat(x, y);
  if (x.size() >= 4 && y.size() >= 4) {
    try {
      const AdjustedEffects adj = adjusted_effects(split_at_joint_median(x, y));
      e.theta_adj = adj.theta_adj;
      e.i2_adj = adj.i2_adj;
    } catch (const DegenerateSplitError&) {
    }
  }
  return e;
}

ThetaI2 theta_i2_sorted(std::span<const double> xs, std::span<const double> ys) {
  const std::size_t n = xs.size();
  const std::size_t m = ys.size();
  if (n < 2 || m < 1) throw DomainError("theta_i2_sorted: need n >= 2, m >= 1");
  const std::size_t split = (n + 1) / 2;
  // Twice the placement (#less * 2 + #equal) keeps the sums in exact integers.
  long long lower2 = 0;
  long long upper2 = 0;
  std::size_t lt = 0;  // # y < current x
  std::size_t le = 0;  // # y <= current x
  for (std::size_t i = 0; i < n; ++i) {
    const double v = xs[i];
    while (lt < m && ys[lt] < v) ++lt;
    if (le < lt) le = lt;
    while (le < m && ys[le] <= v) ++le;
    const auto twice = static_cast<long long>(lt + le);
    (i < split ? lower2 : upper2) += twice;
  }
  const double nm = static_cast<double>(n) * static_cast<double>(m);
  const double sum2 = static_cast<double>(lower2 + upper2);
  return {(2.0 * nm - sum2) / (2.0 * nm), static_cast<double>(upper2 - lower2) / nm};
}

}  // namespace joint_effect
