#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "joint_effect/distributions.hpp"
#include "joint_effect/effects.hpp"
#include "joint_effect/errors.hpp"
#include "joint_effect/region.hpp"
#include "joint_effect/rng.hpp"

using namespace joint_effect;

namespace {

double brute_theta(const std::vector<double>& x, const std::vector<double>& y) {
  double wins = 0;
  for (double a : x) {
    for (double b : y) wins += (a < b) + 0.5 * (a == b);
  }
  return wins / (static_cast<double>(x.size()) * static_cast<double>(y.size()));
}

// Plug-in I2: 2/n (sum of G_hat over the upper half of sorted x minus the
// lower half), split after floor((n+1)/2), G_hat the Y ECDF (ties 1/2).
double plugin_i2(std::vector<double> x, const std::vector<double>& y) {
  std::sort(x.begin(), x.end());
  const std::size_t K = (x.size() + 1) / 2;
  const auto G = [&](double v) {
    double c = 0;
    for (double b : y) c += (b < v) + 0.5 * (b == v);
    return c / static_cast<double>(y.size());
  };
  double lower = 0, upper = 0;
  for (std::size_t i = 0; i < x.size(); ++i) (i < K ? lower : upper) += G(x[i]);
  return 2.0 * (upper - lower) / static_cast<double>(x.size());
}

std::vector<double> draw_ints(RngStream& r, std::size_t n, std::uint64_t range) {
  std::vector<double> v(n);
  for (double& x : v) x = static_cast<double>(r.next_below(range));
  return v;
}

std::vector<double> draw_continuous(RngStream& r, std::size_t n) {
  std::vector<double> v(n);
  for (double& x : v) x = r.next_uniform() * 10.0 - 3.0;
  return v;
}

const std::vector<double> kClass1{7, 4, 4, 5, 4, 6, 6, 4, 3, 7};
const std::vector<double> kClass2{3, 6, 7, 9, 3, 2, 4, 8, 2, 6};

}  // namespace

TEST(ThetaHat, Examples) {
  EXPECT_EQ(theta_hat(kClass1, kClass1), 0.5);
  EXPECT_EQ(theta_hat(std::vector<double>{1, 2}, std::vector<double>{3, 4}), 1.0);
  EXPECT_EQ(theta_hat(kClass1, kClass2), brute_theta(kClass1, kClass2));
  EXPECT_DOUBLE_EQ(theta_hat(kClass1, kClass2), 0.47);
  EXPECT_THROW(theta_hat(std::vector<double>{}, kClass2), DomainError);
}

TEST(ThetaHat, EqualsBruteForceWithHeavyTies) {
  RngStream r(10);
  for (int rep = 0; rep < 1000; ++rep) {
    const auto x = draw_ints(r, 1 + r.next_below(50), 1 + r.next_below(8));
    const auto y = draw_ints(r, 1 + r.next_below(50), 1 + r.next_below(8));
    ASSERT_EQ(theta_hat(x, y), brute_theta(x, y));
    ASSERT_EQ(theta_hat(x, y) + theta_hat(y, x), 1.0);
  }
}

TEST(I2Hat, Examples) {
  EXPECT_DOUBLE_EQ(i2_hat(std::vector<double>{1, 2, 3, 4}, std::vector<double>{2.5, 2.6}), 1.0);
  EXPECT_DOUBLE_EQ(i2_hat(std::vector<double>{1, 2, 3, 4}, std::vector<double>{10, 11}), 0.0);
  EXPECT_NEAR(i2_hat(kClass1, kClass2), 0.22, 1e-15);
  EXPECT_THROW(i2_hat(std::vector<double>{1}, kClass2), DomainError);
}

TEST(I2Hat, EducationRankSums) {
  // R^{X<} and R^{X>}: pooled midranks of the lower and upper five x values.
  const RankedPool p = pool_and_rank(kClass1, kClass2);
  double lower = 0, upper = 0;
  int seen = 0;
  for (std::size_t i = 0; i < p.values.size(); ++i) {
    if (p.group[i] != Group::X) continue;
    (seen++ < 5 ? lower : upper) += p.midrank[i];
  }
  EXPECT_EQ(lower, 36.0);
  EXPECT_EQ(upper, 72.0);
  EXPECT_NEAR(2.0 / 100.0 * (upper - lower) - 0.5, i2_hat(kClass1, kClass2), 1e-15);
}

TEST(I2Hat, EqualsPluginOnTieFreeSamples) {
  RngStream r(11);
  for (int rep = 0; rep < 1000; ++rep) {
    const auto x = draw_continuous(r, 2 + r.next_below(49));
    const auto y = draw_continuous(r, 1 + r.next_below(50));
    ASSERT_NEAR(i2_hat(x, y), plugin_i2(x, y), 1e-13) << x.size() << ' ' << y.size();
  }
}

TEST(I2Hat, EqualsPluginWithTies) {
  RngStream r(12);
  for (int rep = 0; rep < 300; ++rep) {
    const auto x = draw_ints(r, 2 + r.next_below(30), 6);
    const auto y = draw_ints(r, 1 + r.next_below(30), 6);
    ASSERT_NEAR(i2_hat(x, y), plugin_i2(x, y), 1e-13);
  }
}

TEST(I2Hat, I1IsRoleSwap) {
  RngStream r(13);
  for (int rep = 0; rep < 50; ++rep) {
    const auto x = draw_continuous(r, 2 + r.next_below(20));
    const auto y = draw_continuous(r, 2 + r.next_below(20));
    ASSERT_EQ(i1_hat(x, y), i2_hat(y, x));
  }
}

TEST(I2Hat, OddSizeLowerHalfHoldsExtraValue) {
  // All y below x: G_hat = 1 everywhere, upper - lower = 1 - 2.
  EXPECT_DOUBLE_EQ(i2_hat(std::vector<double>{1, 2, 3}, std::vector<double>{0}), -2.0 / 3.0);
  EXPECT_DOUBLE_EQ(i2_hat(std::vector<double>{1, 2, 3, 4}, std::vector<double>{0}), 0.0);
}

TEST(Effects, TieFreeEstimatesLieInRegion) {
  RngStream r(14);
  for (int rep = 0; rep < 500; ++rep) {
    // Odd n puts one more value in the lower half, so the estimate can leave A.
    const auto x = draw_continuous(r, 2 + 2 * r.next_below(20));
    auto y = draw_continuous(r, 1 + r.next_below(40));
    for (double& v : y) v = v * (0.2 + 2 * r.next_uniform()) + 4 * (r.next_uniform() - 0.5);
    const double t = theta_hat(x, y);
    const double i = i2_hat(x, y);
    ASSERT_TRUE(in_region(t, i, 1e-12)) << t << ' ' << i;
    if (x.size() % 2 == 0 && y.size() % 2 == 0) {
      const double s = i + i1_hat(x, y);
      ASSERT_GE(s, -1e-12);
      ASSERT_LE(s, 1.0 + 1e-12);
    }
  }
}

TEST(Effects, InvariantUnderIncreasingTransform) {
  RngStream r(15);
  for (int rep = 0; rep < 100; ++rep) {
    const auto x = draw_ints(r, 2 + r.next_below(20), 9);
    const auto y = draw_ints(r, 2 + r.next_below(20), 9);
    std::vector<double> tx, ty;
    for (double v : x) tx.push_back(std::cbrt(v) * 3 + 1);
    for (double v : y) ty.push_back(std::cbrt(v) * 3 + 1);
    ASSERT_EQ(theta_hat(x, y), theta_hat(tx, ty));
    ASSERT_EQ(i2_hat(x, y), i2_hat(tx, ty));
  }
}

TEST(Effects, EqualMediansGiveI1PlusI2NearOne) {
  RngStream r(16);
  const auto x = sample(DistributionSpec::normal(0, 1), 10000, r);
  const auto y = sample(DistributionSpec::normal(0, 2.5), 10000, r);
  EXPECT_NEAR(i1_hat(x, y) + i2_hat(x, y), 1.0, 0.05);
}

TEST(Effects, ConsistencyForShiftedNormals) {
  RngStream r(17);
  const auto x = sample(DistributionSpec::normal(0, 1), 10000, r);
  const auto y = sample(DistributionSpec::normal(1, 1), 10000, r);
  EXPECT_NEAR(theta_hat(x, y), 0.7602, 0.02);
  EXPECT_NEAR(i2_hat(x, y), 0.3645, 0.03);
}

TEST(Adjusted, Examples) {
  const std::vector<double> v{1, 2, 3, 4, 5, 6, 7, 8};
  const AdjustedEffects same = adjusted_effects(split_at_joint_median(v, v));
  EXPECT_EQ(same.theta_adj, 0.5);
  EXPECT_EQ(same.i2_adj, 0.5);

  SplitSamples s;
  s.x_below = {1, 2};
  s.y_below = {3, 4};
  s.x_above = {5, 6};
  s.y_above = {7, 8};
  const AdjustedEffects sep = adjusted_effects(s);
  EXPECT_EQ(sep.theta_adj, 0.75);
  EXPECT_EQ(sep.i2_adj, 0.5);
}

TEST(Adjusted, EducationDataAgainstPairCounts) {
  const SplitSamples s = split_at_joint_median(kClass1, kClass2);
  const double p1 = brute_theta(s.x_below, s.y_below);
  const double p2 = brute_theta(s.x_above, s.y_above);
  const AdjustedEffects a = adjusted_effects(s);
  EXPECT_DOUBLE_EQ(a.theta_adj, 0.25 * (1 + p1 + p2));
  EXPECT_DOUBLE_EQ(a.i2_adj, 0.5 * (1 + p2 - p1));
  const EffectEstimates e = estimate_effects(kClass1, kClass2);
  ASSERT_TRUE(e.theta_adj.has_value());
  EXPECT_DOUBLE_EQ(*e.theta_adj, a.theta_adj);
}

TEST(Adjusted, DegenerateSplitLeavesOptionalEmpty) {
  const EffectEstimates e = estimate_effects(std::vector<double>{1, 2, 3, 4}, std::vector<double>{5, 6, 7, 8});
  EXPECT_FALSE(e.theta_adj.has_value());
  EXPECT_FALSE(e.i2_adj.has_value());
}

TEST(SortedFastPath, AgreesExactly) {
  RngStream r(18);
  for (int rep = 0; rep < 1000; ++rep) {
    auto x = rep % 2 ? draw_ints(r, 2 + r.next_below(40), 7) : draw_continuous(r, 2 + r.next_below(40));
    auto y = rep % 2 ? draw_ints(r, 1 + r.next_below(40), 7) : draw_continuous(r, 1 + r.next_below(40));
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    const ThetaI2 f = theta_i2_sorted(x, y);
    ASSERT_EQ(f.theta, theta_hat(x, y));
    ASSERT_EQ(f.i2, i2_hat(x, y));
  }
}
