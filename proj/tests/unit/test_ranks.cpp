#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "joint_effect/errors.hpp"
#include "joint_effect/ranks.hpp"
#include "joint_effect/rng.hpp"

using namespace joint_effect;

namespace {

std::vector<double> brute_midranks(const std::vector<double>& v) {
  std::vector<double> out;
  for (double a : v) {
    double less = 0, equal = 0;
    for (double b : v) {
      less += b < a;
      equal += b == a;
    }
    out.push_back(less + (equal + 1) / 2);
  }
  return out;
}

std::vector<double> random_ints(RngStream& r, std::size_t n, std::uint64_t range) {
  std::vector<double> v(n);
  for (double& x : v) x = static_cast<double>(r.next_below(range));
  return v;
}

const std::vector<double> kClass1{7, 4, 4, 5, 4, 6, 6, 4, 3, 7};
const std::vector<double> kClass2{3, 6, 7, 9, 3, 2, 4, 8, 2, 6};

}  // namespace

TEST(Midranks, Examples) {
  EXPECT_EQ(midranks(std::vector<double>{10, 20, 30}), (std::vector<double>{1, 2, 3}));
  EXPECT_EQ(midranks(std::vector<double>{5, 5, 5}), (std::vector<double>{2, 2, 2}));
  EXPECT_EQ(midranks(kClass2), brute_midranks(kClass2));
  EXPECT_THROW(midranks(std::vector<double>{}), DomainError);
  EXPECT_THROW(midranks(std::vector<double>{1.0, NAN}), DomainError);
}

TEST(Midranks, MatchBruteForceAndSumIdentity) {
  RngStream r(1);
  for (int rep = 0; rep < 500; ++rep) {
    const std::size_t n = 1 + r.next_below(60);
    const auto v = random_ints(r, n, 1 + r.next_below(20));
    const auto mr = midranks(v);
    ASSERT_EQ(mr, brute_midranks(v));
    const double sum = std::accumulate(mr.begin(), mr.end(), 0.0);
    ASSERT_EQ(sum, n * (n + 1) / 2.0);
  }
}

TEST(Midranks, InvariantUnderIncreasingTransform) {
  RngStream r(2);
  for (int rep = 0; rep < 100; ++rep) {
    auto v = random_ints(r, 30, 10);
    std::vector<double> w;
    for (double x : v) w.push_back(std::exp(0.3 * x) - 7.0);
    ASSERT_EQ(midranks(v), midranks(w));
  }
}

TEST(PoolAndRank, Examples) {
  const RankedPool a = pool_and_rank(std::vector<double>{1}, std::vector<double>{2});
  EXPECT_EQ(a.midrank, (std::vector<double>{1, 2}));
  const RankedPool b = pool_and_rank(std::vector<double>{1, 1}, std::vector<double>{1});
  EXPECT_EQ(b.midrank, (std::vector<double>{2, 2, 2}));
  const RankedPool c = pool_and_rank(kClass1, kClass2);
  EXPECT_EQ(c.rank_sum(Group::X) + c.rank_sum(Group::Y), 210.0);
  EXPECT_EQ(c.n, 10u);
  EXPECT_EQ(c.m, 10u);
  EXPECT_TRUE(std::is_sorted(c.values.begin(), c.values.end()));
  EXPECT_THROW(pool_and_rank(std::vector<double>{}, kClass2), DomainError);
}

TEST(PoolAndRank, GroupsPreserved) {
  RngStream r(3);
  for (int rep = 0; rep < 100; ++rep) {
    const auto x = random_ints(r, 1 + r.next_below(20), 8);
    const auto y = random_ints(r, 1 + r.next_below(20), 8);
    const RankedPool p = pool_and_rank(x, y);
    std::vector<double> px, py;
    for (std::size_t i = 0; i < p.values.size(); ++i) (p.group[i] == Group::X ? px : py).push_back(p.values[i]);
    auto sx = x, sy = y;
    std::sort(sx.begin(), sx.end());
    std::sort(sy.begin(), sy.end());
    ASSERT_EQ(px, sx);
    ASSERT_EQ(py, sy);
    std::vector<double> all = x;
    all.insert(all.end(), y.begin(), y.end());
    auto expect = brute_midranks(all);
    std::sort(expect.begin(), expect.end());
    ASSERT_EQ(p.midrank, expect);
  }
}

TEST(Split, NoTiesSeparatedIsDegenerate) {
  EXPECT_THROW(split_at_joint_median(std::vector<double>{1, 2, 3, 4}, std::vector<double>{5, 6, 7, 8}),
               DegenerateSplitError);
}

TEST(Split, TooSmallIsDegenerate) {
  EXPECT_THROW(split_at_joint_median(std::vector<double>{1, 2, 3}, std::vector<double>{5, 6, 7, 8}),
               DegenerateSplitError);
}

TEST(Split, SymmetricSamples) {
  const std::vector<double> v{1, 2, 3, 4, 5, 6};
  const SplitSamples s = split_at_joint_median(v, v);
  EXPECT_EQ(s.joint_median, 3.0);
  EXPECT_EQ(s.k(), s.l());
  EXPECT_EQ(s.x_below, s.y_below);
  EXPECT_EQ(s.x_above, s.y_above);
  EXPECT_EQ(s.k() + s.l(), 6u);
}

TEST(Split, EducationDataByEnumeration) {
  // Pooled sorted: 2 2 3 3 3 4 4 4 4 4 | 5 6 6 6 6 7 7 7 8 9. The 10th order
  // statistic is 4; five 4s (four X, one Y) all fit in the lower half.
  std::vector<double> pooled = kClass1;
  pooled.insert(pooled.end(), kClass2.begin(), kClass2.end());
  std::sort(pooled.begin(), pooled.end());
  const SplitSamples s = split_at_joint_median(kClass1, kClass2);
  EXPECT_EQ(s.joint_median, pooled[9]);
  EXPECT_EQ(s.k(), 5u);
  EXPECT_EQ(s.l(), 5u);
  EXPECT_EQ(s.x_below, (std::vector<double>{3, 4, 4, 4, 4}));
  EXPECT_EQ(s.y_below, (std::vector<double>{2, 2, 3, 3, 4}));
}

TEST(Split, Invariants) {
  RngStream r(4);
  int checked = 0;
  for (int rep = 0; rep < 400; ++rep) {
    const bool ties = rep % 2 == 0;
    std::vector<double> x(4 + r.next_below(20)), y(4 + r.next_below(20));
    for (double& v : x) v = ties ? static_cast<double>(r.next_below(6)) : r.next_uniform();
    for (double& v : y) v = ties ? static_cast<double>(r.next_below(6)) : r.next_uniform();
    SplitSamples s;
    try {
      s = split_at_joint_median(x, y);
    } catch (const DegenerateSplitError&) {
      continue;
    }
    ++checked;
    ASSERT_EQ(s.n(), x.size());
    ASSERT_EQ(s.m(), y.size());
    for (const auto* part : {&s.x_below, &s.y_below}) {
      for (double v : *part) ASSERT_LE(v, s.joint_median);
    }
    for (const auto* part : {&s.x_above, &s.y_above}) {
      for (double v : *part) ASSERT_GE(v, s.joint_median);
    }
    const std::size_t N = x.size() + y.size();
    if (!ties) {
      ASSERT_TRUE(s.k() + s.l() == N / 2 || s.k() + s.l() == (N + 1) / 2);
    }
    auto all_x = s.x_below;
    all_x.insert(all_x.end(), s.x_above.begin(), s.x_above.end());
    auto sx = x;
    std::sort(sx.begin(), sx.end());
    std::sort(all_x.begin(), all_x.end());
    ASSERT_EQ(all_x, sx);
  }
  EXPECT_GT(checked, 200);
}
