#include <gtest/gtest.h>

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "joint_effect/bootstrap.hpp"
#include "joint_effect/distributions.hpp"
#include "joint_effect/errors.hpp"
#include "joint_effect/region.hpp"
#include "joint_effect/rng.hpp"

using namespace joint_effect;
using D = DistributionSpec;

namespace {

double phi_cdf(double x) { return boost::math::cdf(boost::math::normal(), x); }

BootstrapDraws synthetic(std::vector<double> t, std::vector<double> i, double t0, double i0) {
  BootstrapDraws d;
  d.theta_star = std::move(t);
  d.i2_star = std::move(i);
  d.origin.theta = t0;
  d.origin.i2 = i0;
  return d;
}

BootstrapDraws gaussian_draws(std::size_t B, double rho, std::uint64_t seed) {
  RngStream r(seed);
  const D z = D::normal(0, 1);
  std::vector<double> t(B), i(B);
  for (std::size_t b = 0; b < B; ++b) {
    const double a = draw(z, r), c = draw(z, r);
    t[b] = 0.5 + 0.02 * a;
    i[b] = 0.4 + 0.03 * (rho * a + std::sqrt(1 - rho * rho) * c);
  }
  return synthetic(t, i, 0.5, 0.4);
}

bool inside(const Rect& inner, const Rect& outer) {
  return inner.theta_lo >= outer.theta_lo && inner.theta_hi <= outer.theta_hi &&
         inner.i2_lo >= outer.i2_lo && inner.i2_hi <= outer.i2_hi;
}

}  // namespace

TEST(BvnRect, IndependentAndComonotone) {
  for (double c : {0.5, 1.0, 2.0, 3.0}) {
    const double p = 2 * phi_cdf(c) - 1;
    EXPECT_NEAR(bvn_rect(c, 0.0), p * p, 1e-10);
    EXPECT_NEAR(bvn_rect(c, 1.0), p, 1e-10);
    EXPECT_NEAR(bvn_rect(c, -1.0), p, 1e-10);
    EXPECT_NEAR(bvn_rect(c, 0.999999), p, 1e-3);
  }
}

TEST(BvnRect, MonteCarloAtModerateCorrelation) {
  RngStream r(11);
  const D z = D::normal(0, 1);
  const int N = 10000000;
  const double rho = 0.5, s = std::sqrt(1 - rho * rho);
  int hits = 0;
  for (int k = 0; k < N; ++k) {
    const double a = draw(z, r), b = rho * a + s * draw(z, r);
    hits += std::abs(a) <= 2 && std::abs(b) <= 2;
  }
  EXPECT_NEAR(bvn_rect(2.0, rho), static_cast<double>(hits) / N, 3e-4);
  EXPECT_NEAR(bvn_rect(2.0, rho), bvn_rect(2.0, -rho), 1e-10);
}

TEST(EquicoordinateQuantile, IndependentCase) {
  for (double level : {0.8, 0.9, 0.95, 0.99}) {
    const double c = equicoordinate_quantile(level, 0.0);
    const double p = 2 * phi_cdf(c) - 1;
    EXPECT_NEAR(p * p, level, 1e-6);
  }
  EXPECT_NEAR(equicoordinate_quantile(0.95, 0.0), 2.236, 1e-3);
}

TEST(EquicoordinateQuantile, DecreasesWithCorrelation) {
  double prev = equicoordinate_quantile(0.95, 0.0);
  for (double rho : {0.3, 0.6, 0.9, 0.99}) {
    const double c = equicoordinate_quantile(0.95, rho);
    EXPECT_LT(c, prev);
    EXPECT_GE(c, 1.959963984540054 - 1e-6);
    EXPECT_NEAR(bvn_rect(c, rho), 0.95, 1e-7);
    prev = c;
  }
}

TEST(Resample, DeterministicAndThreadIndependent) {
  RngStream r(12);
  const auto x = sample(D::normal(0, 1), 30, r);
  const auto y = sample(D::normal(0.5, 1), 25, r);
  const RngStream root(99);
  const BootstrapDraws a = resample_effects(x, y, 200, root, 1);
  const BootstrapDraws b = resample_effects(x, y, 200, root, 4);
  ASSERT_EQ(a.size(), 200u);
  EXPECT_EQ(a.theta_star, b.theta_star);
  EXPECT_EQ(a.i2_star, b.i2_star);
  const BootstrapDraws c = resample_effects(x, y, 200, RngStream(100), 1);
  EXPECT_NE(a.theta_star, c.theta_star);
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_TRUE(in_region(a.theta_star[k], a.i2_star[k]));
  }
}

TEST(Resample, ConstantData) {
  const std::vector<double> x(10, 1.0), y(12, 1.0);
  const BootstrapDraws d = resample_effects(x, y, 50, RngStream(1));
  for (std::size_t k = 0; k < d.size(); ++k) {
    EXPECT_EQ(d.theta_star[k], 0.5);
  }
}

TEST(Resample, SpreadMatchesAsymptoticSd) {
  RngStream r(13);
  const auto x = sample(D::uniform(0, 1), 50, r);
  const auto y = sample(D::uniform(0, 1), 50, r);
  const BootstrapDraws d = resample_effects(x, y, 2000, RngStream(5));
  double m = 0;
  for (double v : d.theta_star) m += v;
  m /= d.size();
  double var = 0;
  for (double v : d.theta_star) var += (v - m) * (v - m);
  const double sd = std::sqrt(var / (d.size() - 1));
  const double target = std::sqrt(1.0 / 12.0 * (2.0 / 50.0));
  EXPECT_NEAR(sd, target, 0.25 * target);
}

TEST(Mvn, RectangleAndEllipse) {
  const BootstrapDraws d = gaussian_draws(4000, 0.0, 14);
  const ConfidenceRegion r = ci_mvn(d, 0.05);
  ASSERT_TRUE(r.ellipse.has_value());
  EXPECT_EQ(r.kind, RegionKind::Ellipse);
  EXPECT_NEAR(r.ellipse->radius, std::sqrt(-2 * std::log(0.05)), 1e-15);
  const double c = equicoordinate_quantile(0.95, 0.0);
  EXPECT_NEAR(r.rect.theta_hi - 0.5, c * 0.02, 0.1 * c * 0.02);
  EXPECT_NEAR(r.rect.i2_hi - 0.4, c * 0.03, 0.1 * c * 0.03);
  EXPECT_TRUE(r.contains(0.5, 0.4));
  EXPECT_TRUE(r.ellipse_contains(0.5, 0.4));
  EXPECT_FALSE(r.ellipse_contains(0.5 + 0.1, 0.4));
  EXPECT_NEAR(r.euclidean_length(),
              0.5 * std::hypot(r.rect.theta_hi - r.rect.theta_lo, r.rect.i2_hi - r.rect.i2_lo), 1e-15);
}

TEST(Mvn, Errors) {
  EXPECT_THROW(ci_mvn(synthetic({0.4, 0.5, 0.6}, {0.2, 0.3, 0.4}, 0.5, 0.3), 0.05), SingularCovarianceError);
  EXPECT_THROW(ci_mvn(synthetic({0.5, 0.5, 0.5}, {0.2, 0.3, 0.4}, 0.5, 0.3), 0.05), SingularCovarianceError);
  EXPECT_THROW(ci_mvn(synthetic({0.9, 1.0, 0.95}, {0.2, 0.3, 0.1}, 1.0, 0.3), 0.05), SeparationError);
}

TEST(BonfNormal, Multiplier) {
  const BootstrapDraws d = synthetic({0.4, 0.6, 0.4, 0.6}, {0.1, 0.1, 0.3, 0.3}, 0.5, 0.2);
  const ConfidenceRegion r = ci_bonf_normal(d, 0.05);
  const double sd = std::sqrt(4.0 * 0.01 / 3.0);
  EXPECT_NEAR(r.rect.theta_hi - 0.5, 2.241402727604947 * sd, 1e-12);
  EXPECT_NEAR(0.2 - r.rect.i2_lo, 2.241402727604947 * sd, 1e-12);
}

TEST(BonfQuantile, Orientations) {
  std::vector<double> t(101), i(101);
  for (int k = 0; k <= 100; ++k) {
    t[k] = 0.5 + 0.001 * k;          // deviations from 0.5 are skewed upward
    i[k] = 0.3 + 0.001 * (k - 50);
  }
  const BootstrapDraws d = synthetic(t, i, 0.5, 0.3);
  const ConfidenceRegion basic = ci_bonf_quantile(d, 0.04, QuantileOrientation::Basic);
  const ConfidenceRegion perc = ci_bonf_quantile(d, 0.04, QuantileOrientation::Percentile);
  EXPECT_NEAR(perc.rect.theta_lo, 0.501, 1e-12);
  EXPECT_NEAR(perc.rect.theta_hi, 0.599, 1e-12);
  EXPECT_NEAR(basic.rect.theta_lo, 0.401, 1e-12);
  EXPECT_NEAR(basic.rect.theta_hi, 0.499, 1e-12);
  EXPECT_NEAR(basic.rect.i2_lo, perc.rect.i2_lo, 1e-12);
}

TEST(SampleQuantile, Type7) {
  EXPECT_DOUBLE_EQ(sample_quantile({3, 1, 2, 4}, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(sample_quantile({3, 1, 2, 4}, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(sample_quantile({3, 1, 2, 4}, 1.0), 4.0);
  EXPECT_DOUBLE_EQ(sample_quantile({10, 20}, 0.25), 12.5);
  EXPECT_THROW(sample_quantile({}, 0.5), DomainError);
}

TEST(MandelBetensky, ComonotoneDrawsGivePerCoordinateOrderStatistics) {
  const std::size_t B = 1000;
  std::vector<double> t(B), i(B);
  RngStream r(15);
  for (std::size_t b = 0; b < B; ++b) t[b] = r.next_uniform();
  for (std::size_t b = 0; b < B; ++b) i[b] = 0.2 + 0.5 * t[b] * t[b];
  const BootstrapDraws d = synthetic(t, i, 0.5, 0.3);
  std::vector<double> st = t, si = i;
  std::sort(st.begin(), st.end());
  std::sort(si.begin(), si.end());
  const ConfidenceRegion mb = ci_mandel_betensky(d, 0.05, RngStream(1));
  EXPECT_EQ(mb.rect.theta_lo, st[25]);
  EXPECT_EQ(mb.rect.theta_hi, st[974]);
  EXPECT_EQ(mb.rect.i2_lo, si[25]);
  EXPECT_EQ(mb.rect.i2_hi, si[974]);
}

TEST(MandelBetensky, SelfCoverage) {
  for (double rho : {0.0, 0.7}) {
    const BootstrapDraws d = gaussian_draws(10000, rho, 16);
    const ConfidenceRegion mb = ci_mandel_betensky(d, 0.05, RngStream(2));
    std::size_t in = 0;
    for (std::size_t b = 0; b < d.size(); ++b) in += mb.contains(d.theta_star[b], d.i2_star[b]);
    const double frac = static_cast<double>(in) / d.size();
    EXPECT_GE(frac, 0.94);
    EXPECT_LE(frac, 0.96);
  }
}

TEST(Gkl, InsideMandelBetenskyAndOnDraws) {
  for (std::uint64_t seed = 20; seed < 40; ++seed) {
    const BootstrapDraws d = gaussian_draws(500, seed % 2 ? 0.6 : -0.3, seed);
    const ConfidenceRegion mb = ci_mandel_betensky(d, 0.05, RngStream(seed));
    const ConfidenceRegion g = ci_gkl(d, 0.05, RngStream(seed));
    EXPECT_TRUE(inside(g.rect, mb.rect));
    const auto on = [](const std::vector<double>& v, double x) {
      return std::find(v.begin(), v.end(), x) != v.end();
    };
    EXPECT_TRUE(on(d.theta_star, g.rect.theta_lo));
    EXPECT_TRUE(on(d.theta_star, g.rect.theta_hi));
    EXPECT_TRUE(on(d.i2_star, g.rect.i2_lo));
    EXPECT_TRUE(on(d.i2_star, g.rect.i2_hi));
    EXPECT_EQ(g.method, "gkl");
  }
}

TEST(MaxRank, SwapEquivariance) {
  const BootstrapDraws d = gaussian_draws(800, 0.4, 41);
  const BootstrapDraws s = synthetic(d.i2_star, d.theta_star, d.origin.i2, d.origin.theta);
  const RngStream tie(3);
  // Swapped ties use the swapped child streams; without ties the result does
  // not depend on them.
  const ConfidenceRegion a = ci_mandel_betensky(d, 0.05, tie);
  const ConfidenceRegion b = ci_mandel_betensky(s, 0.05, tie);
  EXPECT_EQ(a.rect.theta_lo, b.rect.i2_lo);
  EXPECT_EQ(a.rect.theta_hi, b.rect.i2_hi);
  EXPECT_EQ(a.rect.i2_lo, b.rect.theta_lo);
  EXPECT_EQ(a.rect.i2_hi, b.rect.theta_hi);
  const ConfidenceRegion ga = ci_gkl(d, 0.05, tie);
  const ConfidenceRegion gb = ci_gkl(s, 0.05, tie);
  EXPECT_EQ(ga.rect.theta_lo, gb.rect.i2_lo);
  EXPECT_EQ(ga.rect.theta_hi, gb.rect.i2_hi);
}

TEST(MaxRank, TiedDrawsAreDeterministicGivenTieStream) {
  std::vector<double> t, i;
  for (int k = 0; k < 400; ++k) {
    t.push_back(0.4 + 0.01 * (k % 20));
    i.push_back(0.3 + 0.01 * ((k * 7) % 13));
  }
  const BootstrapDraws d = synthetic(t, i, 0.5, 0.36);
  const ConfidenceRegion a = ci_gkl(d, 0.05, RngStream(4));
  const ConfidenceRegion b = ci_gkl(d, 0.05, RngStream(4));
  EXPECT_EQ(a.rect.theta_lo, b.rect.theta_lo);
  EXPECT_EQ(a.rect.i2_hi, b.rect.i2_hi);
  EXPECT_TRUE(inside(a.rect, ci_mandel_betensky(d, 0.05, RngStream(4)).rect));
}

TEST(RangePreserve, ClipsToFeasibleRegion) {
  ConfidenceRegion r;
  r.rect = {0.3, 0.7, 0.8, 1.3};
  const ConfidenceRegion c = range_preserve(r);
  EXPECT_TRUE(c.clipped);
  EXPECT_LE(c.rect.i2_hi, 1.0);
  EXPECT_TRUE(inside(c.rect, r.rect));
  ConfidenceRegion ok;
  ok.rect = {0.4, 0.6, 0.1, 0.3};
  EXPECT_FALSE(range_preserve(ok).clipped);
  ConfidenceRegion outside;
  outside.rect = {0.05, 0.1, 0.8, 0.9};
  EXPECT_THROW(range_preserve(outside), EmptyRegionError);
}

TEST(Regions, AlphaValidation) {
  const BootstrapDraws d = gaussian_draws(100, 0.0, 42);
  EXPECT_THROW(ci_bonf_normal(d, 0.0), DomainError);
  EXPECT_THROW(ci_mandel_betensky(d, 1.0, RngStream(1)), DomainError);
}
