#include "joint_effect/inference.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string>

#include "joint_effect/bootstrap.hpp"
#include "joint_effect/effects.hpp"
#include "joint_effect/errors.hpp"
#include "joint_effect/special_functions.hpp"

namespace joint_effect {

using special::normal_cdf;
using special::normal_sf;

std::string_view method_name(TestMethod m) {
  switch (m) {
    case TestMethod::NewJoint: return "new";
    case TestMethod::AdjustedJoint: return "adjusted";
    case TestMethod::WMW: return "wmw";
    case TestMethod::KS: return "ks";
    case TestMethod::CvM: return "cvm";
  }
  return "unknown";
}

namespace {

void require_sizes(std::span<const double> x, std::span<const double> y, const char* who) {
  if (x.size() < 2 || y.size() < 2) throw DomainError(std::string(who) + ": need n, m >= 2");
}

void require_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
}

void require_not_constant(std::span<const double> x, std::span<const double> y, const char* who) {
  const double v = x[0];
  const auto same = [v](double u) { return u == v; };
  if (std::all_of(x.begin(), x.end(), same) && std::all_of(y.begin(), y.end(), same)) {
    throw DegenerateDataError(std::string(who) + ": all observations are identical");
  }
}

TestReport report(TestMethod method, std::vector<double> stats, double p, double alpha) {
  p = std::clamp(p, 0.0, 1.0);
  return {method, std::move(stats), p, alpha, p < alpha};
}

// Sample variance of the placements of `a` among `b`, divided by |b|^2.
double placement_variance(std::span<const double> a, std::span<const double> b) {
  const RankedPool pool = pool_and_rank(a, b);
  std::vector<double> own;
  std::vector<double> pooled;
  own.reserve(a.size());
  pooled.reserve(a.size());
  for (std::size_t i = 0; i < pool.values.size(); ++i) {
    if (pool.group[i] == Group::X) {
      own.push_back(pool.values[i]);
      pooled.push_back(pool.midrank[i]);
    }
  }
  const std::vector<double> within = midranks(own);
  const auto k = static_cast<double>(a.size());
  double mean = 0.0;
  for (std::size_t i = 0; i < own.size(); ++i) mean += pooled[i] - within[i];
  mean /= k;
  double ss = 0.0;
  for (std::size_t i = 0; i < own.size(); ++i) {
    const double d = pooled[i] - within[i] - mean;
    ss += d * d;
  }
  const auto l = static_cast<double>(b.size());
  return ss / (l * l * (k - 1.0));
}

}  // namespace

NullCov null_covariance(std::size_t n, std::size_t m) {
  if (n == 0 || m == 0) throw DomainError("null_covariance: need n, m >= 1");
  return {(1.0 / static_cast<double>(m) + 1.0 / static_cast<double>(n)) / 12.0};
}

TestReport new_joint_test(std::span<const double> x, std::span<const double> y, double alpha, JointRule rule) {
  require_sizes(x, y, "new_joint_test");
  require_alpha(alpha);
  require_not_constant(x, y, "new_joint_test");
  const double sigma = std::sqrt(null_covariance(x.size(), y.size()).sigma2);
  const double z1 = (theta_hat(x, y) - 0.5) / sigma;
  const double z2 = (i2_hat(x, y) - 0.5) / sigma;
  double p;
  if (rule == JointRule::MaxType) {
    const double zmax = std::max(std::abs(z1), std::abs(z2));
    // 1 - (1 - 2 sf)^2 = 4 sf - 4 sf^2 keeps precision in the tail.
    const double sf = normal_sf(zmax);
    p = 4.0 * sf - 4.0 * sf * sf;
  } else {
    p = std::exp(-0.5 * (z1 * z1 + z2 * z2));
  }
  return report(TestMethod::NewJoint, {z1, z2}, p, alpha);
}

AdjustedCov adjusted_covariance(const SplitSamples& s) {
  if (s.x_below.size() < 2 || s.x_above.size() < 2 || s.y_below.size() < 2 || s.y_above.size() < 2) {
    throw DegenerateSplitError("adjusted_covariance: a split part has fewer than two observations");
  }
  const auto k = static_cast<double>(s.k());
  const auto l = static_cast<double>(s.l());
  const auto n = static_cast<double>(s.n());
  const auto m = static_cast<double>(s.m());
  const double sx1 = placement_variance(s.x_below, s.y_below);
  const double sy1 = placement_variance(s.y_below, s.x_below);
  const double sx2 = placement_variance(s.x_above, s.y_above);
  const double sy2 = placement_variance(s.y_above, s.x_above);
  const double S1 = (k + l) / 2.0 * (sx1 / k + sy1 / l);
  const double S2 = (n + m - k - l) / 2.0 * (sx2 / (n - k) + sy2 / (m - l));
  AdjustedCov c{};
  c.s2 = S1 + S2;
  c.s_theta_i2 = 0.5 * (S2 - S1);
  c.zero_variance = !(c.s2 > 0.0);
  c.psd = c.s2 * c.s2 / 4.0 - c.s_theta_i2 * c.s_theta_i2 >= -1e-15 * c.s2 * c.s2;
  return c;
}

TestReport adjusted_joint_test(std::span<const double> x, std::span<const double> y, double alpha) {
  require_sizes(x, y, "adjusted_joint_test");
  require_alpha(alpha);
  require_not_constant(x, y, "adjusted_joint_test");
  const SplitSamples s = split_at_joint_median(x, y);
  const AdjustedEffects adj = adjusted_effects(s);
  const AdjustedCov cov = adjusted_covariance(s);
  if (cov.zero_variance) {
    throw SingularCovarianceError("adjusted_joint_test: estimated variance is zero");
  }
  if (!cov.psd) throw SingularCovarianceError("adjusted_joint_test: estimated covariance is not PSD");
  const double root_n = std::sqrt(static_cast<double>(x.size() + y.size()));
  const double v1 = root_n * (adj.theta_adj - 0.5);
  const double v2 = root_n * (adj.i2_adj - 0.5);
  const double z1 = v1 / std::sqrt(cov.s2 / 4.0);
  const double z2 = v2 / std::sqrt(cov.s2);
  const double rho = std::clamp(cov.correlation(), -1.0, 1.0);
  const double p = 1.0 - bvn_rect(std::max(std::abs(z1), std::abs(z2)), rho);
  return report(TestMethod::AdjustedJoint, {v1, v2, z1, z2, rho}, p, alpha);
}

TestReport wmw_test(std::span<const double> x, std::span<const double> y, double alpha, WmwOptions opt) {
  require_sizes(x, y, "wmw_test");
  require_alpha(alpha);
  require_not_constant(x, y, "wmw_test");
  const RankedPool pool = pool_and_rank(x, y);
  const auto n = static_cast<double>(pool.n);
  const auto m = static_cast<double>(pool.m);
  const double N = n + m;
  const double U = pool.rank_sum(Group::Y) - m * (m + 1.0) / 2.0;
  double ties = 0.0;
  if (opt.tie_correction) {
    for (std::size_t i = 0; i < pool.values.size();) {
      std::size_t j = i;
      while (j < pool.values.size() && pool.values[j] == pool.values[i]) ++j;
      const auto t = static_cast<double>(j - i);
      ties += t * t * t - t;
      i = j;
    }
  }
  const double var = n * m / 12.0 * ((N + 1.0) - ties / (N * (N - 1.0)));
  if (!(var > 0.0)) throw DegenerateDataError("wmw_test: zero variance");
  double dev = std::abs(U - n * m / 2.0);
  if (opt.continuity) dev = std::max(0.0, dev - 0.5);
  const double z = dev / std::sqrt(var);
  return report(TestMethod::WMW, {U, z}, 2.0 * normal_sf(z), alpha);
}

double kolmogorov_sf(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 0.2) return 1.0;  // series converges slowly; Q(0.2) = 1 - 1e-27
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

TestReport ks_test(std::span<const double> x, std::span<const double> y, double alpha) {
  require_sizes(x, y, "ks_test");
  require_alpha(alpha);
  require_not_constant(x, y, "ks_test");
  const RankedPool pool = pool_and_rank(x, y);
  const long long n = static_cast<long long>(pool.n);
  const long long m = static_cast<long long>(pool.m);
  const std::size_t N = pool.values.size();

  // Ends of tie blocks are the only places the ECDF difference is observed.
  std::vector<bool> block_end(N + 1, false);
  long long d_num = 0;  // max |i m - j n|, so D = d_num / (n m)
  {
    long long i = 0, j = 0;
    for (std::size_t t = 0; t < N; ++t) {
      (pool.group[t] == Group::X ? i : j) += 1;
      if (t + 1 == N || pool.values[t + 1] != pool.values[t]) {
        block_end[t + 1] = true;
        d_num = std::max(d_num, std::llabs(i * m - j * n));
      }
    }
  }
  const double D = static_cast<double>(d_num) / static_cast<double>(n * m);

  double p;
  if (n * m <= 10000) {
    // Probability that a uniformly random arrangement with the same tie
    // pattern keeps every observed difference strictly below D.
    std::vector<double> prob(static_cast<std::size_t>(n) + 1, 0.0), next(prob.size());
    prob[0] = 1.0;
    for (std::size_t t = 0; t < N; ++t) {
      std::fill(next.begin(), next.end(), 0.0);
      const double remaining = static_cast<double>(N - t);
      const long long i_lo = std::max<long long>(0, static_cast<long long>(t) - m);
      const long long i_hi = std::min<long long>(n, static_cast<long long>(t));
      for (long long i = i_lo; i <= i_hi; ++i) {
        const double w = prob[static_cast<std::size_t>(i)];
        if (w == 0.0) continue;
        const long long j = static_cast<long long>(t) - i;
        if (i < n) next[static_cast<std::size_t>(i + 1)] += w * static_cast<double>(n - i) / remaining;
        if (j < m) next[static_cast<std::size_t>(i)] += w * static_cast<double>(m - j) / remaining;
      }
      if (block_end[t + 1]) {
        const long long tt = static_cast<long long>(t + 1);
        for (long long i = 0; i <= n; ++i) {
          const long long j = tt - i;
          if (j < 0 || j > m || std::llabs(i * m - j * n) >= d_num) next[static_cast<std::size_t>(i)] = 0.0;
        }
      }
      prob.swap(next);
    }
    p = 1.0 - prob[static_cast<std::size_t>(n)];
  } else {
    const double en = std::sqrt(static_cast<double>(n * m) / static_cast<double>(n + m));
    p = kolmogorov_sf(en * D);
  }
  return report(TestMethod::KS, {D}, p, alpha);
}

double cvm_limit_cdf(double x) {
  if (!(x > 0.0)) return 0.0;
  double total = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const double u = std::exp(std::lgamma(k + 0.5) - std::lgamma(k + 1.0)) /
                     (std::pow(std::numbers::pi, 1.5) * std::sqrt(x));
    const double y = 4.0 * k + 1.0;
    const double q = y * y / (16.0 * x);
    if (q > 700.0) break;
    const double term = u * std::sqrt(y) * std::exp(-q) * std::cyl_bessel_k(0.25, q);
    total += term;
    if (std::abs(term) < 1e-12) break;
  }
  return std::clamp(total, 0.0, 1.0);
}

TestReport cvm_test(std::span<const double> x, std::span<const double> y, double alpha) {
  require_sizes(x, y, "cvm_test");
  require_alpha(alpha);
  require_not_constant(x, y, "cvm_test");
  const RankedPool pool = pool_and_rank(x, y);
  const auto n = static_cast<double>(pool.n);
  const auto m = static_cast<double>(pool.m);
  const double N = n + m;
  const double k = n * m;
  double sx = 0.0, sy = 0.0;
  std::size_t ix = 0, iy = 0;
  for (std::size_t t = 0; t < pool.values.size(); ++t) {
    if (pool.group[t] == Group::X) {
      const double d = pool.midrank[t] - static_cast<double>(++ix);
      sx += d * d;
    } else {
      const double d = pool.midrank[t] - static_cast<double>(++iy);
      sy += d * d;
    }
  }
  const double U = n * sx + m * sy;
  const double T = U / (k * N) - (4.0 * k - 1.0) / (6.0 * N);
  const double et = (1.0 + 1.0 / N) / 6.0;
  const double vt = (N + 1.0) * (4.0 * k * N - 3.0 * (n * n + m * m) - 2.0 * k) / (45.0 * N * N * 4.0 * k);
  const double tn = 1.0 / 6.0 + (T - et) / std::sqrt(45.0 * vt);
  const double p = tn < 0.003 ? 1.0 : 1.0 - cvm_limit_cdf(tn);
  return report(TestMethod::CvM, {T, tn}, p, alpha);
}

}  // namespace joint_effect
