#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "joint_effect/ranks.hpp"

namespace joint_effect {

enum class TestMethod { NewJoint, AdjustedJoint, WMW, KS, CvM };

std::string_view method_name(TestMethod m);

struct TestReport {
  TestMethod method;
  std::vector<double> stats;  // per-method, see each test
  double p_value;
  double alpha;
  bool reject;  // p_value < alpha
};

/// Null variance of theta_hat (and of i2_hat): (1/12)(1/m + 1/n).
struct NullCov {
  double sigma2;
};
NullCov null_covariance(std::size_t n, std::size_t m);

enum class JointRule {
  MaxType,    // p = 1 - (2 Phi(max|z|) - 1)^2
  ChiSquare,  // p = exp(-(z1^2 + z2^2) / 2)
};

/// stats = (z1, z2) = ((theta - 1/2) / sigma, (i2 - 1/2) / sigma).
/// Throws DegenerateDataError when every value in both samples is equal.
TestReport new_joint_test(std::span<const double> x, std::span<const double> y, double alpha,
                          JointRule rule = JointRule::MaxType);

/// Estimated covariance of sqrt(N) (theta_adj, i2_adj), N = n + m:
///   [[s2/4, s_theta_i2], [s_theta_i2, s2]].
struct AdjustedCov {
  double s2;
  double s_theta_i2;
  bool zero_variance;  // s2 == 0
  bool psd;            // determinant >= 0
  /// s_theta_i2 / (s2 / 2); undefined when zero_variance.
  double correlation() const { return s_theta_i2 / (s2 / 2.0); }
};

/// S1 and S2 are the below- and above-median summands
///   S1 = (k + l)/2 (s_X1^2/k + s_Y1^2/l),  S2 = (N - k - l)/2 (s_X2^2/(n-k) + s_Y2^2/(m-l));
/// s2 = S1 + S2 and s_theta_i2 = (S2 - S1)/2.
AdjustedCov adjusted_covariance(const SplitSamples& s);

/// stats = (v1, v2, z1, z2, rho): v = sqrt(N)(adjusted - 1/2), z = v / sd.
/// Throws DegenerateSplitError / SingularCovarianceError when inapplicable.
TestReport adjusted_joint_test(std::span<const double> x, std::span<const double> y, double alpha);

struct WmwOptions {
  bool continuity = true;
  bool tie_correction = true;
};

/// Normal approximation to the rank sum test. stats = (U, z) with U the
/// Mann-Whitney count of (x < y) pairs, ties counting 1/2.
TestReport wmw_test(std::span<const double> x, std::span<const double> y, double alpha,
                    WmwOptions options = {});

/// Two-sample Kolmogorov-Smirnov. stats = (D). The p-value is exact,
/// conditional on the tie pattern, when n * m <= 10000 and from the
/// Kolmogorov limit otherwise.
TestReport ks_test(std::span<const double> x, std::span<const double> y, double alpha);

/// Two-sample Cramer-von Mises with the normalized statistic referred to the
/// limiting one-sample distribution. stats = (T, T_normalized).
TestReport cvm_test(std::span<const double> x, std::span<const double> y, double alpha);

/// Kolmogorov limiting survival function Q(lambda) = 2 sum (-1)^{k-1} e^{-2 k^2 lambda^2}.
double kolmogorov_sf(double lambda);

/// Limiting cdf of the one-sample Cramer-von Mises statistic.
double cvm_limit_cdf(double x);

}  // namespace joint_effect
