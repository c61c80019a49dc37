#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "joint_effect/rng.hpp"

namespace joint_effect {

enum class Family { Normal, Uniform, Exponential, Beta, Cauchy, ChiSquare };

/// Immutable parametric continuous distribution.
///
/// Parameters per family:
///   Normal(mean, sd)            sd > 0 (standard deviation, not variance)
///   Uniform(lower, upper)       lower < upper
///   Exponential(rate)           rate > 0
///   Beta(shape1, shape2)        both > 0
///   Cauchy(location, scale)     scale > 0
///   ChiSquare(df)               integer df >= 1
class DistributionSpec {
 public:
  static DistributionSpec normal(double mean, double sd);
  static DistributionSpec uniform(double lower, double upper);
  static DistributionSpec exponential(double rate);
  static DistributionSpec beta(double shape1, double shape2);
  static DistributionSpec cauchy(double location, double scale);
  static DistributionSpec chi_square(double df);

  /// Validating constructor; throws DomainError on bad parameters.
  DistributionSpec(Family family, std::vector<double> params);

  /// Parses `normal:MU,SD`, `uniform:A,B`, `exp:RATE`, `beta:A,B`,
  /// `cauchy:LOC,SCALE` or `chisq:DF`.
  static DistributionSpec parse(std::string_view text);
  /// Inverse of parse (round-trips through parse).
  std::string to_string() const;

  Family family() const noexcept { return family_; }
  const std::vector<double>& params() const noexcept { return params_; }

  double cdf(double x) const;
  double pdf(double x) const;
  /// Inverse cdf on (0, 1); throws DomainError outside.
  double quantile(double p) const;
  double median() const { return quantile(0.5); }

  friend bool operator==(const DistributionSpec&, const DistributionSpec&) = default;

 private:
  double invert_cdf(double p, double guess, double lo, double hi) const;

  Family family_;
  std::vector<double> params_;
};

/// One draw from `d`.
double draw(const DistributionSpec& d, RngStream& rng);

/// n i.i.d. draws from `d`; deterministic given the stream state.
std::vector<double> sample(const DistributionSpec& d, std::size_t n, RngStream& rng);

std::string_view family_name(Family f);

}  // namespace joint_effect
