#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "joint_effect/effects.hpp"
#include "joint_effect/region.hpp"
#include "joint_effect/rng.hpp"

namespace joint_effect {

/// P(|Z1| <= c, |Z2| <= c) for a standard bivariate normal with correlation
/// rho. Absolute error below 1e-7.
double bvn_rect(double c, double rho);

/// The c > 0 with bvn_rect(c, rho) = level.
double equicoordinate_quantile(double level, double rho);

struct BootstrapDraws {
  std::vector<double> theta_star;
  std::vector<double> i2_star;
  EffectEstimates origin;
  std::size_t size() const noexcept { return theta_star.size(); }
};

/// B within-group resamples of (x, y). Replication b draws from rng.child(b),
/// so the result does not depend on `threads`.
BootstrapDraws resample_effects(std::span<const double> x, std::span<const double> y,
                                std::size_t B, const RngStream& rng, unsigned threads = 1);

enum class RegionKind { Rectangle, Ellipse };

struct Ellipse {
  double center[2];
  double cov[2][2];
  double radius;  // Mahalanobis radius
};

struct ConfidenceRegion {
  RegionKind kind = RegionKind::Rectangle;
  Rect rect{};                    // always set; marginal box for the ellipse
  std::optional<Ellipse> ellipse;
  double level = 0.95;
  bool clipped = false;
  bool fallback = false;          // GKL fell back to MB limits
  std::string method;

  /// Membership in the rectangle.
  bool contains(double theta, double i2) const;
  /// Membership in the ellipse (the rectangle when there is none).
  bool ellipse_contains(double theta, double i2) const;
  /// Half the diagonal of the rectangle.
  double euclidean_length() const;
};

/// Ellipse from the bootstrap covariance with radius^2 = -2 ln(alpha) plus the
/// equicoordinate marginal rectangle. Throws SeparationError if the samples are
/// perfectly separated and SingularCovarianceError if the draws have a
/// singular covariance.
ConfidenceRegion ci_mvn(const BootstrapDraws& draws, double alpha);

enum class QuantileOrientation { Basic, Percentile };

/// Bonferroni boxes from empirical quantiles q of the deviations draw - estimate
/// at alpha/4 and 1 - alpha/4: estimate + [q_lo, q_hi] (Percentile) or
/// estimate - [q_hi, q_lo] (Basic).
ConfidenceRegion ci_bonf_quantile(const BootstrapDraws& draws, double alpha,
                                  QuantileOrientation orientation = QuantileOrientation::Percentile);

/// estimate +- Phi^{-1}(1 - alpha/4) * bootstrap sd, per coordinate.
ConfidenceRegion ci_bonf_normal(const BootstrapDraws& draws, double alpha);

/// Max-rank box. Ties among draws get random ranks from `tie_rng`.
ConfidenceRegion ci_mandel_betensky(const BootstrapDraws& draws, double alpha,
                                    const RngStream& tie_rng);

/// Sharpened max-rank box. Falls back to the MB box (fallback = true) when the
/// retained set is empty. Never extends beyond the MB box.
ConfidenceRegion ci_gkl(const BootstrapDraws& draws, double alpha, const RngStream& tie_rng);

/// Clips a rectangle to the bounding box of its intersection with the feasible
/// region. An ellipse keeps its shape; only its marginal box is clipped.
ConfidenceRegion range_preserve(const ConfidenceRegion& r);

/// Type-7 (linear interpolation) sample quantile of unsorted data.
double sample_quantile(std::vector<double> values, double p);

}  // namespace joint_effect
