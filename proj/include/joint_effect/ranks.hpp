#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace joint_effect {

enum class Group : unsigned char { X, Y };

/// Pooled two-sample data sorted ascending, with group labels and midranks.
struct RankedPool {
  std::vector<double> values;
  std::vector<Group> group;
  std::vector<double> midrank;
  std::size_t n = 0;  // count of X
  std::size_t m = 0;  // count of Y

  /// Sum of the midranks of one group.
  double rank_sum(Group g) const;
};

/// The two samples split at their joint median.
struct SplitSamples {
  double joint_median = 0.0;
  std::vector<double> x_below, x_above, y_below, y_above;

  std::size_t k() const noexcept { return x_below.size(); }
  std::size_t l() const noexcept { return y_below.size(); }
  std::size_t n() const noexcept { return x_below.size() + x_above.size(); }
  std::size_t m() const noexcept { return y_below.size() + y_above.size(); }
};

/// Midrank of every element: (# strictly smaller) + (# equal + 1) / 2.
std::vector<double> midranks(std::span<const double> values);

/// Pools x and y, sorts stably (x before y on equal values) and assigns
/// midranks.
RankedPool pool_and_rank(std::span<const double> x, std::span<const double> y);

/// Splits both samples at the lower median of the pooled data (order statistic
/// ceil(N/2)). Values strictly below go below, strictly above go above. Copies
/// tied with the median fill the lower half up to exactly ceil(N/2) pooled
/// values; they are apportioned to X first by floor(need * t_x / t), the rest to
/// Y, and the remaining ties go above.
///
/// Throws DegenerateSplitError if n < 4, m < 4 or any of the four parts has
/// fewer than two values.
SplitSamples split_at_joint_median(std::span<const double> x, std::span<const double> y);

}  // namespace joint_effect
