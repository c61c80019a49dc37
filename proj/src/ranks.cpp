#include "joint_effect/ranks.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "joint_effect/errors.hpp"

namespace joint_effect {

namespace {

void require_finite(std::span<const double> v, const char* what) {
  for (double d : v) {
    if (std::isnan(d)) throw DomainError(std::string(what) + ": NaN in sample");
  }
}

// Midranks for data already sorted ascending.
void assign_sorted_midranks(std::span<const double> sorted, std::span<double> out) {
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i + 1;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const double rank = 0.5 * static_cast<double>(i + 1 + j);  // mean of i+1..j
    for (std::size_t k = i; k < j; ++k) out[k] = rank;
    i = j;
  }
}

}  // namespace

double RankedPool::rank_sum(Group g) const {
  double s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (group[i] == g) s += midrank[i];
  }
  return s;
}

std::vector<double> midranks(std::span<const double> values) {
  if (values.empty()) throw DomainError("midranks: empty input");
  require_finite(values, "midranks");
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> sorted(values.size());
  for (std::size_t i = 0; i < order.size(); ++i) sorted[i] = values[order[i]];
  std::vector<double> sorted_ranks(values.size());
  assign_sorted_midranks(sorted, sorted_ranks);
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < order.size(); ++i) out[order[i]] = sorted_ranks[i];
  return out;
}

RankedPool pool_and_rank(std::span<const double> x, std::span<const double> y) {
  if (x.empty() || y.empty()) throw DomainError("pool_and_rank: both samples must be nonempty");
  require_finite(x, "pool_and_rank");
  require_finite(y, "pool_and_rank");
  const std::size_t total = x.size() + y.size();
  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), 0);
  const auto value_at = [&](std::size_t i) { return i < x.size() ? x[i] : y[i - x.size()]; };
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return value_at(a) < value_at(b); });

  RankedPool pool;
  pool.n = x.size();
  pool.m = y.size();
  pool.values.resize(total);
  pool.group.resize(total);
  pool.midrank.resize(total);
  for (std::size_t i = 0; i < total; ++i) {
    pool.values[i] = value_at(order[i]);
    pool.group[i] = order[i] < x.size() ? Group::X : Group::Y;
  }
  assign_sorted_midranks(pool.values, pool.midrank);
  return pool;
}

SplitSamples split_at_joint_median(std::span<const double> x, std::span<const double> y) {
  if (x.size() < 4 || y.size() < 4) {
    throw DegenerateSplitError("split_at_joint_median: degenerate split, need n >= 4 and m >= 4 so every part holds two values");
  }
  require_finite(x, "split_at_joint_median");
  require_finite(y, "split_at_joint_median");
  std::vector<double> xs(x.begin(), x.end());
  std::vector<double> ys(y.begin(), y.end());
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());

  std::vector<double> pooled(xs);
  pooled.insert(pooled.end(), ys.begin(), ys.end());
  const std::size_t half = (pooled.size() + 1) / 2;
  std::nth_element(pooled.begin(), pooled.begin() + static_cast<std::ptrdiff_t>(half - 1), pooled.end());
  const double med = pooled[half - 1];

  const auto count_below = [med](const std::vector<double>& v) {
    return static_cast<std::size_t>(std::lower_bound(v.begin(), v.end(), med) - v.begin());
  };
  const auto count_tied = [med](const std::vector<double>& v) {
    const auto r = std::equal_range(v.begin(), v.end(), med);
    return static_cast<std::size_t>(r.second - r.first);
  };
  const std::size_t below_x = count_below(xs);
  const std::size_t below_y = count_below(ys);
  const std::size_t tied_x = count_tied(xs);
  const std::size_t tied_y = count_tied(ys);
  const std::size_t tied = tied_x + tied_y;
  const std::size_t need = half - below_x - below_y;  // 1 <= need <= tied
  const std::size_t need_x = need * tied_x / tied;
  const std::size_t need_y = need - need_x;

  SplitSamples s;
  s.joint_median = med;
  const auto cut_x = static_cast<std::ptrdiff_t>(below_x + need_x);
  const auto cut_y = static_cast<std::ptrdiff_t>(below_y + need_y);
  s.x_below.assign(xs.begin(), xs.begin() + cut_x);
  s.x_above.assign(xs.begin() + cut_x, xs.end());
  s.y_below.assign(ys.begin(), ys.begin() + cut_y);
  s.y_above.assign(ys.begin() + cut_y, ys.end());

  if (s.x_below.size() < 2 || s.x_above.size() < 2 || s.y_below.size() < 2 ||
      s.y_above.size() < 2) {
    throw DegenerateSplitError(
        "joint-median split is degenerate (parts: x_below=" + std::to_string(s.x_below.size()) +
        ", x_above=" + std::to_string(s.x_above.size()) +
        ", y_below=" + std::to_string(s.y_below.size()) +
        ", y_above=" + std::to_string(s.y_above.size()) + "; each needs >= 2)");
  }
  return s;
}

}  // namespace joint_effect
