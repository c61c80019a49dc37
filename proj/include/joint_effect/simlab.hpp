#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "joint_effect/distributions.hpp"

namespace joint_effect {

enum class ExperimentKind { Type1, Power, Coverage };

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Type1;
  DistributionSpec dist_x = DistributionSpec::normal(0.0, 1.0);
  DistributionSpec dist_y = DistributionSpec::normal(0.0, 1.0);
  std::vector<std::pair<std::size_t, std::size_t>> n_grid{{50, 50}};
  std::size_t reps = 1000;
  double alpha = 0.05;
  /// Test methods: new, adjusted, wmw, ks, cvm.
  /// CI methods: mvn, bonf-quantile, bonf-normal, mb, gkl.
  std::vector<std::string> methods;
  std::size_t B = 1000;
  std::uint64_t master_seed = 1;
  unsigned threads = 1;
  /// True (theta, I2) for coverage; computed by quadrature when absent.
  std::optional<std::pair<double, double>> truth;
};

struct ResultRow {
  std::string method;
  std::size_t n, m;
  std::string metric;  // rejection_rate, coverage, length
  double value;
  double se;
  std::size_t failures;
};

struct ResultTable {
  std::vector<ResultRow> rows;

  /// Row for (method, n, m, metric); throws DomainError if absent.
  const ResultRow& find(std::string_view method, std::size_t n, std::size_t m,
                        std::string_view metric) const;
  /// Header `method,n,m,metric,value,se,failures`.
  void write_csv(std::ostream& out) const;
  /// Array of row objects.
  void write_json(std::ostream& out) const;
};

/// Validates the configuration for its kind; throws DomainError.
void validate(const ExperimentConfig& config);

/// Rejection rates under F = G.
ResultTable run_type1(const ExperimentConfig& config);
/// Rejection rates; identical to run_type1 for equal distributions and seed.
ResultTable run_power(const ExperimentConfig& config);
/// Joint coverage and mean half-diagonal length of each CI method.
ResultTable run_coverage(const ExperimentConfig& config);
/// Dispatch on config.kind.
ResultTable run_experiment(const ExperimentConfig& config);

/// The six benchmark pairs (X ~ first, Y ~ second), numbered 1..6:
///   I   N(0,1)   vs N(1,1)      IV N(2,1) vs Exp(1)
///   II  N(0,sd 2) vs U[-1/2,1/2] V  N(1,1) vs U[-1/2,1/2]
///   III N(1,1)   vs Exp(1)      VI N(2,1) vs U[-1/2,1/2]
std::pair<DistributionSpec, DistributionSpec> benchmark_setting(int index);
/// Accepts "I".."VI" or "1".."6".
int parse_setting(std::string_view text);

}  // namespace joint_effect
