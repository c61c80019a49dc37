#include "joint_effect/simlab.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>

#include "json.hpp"

#include "joint_effect/bootstrap.hpp"
#include "joint_effect/errors.hpp"
#include "joint_effect/inference.hpp"
#include "joint_effect/oracle.hpp"
#include "joint_effect/parallel.hpp"

namespace joint_effect {

namespace {

// Stream ids of the experiment kinds. Type-I and power runs share one id so
// that equal distributions give identical tables.
constexpr std::uint64_t kTestingId = 1;
constexpr std::uint64_t kCoverageId = 2;

const std::vector<std::string> kTestMethods{"new", "adjusted", "wmw", "ks", "cvm"};
const std::vector<std::string> kCiMethods{"mvn", "bonf-quantile", "bonf-normal", "mb", "gkl"};

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

// 1 = reject / cover, 0 = not, -1 = method inapplicable.
using Outcome = signed char;

Outcome run_test(const std::string& method, const std::vector<double>& x, const std::vector<double>& y,
                 double alpha) {
  try {
    TestReport r;
    if (method == "new") r = new_joint_test(x, y, alpha);
    else if (method == "adjusted") r = adjusted_joint_test(x, y, alpha);
    else if (method == "wmw") r = wmw_test(x, y, alpha);
    else if (method == "ks") r = ks_test(x, y, alpha);
    else r = cvm_test(x, y, alpha);
    return r.reject ? 1 : 0;
  } catch (const InapplicableError&) {
    return -1;
  }
}

ConfidenceRegion run_ci(const std::string& method, const BootstrapDraws& d, double alpha, const RngStream& ties) {
  if (method == "mvn") return ci_mvn(d, alpha);
  if (method == "bonf-quantile") return ci_bonf_quantile(d, alpha);
  if (method == "bonf-normal") return ci_bonf_normal(d, alpha);
  if (method == "mb") return ci_mandel_betensky(d, alpha, ties);
  return ci_gkl(d, alpha, ties);
}

struct Samples {
  std::vector<double> x, y;
};

Samples draw_samples(const ExperimentConfig& c, std::uint64_t kind_id, std::size_t grid, std::size_t rep) {
  const RngStream root(c.master_seed, {kind_id, grid, rep});
  RngStream sx = root.child(0);
  RngStream sy = root.child(1);
  const auto [n, m] = c.n_grid[grid];
  return {sample(c.dist_x, n, sx), sample(c.dist_y, m, sy)};
}

ResultRow proportion_row(const std::string& method, std::size_t n, std::size_t m, const char* metric,
                         std::size_t hits, std::size_t done, std::size_t failures) {
  const double p = done ? static_cast<double>(hits) / static_cast<double>(done) : std::nan("");
  const double se = done ? std::sqrt(p * (1.0 - p) / static_cast<double>(done)) : std::nan("");
  return {method, n, m, metric, p, se, failures};
}

ResultTable run_rejections(const ExperimentConfig& c) {
  validate(c);
  ResultTable table;
  const std::size_t k = c.methods.size();
  for (std::size_t g = 0; g < c.n_grid.size(); ++g) {
    std::vector<Outcome> out(c.reps * k);
    parallel_for(c.reps, c.threads, [&](std::size_t rep) {
      const Samples s = draw_samples(c, kTestingId, g, rep);
      for (std::size_t j = 0; j < k; ++j) out[rep * k + j] = run_test(c.methods[j], s.x, s.y, c.alpha);
    });
    for (std::size_t j = 0; j < k; ++j) {
      std::size_t hits = 0, fails = 0;
      for (std::size_t rep = 0; rep < c.reps; ++rep) {
        const Outcome o = out[rep * k + j];
        if (o < 0) ++fails;
        else hits += static_cast<std::size_t>(o);
      }
      table.rows.push_back(proportion_row(c.methods[j], c.n_grid[g].first, c.n_grid[g].second,
                                          "rejection_rate", hits, c.reps - fails, fails));
    }
  }
  return table;
}

}  // namespace

const ResultRow& ResultTable::find(std::string_view method, std::size_t n, std::size_t m,
                                   std::string_view metric) const {
  for (const ResultRow& r : rows) {
    if (r.method == method && r.n == n && r.m == m && r.metric == metric) return r;
  }
  throw DomainError("ResultTable::find: no row for " + std::string(method) + "/" + std::string(metric));
}

void ResultTable::write_csv(std::ostream& out) const {
  const auto old_precision = out.precision();
  out << "method,n,m,metric,value,se,failures\n" << std::setprecision(10);
  for (const ResultRow& r : rows) {
    out << r.method << ',' << r.n << ',' << r.m << ',' << r.metric << ',' << r.value << ',' << r.se << ','
        << r.failures << '\n';
  }
  out.precision(old_precision);
}

void ResultTable::write_json(std::ostream& out) const {
  nlohmann::json arr = nlohmann::json::array();
  for (const ResultRow& r : rows) {
    arr.push_back({{"method", r.method}, {"n", r.n}, {"m", r.m}, {"metric", r.metric},
                   {"value", std::isfinite(r.value) ? nlohmann::json(r.value) : nlohmann::json(nullptr)},
                   {"se", std::isfinite(r.se) ? nlohmann::json(r.se) : nlohmann::json(nullptr)},
                   {"failures", r.failures}});
  }
  out << arr.dump(2) << '\n';
}

void validate(const ExperimentConfig& c) {
  if (c.reps == 0) throw DomainError("experiment: reps must be >= 1");
  if (!(c.alpha > 0.0 && c.alpha < 1.0)) throw DomainError("experiment: alpha must lie in (0, 1)");
  if (c.n_grid.empty()) throw DomainError("experiment: empty sample-size grid");
  if (c.methods.empty()) throw DomainError("experiment: no methods given");
  const auto& allowed = c.kind == ExperimentKind::Coverage ? kCiMethods : kTestMethods;
  for (const std::string& m : c.methods) {
    if (!contains(allowed, m)) throw DomainError("experiment: unknown method '" + m + "' for this kind");
  }
  for (const auto& [n, m] : c.n_grid) {
    if (n < 2 || m < 2) throw DomainError("experiment: sample sizes must be >= 2");
  }
  if (c.kind == ExperimentKind::Type1 && !(c.dist_x == c.dist_y)) {
    throw DomainError("experiment: type-I runs need dist_x == dist_y");
  }
  if (c.kind == ExperimentKind::Coverage && c.B < 2) throw DomainError("experiment: B must be >= 2");
}

ResultTable run_type1(const ExperimentConfig& config) {
  ExperimentConfig c = config;
  c.kind = ExperimentKind::Type1;
  return run_rejections(c);
}

ResultTable run_power(const ExperimentConfig& config) {
  ExperimentConfig c = config;
  c.kind = ExperimentKind::Power;
  return run_rejections(c);
}

ResultTable run_coverage(const ExperimentConfig& config) {
  ExperimentConfig c = config;
  c.kind = ExperimentKind::Coverage;
  validate(c);
  double true_theta, true_i2;
  if (c.truth) {
    std::tie(true_theta, true_i2) = *c.truth;
  } else {
    const ExactFunctionals e = exact_functionals(c.dist_x, c.dist_y);
    true_theta = e.theta;
    true_i2 = e.i2;
  }
  ResultTable table;
  const std::size_t k = c.methods.size();
  for (std::size_t g = 0; g < c.n_grid.size(); ++g) {
    std::vector<Outcome> covered(c.reps * k);
    std::vector<double> length(c.reps * k, 0.0);
    parallel_for(c.reps, c.threads, [&](std::size_t rep) {
      const Samples s = draw_samples(c, kCoverageId, g, rep);
      const RngStream root(c.master_seed, {kCoverageId, g, rep});
      const BootstrapDraws d = resample_effects(s.x, s.y, c.B, root.child(2), 1);
      const RngStream ties = root.child(3);
      for (std::size_t j = 0; j < k; ++j) {
        try {
          const ConfidenceRegion r = run_ci(c.methods[j], d, c.alpha, ties);
          covered[rep * k + j] = r.contains(true_theta, true_i2) ? 1 : 0;
          length[rep * k + j] = r.euclidean_length();
        } catch (const InapplicableError&) {
          covered[rep * k + j] = -1;
        }
      }
    });
    const auto [n, m] = c.n_grid[g];
    for (std::size_t j = 0; j < k; ++j) {
      std::size_t hits = 0, fails = 0;
      double sum = 0.0, sum2 = 0.0;
      for (std::size_t rep = 0; rep < c.reps; ++rep) {
        const Outcome o = covered[rep * k + j];
        if (o < 0) {
          ++fails;
          continue;
        }
        hits += static_cast<std::size_t>(o);
        sum += length[rep * k + j];
        sum2 += length[rep * k + j] * length[rep * k + j];
      }
      const std::size_t done = c.reps - fails;
      table.rows.push_back(proportion_row(c.methods[j], n, m, "coverage", hits, done, fails));
      const double dn = static_cast<double>(done);
      const double mean = done ? sum / dn : std::nan("");
      const double var = done > 1 ? std::max(0.0, (sum2 - dn * mean * mean) / (dn - 1.0)) : std::nan("");
      table.rows.push_back({c.methods[j], n, m, "length", mean, done > 1 ? std::sqrt(var / dn) : std::nan(""), fails});
    }
  }
  return table;
}

ResultTable run_experiment(const ExperimentConfig& c) {
  switch (c.kind) {
    case ExperimentKind::Type1: return run_type1(c);
    case ExperimentKind::Power: return run_power(c);
    case ExperimentKind::Coverage: return run_coverage(c);
  }
  throw DomainError("run_experiment: unknown kind");
}

std::pair<DistributionSpec, DistributionSpec> benchmark_setting(int index) {
  using D = DistributionSpec;
  switch (index) {
    case 1: return {D::normal(0, 1), D::normal(1, 1)};
    case 2: return {D::normal(0, 2), D::uniform(-0.5, 0.5)};
    case 3: return {D::normal(1, 1), D::exponential(1)};
    case 4: return {D::normal(2, 1), D::exponential(1)};
    case 5: return {D::normal(1, 1), D::uniform(-0.5, 0.5)};
    case 6: return {D::normal(2, 1), D::uniform(-0.5, 0.5)};
    default: break;
  }
  throw DomainError("benchmark_setting: index must be 1..6");
}

int parse_setting(std::string_view text) {
  static const char* roman[] = {"I", "II", "III", "IV", "V", "VI"};
  for (int i = 0; i < 6; ++i) {
    if (text == roman[i] || text == std::to_string(i + 1)) return i + 1;
  }
  throw DomainError("unknown setting '" + std::string(text) + "' (use I..VI)");
}

}  // namespace joint_effect
