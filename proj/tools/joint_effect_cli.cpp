// joint-effect: command-line front end for the relative effect / overlap index
// library. Exit codes: 0 success, 2 bad input, 3 method inapplicable,
// 4 numerical accuracy failure.

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "joint_effect/bootstrap.hpp"
#include "joint_effect/distributions.hpp"
#include "joint_effect/effects.hpp"
#include "joint_effect/errors.hpp"
#include "joint_effect/inference.hpp"
#include "joint_effect/oracle.hpp"
#include "joint_effect/parallel.hpp"
#include "joint_effect/simlab.hpp"

namespace je = joint_effect;
using nlohmann::json;

namespace {

constexpr int kExitData = 2;
constexpr int kExitInapplicable = 3;
constexpr int kExitAccuracy = 4;

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

double parse_number(const std::string& token, const std::string& where) {
  const std::string t = trim(token);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) {
    throw je::DomainError(where + ": not a number: '" + t + "'");
  }
  return v;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw je::DomainError("cannot open '" + path + "'");
  return in;
}

std::vector<double> read_values(const std::string& path) {
  std::ifstream in = open_input(path);
  std::vector<double> out;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    out.push_back(parse_number(line, path + ":" + std::to_string(lineno)));
  }
  if (out.empty()) throw je::DomainError(path + ": no values");
  return out;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

struct DataOptions {
  std::string x_file, y_file, data_file;
  std::string group_col = "group", value_col = "value";
  std::string x_group, y_group;
};

struct Dataset {
  std::vector<double> x, y;
};

Dataset read_csv_groups(const DataOptions& o) {
  std::ifstream in = open_input(o.data_file);
  std::string line;
  if (!std::getline(in, line)) throw je::DomainError(o.data_file + ": empty file");
  const std::vector<std::string> header = split_csv(line);
  const auto column = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw je::DomainError(o.data_file + ": no column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t gc = column(o.group_col);
  const std::size_t vc = column(o.value_col);
  std::vector<std::string> order;
  std::map<std::string, std::vector<double>> groups;
  for (std::size_t lineno = 2; std::getline(in, line); ++lineno) {
    if (trim(line).empty() || trim(line)[0] == '#') continue;
    const std::vector<std::string> cells = split_csv(line);
    const std::string where = o.data_file + ":" + std::to_string(lineno);
    if (cells.size() <= std::max(gc, vc)) throw je::DomainError(where + ": too few columns");
    const std::string& g = cells[gc];
    if (!groups.count(g)) order.push_back(g);
    groups[g].push_back(parse_number(cells[vc], where));
  }
  const std::string xg = o.x_group.empty() ? (order.size() > 0 ? order[0] : "") : o.x_group;
  const std::string yg = o.y_group.empty() ? (order.size() > 1 ? order[1] : "") : o.y_group;
  if (o.x_group.empty() && o.y_group.empty() && order.size() != 2) {
    throw je::DomainError(o.data_file + ": expected exactly two groups, found " + std::to_string(order.size()) +
                          " (use --x-group/--y-group)");
  }
  if (!groups.count(xg) || !groups.count(yg)) throw je::DomainError(o.data_file + ": group not found");
  return {groups[xg], groups[yg]};
}

Dataset load(const DataOptions& o) {
  if (!o.data_file.empty()) return read_csv_groups(o);
  if (o.x_file.empty() || o.y_file.empty()) throw je::DomainError("give --x and --y, or --data");
  return {read_values(o.x_file), read_values(o.y_file)};
}

void add_data_options(CLI::App* cmd, DataOptions& o) {
  cmd->add_option("--x", o.x_file, "file with the X sample, one value per line");
  cmd->add_option("--y", o.y_file, "file with the Y sample, one value per line");
  cmd->add_option("--data", o.data_file, "CSV file holding both samples");
  cmd->add_option("--group-col", o.group_col, "group column of --data")->capture_default_str();
  cmd->add_option("--value-col", o.value_col, "value column of --data")->capture_default_str();
  cmd->add_option("--x-group", o.x_group, "group label used as X (default: first seen)");
  cmd->add_option("--y-group", o.y_group, "group label used as Y (default: second seen)");
}

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(6) << v;
  return s.str();
}

json estimates_json(const je::EffectEstimates& e) {
  json j{{"theta", e.theta}, {"i1", e.i1}, {"i2", e.i2}, {"n", e.n}, {"m", e.m}};
  j["theta_adj"] = e.theta_adj ? json(*e.theta_adj) : json(nullptr);
  j["i2_adj"] = e.i2_adj ? json(*e.i2_adj) : json(nullptr);
  return j;
}

void print(const json& j, const std::string& format, const std::string& title) {
  if (format == "json") {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::cout << title << '\n';
  const std::function<void(const json&, const std::string&)> walk = [&](const json& node, const std::string& prefix) {
    for (auto it = node.begin(); it != node.end(); ++it) {
      const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
      if (it->is_object()) {
        walk(*it, key);
      } else if (it->is_number_float()) {
        std::cout << "  " << key << ": " << fmt(it->get<double>()) << '\n';
      } else if (it->is_array()) {
        std::cout << "  " << key << ":";
        for (const json& v : *it) std::cout << ' ' << (v.is_number_float() ? fmt(v.get<double>()) : v.dump());
        std::cout << '\n';
      } else {
        std::cout << "  " << key << ": " << (it->is_string() ? it->get<std::string>() : it->dump()) << '\n';
      }
    }
  };
  walk(j, "");
}

// ---------------------------------------------------------------- test

struct TestArgs {
  DataOptions data;
  std::string method = "new";
  double alpha = 0.05;
  std::string format = "text";
  std::string rule = "max";
  bool no_continuity = false;
  bool no_ties = false;
};

int cmd_test(const TestArgs& a) {
  const Dataset d = load(a.data);
  je::TestReport r;
  std::vector<std::string> names;
  if (a.method == "new") {
    r = je::new_joint_test(d.x, d.y, a.alpha, a.rule == "chisq" ? je::JointRule::ChiSquare : je::JointRule::MaxType);
    names = {"z_theta", "z_i2"};
  } else if (a.method == "adjusted") {
    r = je::adjusted_joint_test(d.x, d.y, a.alpha);
    names = {"v_theta", "v_i2", "z_theta", "z_i2", "rho"};
  } else if (a.method == "wmw") {
    r = je::wmw_test(d.x, d.y, a.alpha, {!a.no_continuity, !a.no_ties});
    names = {"U", "z"};
  } else if (a.method == "ks") {
    r = je::ks_test(d.x, d.y, a.alpha);
    names = {"D"};
  } else {
    r = je::cvm_test(d.x, d.y, a.alpha);
    names = {"T", "T_normalized"};
  }
  json stats = json::object();
  for (std::size_t i = 0; i < names.size(); ++i) stats[names[i]] = r.stats[i];
  json out{{"method", std::string(je::method_name(r.method))},
           {"statistics", stats},
           {"p_value", r.p_value},
           {"alpha", r.alpha},
           {"reject", r.reject},
           {"estimates", estimates_json(je::estimate_effects(d.x, d.y))}};
  print(out, a.format, "test");
  return 0;
}

// ---------------------------------------------------------------- ci

struct CiArgs {
  DataOptions data;
  std::string method = "mvn";
  std::size_t B = 1000;
  std::uint64_t seed = 1;
  double alpha = 0.05;
  bool range_preserve = false;
  std::string orientation = "percentile";
  std::string format = "text";
  unsigned threads = 0;
};

int cmd_ci(const CiArgs& a) {
  const Dataset d = load(a.data);
  const je::RngStream root(a.seed);
  const je::BootstrapDraws draws = je::resample_effects(d.x, d.y, a.B, root.child(0), je::resolve_threads(a.threads));
  const je::RngStream ties = root.child(1);
  je::ConfidenceRegion r;
  if (a.method == "mvn") r = je::ci_mvn(draws, a.alpha);
  else if (a.method == "bonf-quantile")
    r = je::ci_bonf_quantile(draws, a.alpha,
                             a.orientation == "basic" ? je::QuantileOrientation::Basic
                                                      : je::QuantileOrientation::Percentile);
  else if (a.method == "bonf-normal") r = je::ci_bonf_normal(draws, a.alpha);
  else if (a.method == "mb") r = je::ci_mandel_betensky(draws, a.alpha, ties);
  else r = je::ci_gkl(draws, a.alpha, ties);
  if (a.range_preserve) r = je::range_preserve(r);

  json region{{"kind", r.kind == je::RegionKind::Ellipse ? "ellipse" : "rectangle"},
              {"rectangle",
               {{"theta_lo", r.rect.theta_lo}, {"theta_hi", r.rect.theta_hi},
                {"i2_lo", r.rect.i2_lo}, {"i2_hi", r.rect.i2_hi}}},
              {"clipped", r.clipped},
              {"fallback", r.fallback},
              {"euclidean_length", r.euclidean_length()}};
  if (r.ellipse) {
    const je::Ellipse& e = *r.ellipse;
    region["ellipse"] = {{"center", {e.center[0], e.center[1]}},
                         {"covariance", {{e.cov[0][0], e.cov[0][1]}, {e.cov[1][0], e.cov[1][1]}}},
                         {"radius", e.radius}};
  } else {
    region["ellipse"] = nullptr;
  }
  json out{{"method", r.method}, {"level", r.level}, {"alpha", a.alpha}, {"B", a.B},
           {"seed", a.seed},     {"estimates", estimates_json(draws.origin)}, {"region", region}};
  print(out, a.format, "confidence region");
  return 0;
}

// ---------------------------------------------------------------- oracle

struct OracleArgs {
  std::string dist_x, dist_y;
  double nu = 1.0;
  std::string format = "text";
};

int cmd_oracle(const OracleArgs& a) {
  const auto f = je::DistributionSpec::parse(a.dist_x);
  const auto g = je::DistributionSpec::parse(a.dist_y);
  const je::ExactFunctionals e = je::exact_functionals(f, g);
  const je::AsymptoticCov c = je::asymptotic_cov(f, g, a.nu);
  json out{{"dist_x", f.to_string()},
           {"dist_y", g.to_string()},
           {"theta", e.theta},
           {"i1", e.i1},
           {"i2", e.i2},
           {"errors", {{"theta", e.theta_err}, {"i1", e.i1_err}, {"i2", e.i2_err}}},
           {"asymptotic_cov", {{"nu", c.nu}, {"var_theta", c.var_theta}, {"var_i2", c.var_i2}, {"cov", c.cov}}}};
  print(out, a.format, "exact functionals");
  return 0;
}

// ---------------------------------------------------------------- grid

struct Range {
  double lo, hi;
  std::size_t steps;
};

Range parse_range(const std::string& text, const char* flag) {
  const auto parts = [&] {
    std::vector<std::string> p;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) p.push_back(item);
    return p;
  }();
  if (parts.size() != 3) throw je::DomainError(std::string(flag) + ": expected LO:HI:STEPS, got '" + text + "'");
  const double steps = parse_number(parts[2], flag);
  if (steps < 1 || steps != std::floor(steps)) throw je::DomainError(std::string(flag) + ": bad step count");
  return {parse_number(parts[0], flag), parse_number(parts[1], flag), static_cast<std::size_t>(steps)};
}

struct GridArgs {
  std::string mu = "-5:5:101";
  std::string sigma = "0.01:5:100";
  std::string output;
  unsigned threads = 0;
};

int cmd_grid(const GridArgs& a) {
  const Range mu = parse_range(a.mu, "--mu");
  const Range sg = parse_range(a.sigma, "--sigma");
  const auto rows = je::functional_grid(mu.lo, mu.hi, mu.steps, sg.lo, sg.hi, sg.steps, je::resolve_threads(a.threads));
  if (a.output.empty()) {
    je::write_grid_csv(std::cout, rows);
  } else {
    std::ofstream out(a.output);
    if (!out) throw je::DomainError("cannot write '" + a.output + "'");
    je::write_grid_csv(out, rows);
  }
  return 0;
}

// ---------------------------------------------------------------- simulate

struct SimArgs {
  std::string experiment = "type1";
  std::string setting;
  std::string dist_x = "normal:0,1";
  std::string dist_y;
  std::vector<std::size_t> n{50};
  std::vector<std::size_t> m;
  std::size_t reps = 1000;
  std::size_t B = 1000;
  std::uint64_t seed = 1;
  double alpha = 0.05;
  std::vector<std::string> methods;
  std::string format = "csv";
  unsigned threads = 0;
};

int cmd_simulate(const SimArgs& a) {
  je::ExperimentConfig c;
  if (a.experiment == "type1") c.kind = je::ExperimentKind::Type1;
  else if (a.experiment == "power") c.kind = je::ExperimentKind::Power;
  else c.kind = je::ExperimentKind::Coverage;
  if (!a.setting.empty()) {
    std::tie(c.dist_x, c.dist_y) = je::benchmark_setting(je::parse_setting(a.setting));
  } else {
    c.dist_x = je::DistributionSpec::parse(a.dist_x);
    c.dist_y = a.dist_y.empty() ? c.dist_x : je::DistributionSpec::parse(a.dist_y);
  }
  if (!a.m.empty() && a.m.size() != a.n.size()) throw je::DomainError("--m must list as many sizes as --n");
  c.n_grid.clear();
  for (std::size_t i = 0; i < a.n.size(); ++i) c.n_grid.emplace_back(a.n[i], a.m.empty() ? a.n[i] : a.m[i]);
  c.reps = a.reps;
  c.B = a.B;
  c.master_seed = a.seed;
  c.alpha = a.alpha;
  c.threads = je::resolve_threads(a.threads);
  c.methods = a.methods;
  if (c.methods.empty()) {
    c.methods = c.kind == je::ExperimentKind::Coverage
                    ? std::vector<std::string>{"mvn", "bonf-quantile", "bonf-normal", "mb", "gkl"}
                    : std::vector<std::string>{"new", "adjusted", "wmw", "ks", "cvm"};
  }
  const je::ResultTable t = je::run_experiment(c);
  if (a.format == "json") t.write_json(std::cout);
  else t.write_csv(std::cout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joint inference for the relative effect and the overlap index"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML configuration file (sections per subcommand)");

  TestArgs test_args;
  auto* test = app.add_subcommand("test", "test H0: F = G");
  add_data_options(test, test_args.data);
  test->add_option("--method", test_args.method)->check(CLI::IsMember({"new", "adjusted", "wmw", "ks", "cvm"}))->capture_default_str();
  test->add_option("--alpha", test_args.alpha)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  test->add_option("--format", test_args.format)->check(CLI::IsMember({"json", "text"}))->capture_default_str();
  test->add_option("--joint-rule", test_args.rule, "p-value rule of the new joint test")->check(CLI::IsMember({"max", "chisq"}))->capture_default_str();
  test->add_flag("--no-continuity", test_args.no_continuity, "WMW without continuity correction");
  test->add_flag("--no-tie-correction", test_args.no_ties, "WMW without tie-corrected variance");

  CiArgs ci_args;
  auto* ci = app.add_subcommand("ci", "simultaneous bootstrap confidence region for (theta, I2)");
  add_data_options(ci, ci_args.data);
  ci->add_option("--method", ci_args.method)->check(CLI::IsMember({"mvn", "bonf-quantile", "bonf-normal", "mb", "gkl"}))->capture_default_str();
  ci->add_option("-B", ci_args.B, "bootstrap replications")->check(CLI::Range(std::size_t{100}, std::size_t{10000000}))->capture_default_str();
  ci->add_option("--seed", ci_args.seed)->capture_default_str();
  ci->add_option("--alpha", ci_args.alpha)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  ci->add_flag("--range-preserve", ci_args.range_preserve, "clip to the feasible (theta, I2) region");
  ci->add_option("--orientation", ci_args.orientation, "bonf-quantile orientation")->check(CLI::IsMember({"basic", "percentile"}))->capture_default_str();
  ci->add_option("--format", ci_args.format)->check(CLI::IsMember({"json", "text"}))->capture_default_str();
  ci->add_option("--threads", ci_args.threads, "worker threads (default $JOINT_EFFECT_THREADS or all cores)");

  OracleArgs oracle_args;
  auto* oracle = app.add_subcommand("oracle", "exact functionals and asymptotic covariance by quadrature");
  oracle->add_option("--dist-x", oracle_args.dist_x, "e.g. normal:0,1 (mean, sd)")->required();
  oracle->add_option("--dist-y", oracle_args.dist_y, "e.g. exp:1")->required();
  oracle->add_option("--nu", oracle_args.nu, "limit of n/m")->capture_default_str();
  oracle->add_option("--format", oracle_args.format)->check(CLI::IsMember({"json", "text"}))->capture_default_str();

  GridArgs grid_args;
  auto* grid = app.add_subcommand("grid", "functionals of N(0,1) vs N(mu, sigma) over a grid, as CSV");
  grid->add_option("--mu", grid_args.mu, "LO:HI:STEPS")->capture_default_str();
  grid->add_option("--sigma", grid_args.sigma, "LO:HI:STEPS (standard deviations)")->capture_default_str();
  grid->add_option("--output", grid_args.output, "CSV file (default stdout)");
  grid->add_option("--threads", grid_args.threads);

  SimArgs sim_args;
  auto* sim = app.add_subcommand("simulate", "Monte Carlo type-I error, power or coverage");
  sim->add_option("--experiment", sim_args.experiment)->check(CLI::IsMember({"type1", "power", "coverage"}))->capture_default_str();
  sim->add_option("--setting", sim_args.setting, "benchmark pair I..VI (overrides --dist-x/--dist-y)");
  sim->add_option("--dist-x", sim_args.dist_x)->capture_default_str();
  sim->add_option("--dist-y", sim_args.dist_y, "default: same as --dist-x");
  sim->add_option("--n", sim_args.n, "X sample sizes")->delimiter(',')->capture_default_str();
  sim->add_option("--m", sim_args.m, "Y sample sizes (default: equal to --n)")->delimiter(',');
  sim->add_option("--reps", sim_args.reps)->capture_default_str();
  sim->add_option("--B", sim_args.B, "bootstrap replications (coverage)")->capture_default_str();
  sim->add_option("--seed", sim_args.seed)->capture_default_str();
  sim->add_option("--alpha", sim_args.alpha)->capture_default_str();
  sim->add_option("--methods", sim_args.methods, "comma-separated method tags")->delimiter(',');
  sim->add_option("--format", sim_args.format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  sim->add_option("--threads", sim_args.threads);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitData;
  }

  try {
    if (*test) return cmd_test(test_args);
    if (*ci) return cmd_ci(ci_args);
    if (*oracle) return cmd_oracle(oracle_args);
    if (*grid) return cmd_grid(grid_args);
    if (*sim) return cmd_simulate(sim_args);
  } catch (const je::InapplicableError& e) {
    std::cerr << "inapplicable: " << e.what() << '\n';
    return kExitInapplicable;
  } catch (const je::EmptyRegionError& e) {
    std::cerr << "inapplicable: " << e.what() << '\n';
    return kExitInapplicable;
  } catch (const je::AccuracyError& e) {
    std::cerr << "accuracy: " << e.what() << '\n';
    return kExitAccuracy;
  } catch (const je::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return 0;
}
