#include "joint_effect/distributions.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "joint_effect/errors.hpp"
#include "joint_effect/special_functions.hpp"

namespace joint_effect {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::size_t expected_arity(Family f) {
  switch (f) {
    case Family::Exponential:
    case Family::ChiSquare:
      return 1;
    default:
      return 2;
  }
}

void validate(Family f, const std::vector<double>& p) {
  if (p.size() != expected_arity(f)) {
    throw DomainError(std::string(family_name(f)) + ": expected " +
                      std::to_string(expected_arity(f)) + " parameter(s), got " +
                      std::to_string(p.size()));
  }
  for (double v : p) {
    if (!std::isfinite(v)) throw DomainError(std::string(family_name(f)) + ": non-finite parameter");
  }
  const auto fail = [f](const char* why) {
    throw DomainError(std::string(family_name(f)) + ": " + why);
  };
  switch (f) {
    case Family::Normal:
      if (!(p[1] > 0)) fail("standard deviation must be > 0");
      break;
    case Family::Uniform:
      if (!(p[0] < p[1])) fail("lower bound must be < upper bound");
      break;
    case Family::Exponential:
      if (!(p[0] > 0)) fail("rate must be > 0");
      break;
    case Family::Beta:
      if (!(p[0] > 0 && p[1] > 0)) fail("shapes must be > 0");
      break;
    case Family::Cauchy:
      if (!(p[1] > 0)) fail("scale must be > 0");
      break;
    case Family::ChiSquare:
      if (!(p[0] >= 1 && std::floor(p[0]) == p[0])) fail("df must be an integer >= 1");
      break;
  }
}

// Marsaglia-Tsang gamma(shape, 1) sampler.
double draw_gamma(double shape, RngStream& rng) {
  if (shape < 1.0) {
    const double g = draw_gamma(shape + 1.0, rng);
    return g * std::pow(rng.next_uniform(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    const double z = special::normal_quantile(rng.next_uniform());
    double v = 1.0 + c * z;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = rng.next_uniform();
    if (std::log(u) < 0.5 * z * z + d - d * v + d * std::log(v)) return d * v;
  }
}

double parse_number(std::string_view token, std::string_view whole) {
  double v = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (!token.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || token.empty()) {
    throw DomainError("invalid number '" + std::string(token) + "' in distribution spec '" +
                      std::string(whole) + "'");
  }
  return v;
}

}  // namespace

std::string_view family_name(Family f) {
  switch (f) {
    case Family::Normal: return "normal";
    case Family::Uniform: return "uniform";
    case Family::Exponential: return "exp";
    case Family::Beta: return "beta";
    case Family::Cauchy: return "cauchy";
    case Family::ChiSquare: return "chisq";
  }
  return "?";
}

DistributionSpec::DistributionSpec(Family family, std::vector<double> params)
    : family_(family), params_(std::move(params)) {
  validate(family_, params_);
}

DistributionSpec DistributionSpec::normal(double mean, double sd) { return {Family::Normal, {mean, sd}}; }
DistributionSpec DistributionSpec::uniform(double lower, double upper) { return {Family::Uniform, {lower, upper}}; }
DistributionSpec DistributionSpec::exponential(double rate) { return {Family::Exponential, {rate}}; }
DistributionSpec DistributionSpec::beta(double a, double b) { return {Family::Beta, {a, b}}; }
DistributionSpec DistributionSpec::cauchy(double location, double scale) { return {Family::Cauchy, {location, scale}}; }
DistributionSpec DistributionSpec::chi_square(double df) { return {Family::ChiSquare, {df}}; }

DistributionSpec DistributionSpec::parse(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw DomainError("distribution spec '" + std::string(text) + "' lacks ':'");
  }
  const std::string_view name = text.substr(0, colon);
  Family family;
  if (name == "normal") family = Family::Normal;
  else if (name == "uniform") family = Family::Uniform;
  else if (name == "exp") family = Family::Exponential;
  else if (name == "beta") family = Family::Beta;
  else if (name == "cauchy") family = Family::Cauchy;
  else if (name == "chisq") family = Family::ChiSquare;
  else throw DomainError("unknown distribution family '" + std::string(name) + "'");

  std::vector<double> params;
  std::string_view rest = text.substr(colon + 1);
  for (;;) {
    const auto comma = rest.find(',');
    params.push_back(parse_number(rest.substr(0, comma), text));
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  try {
    return DistributionSpec(family, std::move(params));
  } catch (const DomainError& e) {
    throw DomainError("distribution spec '" + std::string(text) + "': " + e.what());
  }
}

std::string DistributionSpec::to_string() const {
  std::ostringstream os;
  os.precision(17);
  os << family_name(family_) << ':';
  for (std::size_t i = 0; i < params_.size(); ++i) os << (i ? "," : "") << params_[i];
  return os.str();
}

double DistributionSpec::cdf(double x) const {
  if (std::isnan(x)) throw DomainError("cdf: NaN argument");
  const auto& p = params_;
  switch (family_) {
    case Family::Normal:
      return special::normal_cdf((x - p[0]) / p[1]);
    case Family::Uniform:
      if (x <= p[0]) return 0.0;
      if (x >= p[1]) return 1.0;
      return (x - p[0]) / (p[1] - p[0]);
    case Family::Exponential:
      return x <= 0.0 ? 0.0 : -std::expm1(-p[0] * x);
    case Family::Beta:
      return special::beta_inc(p[0], p[1], x);
    case Family::Cauchy:
      return 0.5 + std::atan((x - p[0]) / p[1]) / std::numbers::pi;
    case Family::ChiSquare:
      return x <= 0.0 ? 0.0 : special::gamma_p(0.5 * p[0], 0.5 * x);
  }
  return 0.0;
}

double DistributionSpec::pdf(double x) const {
  const auto& p = params_;
  switch (family_) {
    case Family::Normal:
      return special::normal_pdf((x - p[0]) / p[1]) / p[1];
    case Family::Uniform:
      return (x < p[0] || x > p[1]) ? 0.0 : 1.0 / (p[1] - p[0]);
    case Family::Exponential:
      return x < 0.0 ? 0.0 : p[0] * std::exp(-p[0] * x);
    case Family::Beta: {
      if (x < 0.0 || x > 1.0) return 0.0;
      if ((x == 0.0 && p[0] < 1.0) || (x == 1.0 && p[1] < 1.0)) return kInf;
      if ((x == 0.0 && p[0] > 1.0) || (x == 1.0 && p[1] > 1.0)) return 0.0;
      const double log_b = std::lgamma(p[0]) + std::lgamma(p[1]) - std::lgamma(p[0] + p[1]);
      const double lx = x == 0.0 ? 0.0 : (p[0] - 1.0) * std::log(x);
      const double l1x = x == 1.0 ? 0.0 : (p[1] - 1.0) * std::log1p(-x);
      return std::exp(lx + l1x - log_b);
    }
    case Family::Cauchy: {
      const double z = (x - p[0]) / p[1];
      return 1.0 / (std::numbers::pi * p[1] * (1.0 + z * z));
    }
    case Family::ChiSquare: {
      if (x < 0.0) return 0.0;
      const double k = 0.5 * p[0];
      if (x == 0.0) return k < 1.0 ? kInf : (k == 1.0 ? 0.5 : 0.0);
      return std::exp((k - 1.0) * std::log(x) - 0.5 * x - k * std::numbers::ln2 - std::lgamma(k));
    }
  }
  return 0.0;
}

double DistributionSpec::quantile(double prob) const {
  if (!(prob > 0.0 && prob < 1.0)) throw DomainError("quantile: p must lie in (0, 1)");
  const auto& p = params_;
  switch (family_) {
    case Family::Normal:
      return p[0] + p[1] * special::normal_quantile(prob);
    case Family::Uniform:
      return p[0] + prob * (p[1] - p[0]);
    case Family::Exponential:
      return -std::log1p(-prob) / p[0];
    case Family::Cauchy:
      return p[0] + p[1] * std::tan(std::numbers::pi * (prob - 0.5));
    case Family::Beta: {
      const double mean = p[0] / (p[0] + p[1]);
      return invert_cdf(prob, mean, 0.0, 1.0);
    }
    case Family::ChiSquare: {
      // Wilson-Hilferty starting point.
      const double k = p[0];
      const double z = special::normal_quantile(prob);
      const double h = 2.0 / (9.0 * k);
      const double wh = k * std::pow(std::max(1.0 - h + z * std::sqrt(h), 1e-3), 3.0);
      double hi = std::max(2.0 * wh, k + 10.0);
      while (cdf(hi) < prob) hi *= 2.0;
      return invert_cdf(prob, wh, 0.0, hi);
    }
  }
  return 0.0;
}

// Bracketed Newton: a Newton step is taken when it stays inside the current
// bracket, otherwise the bracket is bisected.
double DistributionSpec::invert_cdf(double prob, double guess, double lo, double hi) const {
  double x = (guess > lo && guess < hi) ? guess : 0.5 * (lo + hi);
  for (int iter = 0; iter < 400; ++iter) {
    const double f = cdf(x) - prob;
    if (f == 0.0) return x;
    if (f < 0.0) lo = x;
    else hi = x;
    const double dens = pdf(x);
    double next = (dens > 0.0 && std::isfinite(dens)) ? x - f / dens : lo - 1.0;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    // Relative stopping rule: quantiles near 0 can be far below epsilon.
    const double scale = std::max(std::abs(x), std::numeric_limits<double>::min());
    if (std::abs(next - x) <= 4.0 * std::numeric_limits<double>::epsilon() * scale ||
        hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * scale) {
      return next;
    }
    x = next;
  }
  return x;
}

double draw(const DistributionSpec& d, RngStream& rng) {
  const auto& p = d.params();
  switch (d.family()) {
    case Family::Normal:
      return p[0] + p[1] * special::normal_quantile(rng.next_uniform());
    case Family::Uniform:
      return p[0] + (p[1] - p[0]) * rng.next_uniform();
    case Family::Exponential:
      return -std::log(rng.next_uniform()) / p[0];
    case Family::Cauchy:
      return d.quantile(rng.next_uniform());
    case Family::Beta: {
      const double a = draw_gamma(p[0], rng);
      const double b = draw_gamma(p[1], rng);
      return a / (a + b);
    }
    case Family::ChiSquare:
      return 2.0 * draw_gamma(0.5 * p[0], rng);
  }
  return 0.0;
}

std::vector<double> sample(const DistributionSpec& d, std::size_t n, RngStream& rng) {
  if (n == 0) throw DomainError("sample: n must be >= 1");
  std::vector<double> out(n);
  for (auto& v : out) v = draw(d, rng);
  return out;
}

}  // namespace joint_effect
