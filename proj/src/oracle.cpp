#include "joint_effect/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <string>

#include "joint_effect/errors.hpp"
#include "joint_effect/parallel.hpp"
#include "joint_effect/quadrature.hpp"

namespace joint_effect {

namespace {

constexpr double kRequestedTol = 1e-10;
constexpr double kGuaranteedTol = 1e-6;

struct Support {
  double lo, hi;
};

Support support_of(const DistributionSpec& d) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  const auto& p = d.params();
  switch (d.family()) {
    case Family::Uniform: return {p[0], p[1]};
    case Family::Exponential:
    case Family::ChiSquare: return {0.0, inf};
    case Family::Beta: return {0.0, 1.0};
    case Family::Normal:
    case Family::Cauchy: break;
  }
  return {-inf, inf};
}

// Quadrature nodes can round onto 0 or 1.
double inner_quantile(const DistributionSpec& d, double t) {
  constexpr double lo = std::numeric_limits<double>::min();
  const double hi = std::nextafter(1.0, 0.0);
  return d.quantile(std::clamp(t, lo, hi));
}

// Points in (0, 1) where G o F^{-1} may have a kink: F at the support ends of G.
std::vector<double> kinks(const DistributionSpec& f, const DistributionSpec& g) {
  std::vector<double> out{0.5, f.cdf(g.median())};
  const Support s = support_of(g);
  for (double e : {s.lo, s.hi}) {
    if (std::isfinite(e)) out.push_back(f.cdf(e));
  }
  return out;
}

Integral integrate_unit(const std::function<double(double)>& fn, const std::vector<double>& cuts) {
  return integrate_piecewise(fn, 0.0, 1.0, cuts, kRequestedTol);
}

void check(const Integral& r, const char* what) {
  if (!(r.error <= kGuaranteedTol) || !std::isfinite(r.value)) {
    throw AccuracyError(std::string(what) + ": quadrature error estimate " +
                            std::to_string(r.error) + " exceeds 1e-6",
                        r.error);
  }
}

struct HalfIntegrals {
  Integral lower;  // over [0, 1/2]
  Integral upper;  // over [1/2, 1]
};

HalfIntegrals composed_halves(const DistributionSpec& f, const DistributionSpec& g) {
  const auto h = [&](double t) { return g.cdf(inner_quantile(f, t)); };
  const std::vector<double> cuts = kinks(f, g);
  HalfIntegrals out;
  out.lower = integrate_piecewise(h, 0.0, 0.5, cuts, kRequestedTol);
  out.upper = integrate_piecewise(h, 0.5, 1.0, cuts, kRequestedTol);
  return out;
}

// Covariance matrix of (u1(V), u2(V)), V ~ U(0, 1).
struct Cov2 {
  double v11, v22, v12, error;
};

Cov2 star_cov(const std::function<double(double)>& u1, const std::function<double(double)>& u2,
              const std::vector<double>& cuts) {
  const Integral m1 = integrate_unit(u1, cuts);
  const Integral m2 = integrate_unit(u2, cuts);
  const Integral s11 = integrate_unit([&](double t) { const double v = u1(t); return v * v; }, cuts);
  const Integral s22 = integrate_unit([&](double t) { const double v = u2(t); return v * v; }, cuts);
  const Integral s12 = integrate_unit([&](double t) { return u1(t) * u2(t); }, cuts);
  for (const Integral* r : {&m1, &m2, &s11, &s22, &s12}) check(*r, "asymptotic_cov");
  const double err = std::max({m1.error, m2.error, s11.error, s22.error, s12.error});
  return {s11.value - m1.value * m1.value, s22.value - m2.value * m2.value,
          s12.value - m1.value * m2.value, err};
}

}  // namespace

ExactFunctionals exact_functionals(const DistributionSpec& f, const DistributionSpec& g) {
  const HalfIntegrals fg = composed_halves(f, g);
  const HalfIntegrals gf = composed_halves(g, f);
  ExactFunctionals e{};
  e.theta = 1.0 - (fg.lower.value + fg.upper.value);
  e.theta_err = fg.lower.error + fg.upper.error;
  e.i2 = 2.0 * (fg.upper.value - fg.lower.value);
  e.i2_err = 2.0 * e.theta_err;
  e.i1 = 2.0 * (gf.upper.value - gf.lower.value);
  e.i1_err = 2.0 * (gf.lower.error + gf.upper.error);
  for (double err : {e.theta_err, e.i2_err, e.i1_err}) {
    if (!(err <= kGuaranteedTol)) {
      throw AccuracyError("exact_functionals: quadrature error estimate " + std::to_string(err) +
                              " exceeds 1e-6",
                          err);
    }
  }
  return e;
}

double exact_theta(const DistributionSpec& f, const DistributionSpec& g) {
  const HalfIntegrals r = composed_halves(f, g);
  check({r.lower.value + r.upper.value, r.lower.error + r.upper.error}, "exact_theta");
  return 1.0 - (r.lower.value + r.upper.value);
}

double exact_i2(const DistributionSpec& f, const DistributionSpec& g) {
  const HalfIntegrals r = composed_halves(f, g);
  check({r.upper.value - r.lower.value, 2.0 * (r.lower.error + r.upper.error)}, "exact_i2");
  return 2.0 * (r.upper.value - r.lower.value);
}

double exact_i1(const DistributionSpec& f, const DistributionSpec& g) { return exact_i2(g, f); }

AsymptoticCov asymptotic_cov(const DistributionSpec& f, const DistributionSpec& g, double nu) {
  if (!(nu > 0.0) || !std::isfinite(nu)) throw DomainError("asymptotic_cov: nu must be positive");

  const auto h = [&](double t) { return g.cdf(inner_quantile(f, t)); };
  const double c = g.cdf(f.median());
  const Cov2 sx = star_cov([&](double t) { return -h(t); },
                           [&](double t) { return 2.0 * std::abs(h(t) - c); }, kinks(f, g));

  const auto k = [&](double t) { return f.cdf(inner_quantile(g, t)); };
  std::vector<double> cuts_y = kinks(g, f);
  cuts_y.push_back(c);  // k(t) crosses 1/2 at t = G(F^{-1}(1/2))
  const Cov2 sy = star_cov(k, [&](double t) { const double v = k(t); return 2.0 * std::min(v, 1.0 - v); },
                           cuts_y);

  return {sx.v11 + nu * sy.v11, sx.v22 + nu * sy.v22, sx.v12 + nu * sy.v12, nu,
          std::max(sx.error, sy.error)};
}

std::vector<GridRow> functional_grid(double mu_lo, double mu_hi, std::size_t mu_steps,
                                     double sigma_lo, double sigma_hi, std::size_t sigma_steps,
                                     unsigned threads) {
  if (mu_steps == 0 || sigma_steps == 0) throw DomainError("functional_grid: steps must be >= 1");
  if (!(sigma_lo > 0.0) || !(sigma_hi >= sigma_lo) || !(mu_hi >= mu_lo)) {
    throw DomainError("functional_grid: need mu_lo <= mu_hi and 0 < sigma_lo <= sigma_hi");
  }
  const auto at = [](double lo, double hi, std::size_t steps, std::size_t i) {
    return steps == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1);
  };
  std::vector<GridRow> rows(mu_steps * sigma_steps);
  const DistributionSpec f = DistributionSpec::normal(0.0, 1.0);
  parallel_for(rows.size(), threads, [&](std::size_t idx) {
    const double mu = at(mu_lo, mu_hi, mu_steps, idx / sigma_steps);
    const double sigma = at(sigma_lo, sigma_hi, sigma_steps, idx % sigma_steps);
    const ExactFunctionals e = exact_functionals(f, DistributionSpec::normal(mu, sigma));
    rows[idx] = {mu, sigma, e.theta, e.i1, e.i2};
  });
  return rows;
}

void write_grid_csv(std::ostream& out, const std::vector<GridRow>& rows) {
  const auto old_flags = out.flags();
  const auto old_precision = out.precision();
  out << "mu,sigma,theta,i1,i2\n" << std::setprecision(10);
  for (const GridRow& r : rows) {
    out << r.mu << ',' << r.sigma << ',' << r.theta << ',' << r.i1 << ',' << r.i2 << '\n';
  }
  out.flags(old_flags);
  out.precision(old_precision);
}

}  // namespace joint_effect
