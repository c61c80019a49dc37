#include "joint_effect/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/tools/roots.hpp>

#include "joint_effect/errors.hpp"
#include "joint_effect/parallel.hpp"
#include "joint_effect/quadrature.hpp"
#include "joint_effect/special_functions.hpp"

namespace joint_effect {

using special::normal_cdf;
using special::normal_pdf;
using special::normal_quantile;

double bvn_rect(double c, double rho) {
  if (!(c > 0.0)) return 0.0;
  if (std::isinf(c)) return 1.0;
  if (!(rho >= -1.0 && rho <= 1.0)) throw DomainError("bvn_rect: rho must lie in [-1, 1]");
  const double s2 = 1.0 - rho * rho;
  if (s2 < 1e-14) return 2.0 * normal_cdf(c) - 1.0;
  const double s = std::sqrt(s2);
  const auto inner = [&](double z) {
    return normal_pdf(z) * (normal_cdf((c - rho * z) / s) - normal_cdf((-c - rho * z) / s));
  };
  const double cuts[] = {0.0};
  return std::clamp(integrate_piecewise(inner, -c, c, cuts, 1e-12).value, 0.0, 1.0);
}

double equicoordinate_quantile(double level, double rho) {
  if (!(level > 0.0 && level < 1.0)) throw DomainError("equicoordinate_quantile: level must lie in (0, 1)");
  // Bracketed by perfect dependence and by Bonferroni.
  double lo = normal_quantile(0.5 + level / 2.0);
  double hi = normal_quantile(1.0 - (1.0 - level) / 4.0) + 1e-9;
  const auto f = [&](double c) { return bvn_rect(c, rho) - level; };
  if (f(lo) >= 0.0) return lo;
  boost::uintmax_t iters = 100;
  const auto root = boost::math::tools::toms748_solve(
      f, lo, hi, boost::math::tools::eps_tolerance<double>(40), iters);
  return 0.5 * (root.first + root.second);
}

BootstrapDraws resample_effects(std::span<const double> x, std::span<const double> y,
                                std::size_t B, const RngStream& rng, unsigned threads) {
  if (x.size() < 2 || y.size() < 2) throw DomainError("resample_effects: need n, m >= 2");
  if (B == 0) throw DomainError("resample_effects: B must be positive");
  BootstrapDraws d;
  d.origin = estimate_effects(x, y);
  d.theta_star.resize(B);
  d.i2_star.resize(B);
  parallel_for(B, threads, [&](std::size_t b) {
    RngStream stream = rng.child(b);
    std::vector<double> xs(x.size());
    std::vector<double> ys(y.size());
    for (double& v : xs) v = x[stream.next_below(x.size())];
    for (double& v : ys) v = y[stream.next_below(y.size())];
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end());
    const ThetaI2 e = theta_i2_sorted(xs, ys);
    d.theta_star[b] = e.theta;
    d.i2_star[b] = e.i2;
  });
  return d;
}

bool ConfidenceRegion::contains(double theta, double i2) const {
  return theta >= rect.theta_lo && theta <= rect.theta_hi && i2 >= rect.i2_lo && i2 <= rect.i2_hi;
}

bool ConfidenceRegion::ellipse_contains(double theta, double i2) const {
  if (!ellipse) return contains(theta, i2);
  {
    const Ellipse& e = *ellipse;
    const double dx = theta - e.center[0];
    const double dy = i2 - e.center[1];
    const double det = e.cov[0][0] * e.cov[1][1] - e.cov[0][1] * e.cov[1][0];
    const double q = (e.cov[1][1] * dx * dx - 2.0 * e.cov[0][1] * dx * dy + e.cov[0][0] * dy * dy) / det;
    return q <= e.radius * e.radius;
  }
}

double ConfidenceRegion::euclidean_length() const {
  return 0.5 * std::hypot(rect.theta_hi - rect.theta_lo, rect.i2_hi - rect.i2_lo);
}

namespace {

void check_draws(const BootstrapDraws& d, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("confidence region: alpha must lie in (0, 1)");
  if (d.theta_star.empty() || d.theta_star.size() != d.i2_star.size()) {
    throw DomainError("confidence region: draws are empty or of unequal length");
  }
}

struct Moments {
  double mean_t, mean_i, var_t, var_i, cov;
};

Moments moments(const BootstrapDraws& d) {
  const auto B = static_cast<double>(d.size());
  Moments m{};
  m.mean_t = std::accumulate(d.theta_star.begin(), d.theta_star.end(), 0.0) / B;
  m.mean_i = std::accumulate(d.i2_star.begin(), d.i2_star.end(), 0.0) / B;
  for (std::size_t b = 0; b < d.size(); ++b) {
    const double a = d.theta_star[b] - m.mean_t;
    const double c = d.i2_star[b] - m.mean_i;
    m.var_t += a * a;
    m.var_i += c * c;
    m.cov += a * c;
  }
  const double denom = std::max(B - 1.0, 1.0);
  m.var_t /= denom;
  m.var_i /= denom;
  m.cov /= denom;
  return m;
}

ConfidenceRegion make_rect(const char* method, double alpha, Rect r) {
  ConfidenceRegion out;
  out.method = method;
  out.level = 1.0 - alpha;
  out.rect = r;
  return out;
}

// Ascending ranks 1..B; ties ordered by a random key.
std::vector<std::size_t> random_ranks(const std::vector<double>& v, RngStream rng) {
  const std::size_t B = v.size();
  std::vector<std::uint64_t> key(B);
  for (auto& k : key) k = rng.next_u64();
  std::vector<std::size_t> order(B);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (v[a] != v[b]) return v[a] < v[b];
    return key[a] < key[b];
  });
  std::vector<std::size_t> rank(B);
  for (std::size_t r = 0; r < B; ++r) rank[order[r]] = r + 1;
  return rank;
}

// Inverse-ECDF percentile of positive integers.
std::size_t rank_percentile(std::vector<std::size_t> r, double p) {
  std::sort(r.begin(), r.end());
  const auto pos = static_cast<std::size_t>(std::ceil(p * static_cast<double>(r.size())));
  return r[std::clamp<std::size_t>(pos, 1, r.size()) - 1];
}

struct MaxRankSetup {
  std::vector<std::size_t> rank_t, rank_i;  // ascending
  std::vector<double> sorted_t, sorted_i;
  std::size_t upper_cut, lower_cut;          // r_{1-alpha/2} for the two sides
};

MaxRankSetup max_rank_setup(const BootstrapDraws& d, double alpha, const RngStream& tie_rng) {
  MaxRankSetup s;
  const std::size_t B = d.size();
  s.rank_t = random_ranks(d.theta_star, tie_rng.child(0));
  s.rank_i = random_ranks(d.i2_star, tie_rng.child(1));
  s.sorted_t = d.theta_star;
  s.sorted_i = d.i2_star;
  std::sort(s.sorted_t.begin(), s.sorted_t.end());
  std::sort(s.sorted_i.begin(), s.sorted_i.end());
  std::vector<std::size_t> up(B), down(B);
  for (std::size_t b = 0; b < B; ++b) {
    up[b] = std::max(s.rank_t[b], s.rank_i[b]);
    down[b] = std::max(B + 1 - s.rank_t[b], B + 1 - s.rank_i[b]);
  }
  s.upper_cut = rank_percentile(up, 1.0 - alpha / 2.0);
  s.lower_cut = rank_percentile(down, 1.0 - alpha / 2.0);
  return s;
}

Rect mb_box(const MaxRankSetup& s) {
  const std::size_t B = s.sorted_t.size();
  const std::size_t lo = B - s.lower_cut;  // zero-based index of ascending rank B+1-cut
  const std::size_t hi = s.upper_cut - 1;
  return {s.sorted_t[lo], s.sorted_t[hi], s.sorted_i[lo], s.sorted_i[hi]};
}

}  // namespace

ConfidenceRegion ci_mvn(const BootstrapDraws& d, double alpha) {
  check_draws(d, alpha);
  if (d.origin.theta == 0.0 || d.origin.theta == 1.0) {
    throw SeparationError("ci_mvn: the two samples are perfectly separated");
  }
  const Moments m = moments(d);
  if (!(m.var_t > 0.0) || !(m.var_i > 0.0)) {
    throw SingularCovarianceError("ci_mvn: bootstrap draws have zero variance");
  }
  const double rho = m.cov / std::sqrt(m.var_t * m.var_i);
  if (!(1.0 - rho * rho > 1e-12)) {
    throw SingularCovarianceError("ci_mvn: bootstrap covariance is singular");
  }
  const double c = equicoordinate_quantile(1.0 - alpha, std::clamp(rho, -1.0, 1.0));
  const double t = d.origin.theta;
  const double i = d.origin.i2;
  const double st = std::sqrt(m.var_t);
  const double si = std::sqrt(m.var_i);
  ConfidenceRegion out = make_rect("mvn", alpha, {t - c * st, t + c * st, i - c * si, i + c * si});
  out.kind = RegionKind::Ellipse;
  out.ellipse = Ellipse{{t, i}, {{m.var_t, m.cov}, {m.cov, m.var_i}}, std::sqrt(-2.0 * std::log(alpha))};
  return out;
}

double sample_quantile(std::vector<double> v, double p) {
  if (v.empty()) throw DomainError("sample_quantile: empty input");
  std::sort(v.begin(), v.end());
  const double h = (static_cast<double>(v.size()) - 1.0) * std::clamp(p, 0.0, 1.0);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

ConfidenceRegion ci_bonf_quantile(const BootstrapDraws& d, double alpha, QuantileOrientation orientation) {
  check_draws(d, alpha);
  const auto interval = [&](const std::vector<double>& star, double est) {
    std::vector<double> dev(star.size());
    for (std::size_t b = 0; b < star.size(); ++b) dev[b] = star[b] - est;
    const double q_lo = sample_quantile(dev, alpha / 4.0);
    const double q_hi = sample_quantile(std::move(dev), 1.0 - alpha / 4.0);
    if (orientation == QuantileOrientation::Basic) return std::pair{est - q_hi, est - q_lo};
    return std::pair{est + q_lo, est + q_hi};
  };
  const auto [t_lo, t_hi] = interval(d.theta_star, d.origin.theta);
  const auto [i_lo, i_hi] = interval(d.i2_star, d.origin.i2);
  return make_rect("bonf-quantile", alpha, {t_lo, t_hi, i_lo, i_hi});
}

ConfidenceRegion ci_bonf_normal(const BootstrapDraws& d, double alpha) {
  check_draws(d, alpha);
  const Moments m = moments(d);
  const double z = normal_quantile(1.0 - alpha / 4.0);
  const double ht = z * std::sqrt(m.var_t);
  const double hi = z * std::sqrt(m.var_i);
  const double t = d.origin.theta;
  const double i = d.origin.i2;
  return make_rect("bonf-normal", alpha, {t - ht, t + ht, i - hi, i + hi});
}

ConfidenceRegion ci_mandel_betensky(const BootstrapDraws& d, double alpha, const RngStream& tie_rng) {
  check_draws(d, alpha);
  return make_rect("mb", alpha, mb_box(max_rank_setup(d, alpha, tie_rng)));
}

ConfidenceRegion ci_gkl(const BootstrapDraws& d, double alpha, const RngStream& tie_rng) {
  check_draws(d, alpha);
  const MaxRankSetup s = max_rank_setup(d, alpha, tie_rng);
  const Rect mb = mb_box(s);
  const std::size_t B = d.size();

  std::vector<std::size_t> phi;
  for (std::size_t b = 0; b < B; ++b) {
    if (std::max(s.rank_t[b], s.rank_i[b]) <= s.upper_cut) phi.push_back(b);
  }
  // Within phi, the order of the original ranks is the order of the draws
  // (ties already broken), so re-ranking is a sort by original rank.
  const auto rerank = [&](const std::vector<std::size_t>& rank) {
    std::vector<std::size_t> idx(phi.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return rank[phi[a]] < rank[phi[b]]; });
    std::vector<std::size_t> out(phi.size());
    for (std::size_t r = 0; r < idx.size(); ++r) out[idx[r]] = r + 1;
    return out;
  };
  const std::vector<std::size_t> rt = rerank(s.rank_t);
  const std::vector<std::size_t> ri = rerank(s.rank_i);
  std::vector<std::size_t> rmin(phi.size());
  for (std::size_t j = 0; j < phi.size(); ++j) rmin[j] = std::min(rt[j], ri[j]);

  ConfidenceRegion out = make_rect("gkl", alpha, mb);
  if (phi.empty()) {
    out.fallback = true;
    return out;
  }
  const std::size_t cut = rank_percentile(rmin, alpha / (2.0 - alpha));
  std::size_t t_max = 0, i_max = 0, t_min = B + 1, i_min = B + 1;
  bool any = false;
  for (std::size_t j = 0; j < phi.size(); ++j) {
    if (rmin[j] < cut) continue;
    any = true;
    const std::size_t b = phi[j];
    t_max = std::max(t_max, s.rank_t[b]);
    i_max = std::max(i_max, s.rank_i[b]);
    t_min = std::min(t_min, s.rank_t[b]);
    i_min = std::min(i_min, s.rank_i[b]);
  }
  if (!any) {
    out.fallback = true;
    return out;
  }
  Rect g{s.sorted_t[t_min - 1], s.sorted_t[t_max - 1], s.sorted_i[i_min - 1], s.sorted_i[i_max - 1]};
  // Upper limits lie inside the MB box by construction; lower limits are
  // clamped to it.
  g.theta_lo = std::max(g.theta_lo, mb.theta_lo);
  g.i2_lo = std::max(g.i2_lo, mb.i2_lo);
  g.theta_hi = std::min(g.theta_hi, mb.theta_hi);
  g.i2_hi = std::min(g.i2_hi, mb.i2_hi);
  if (g.theta_lo > g.theta_hi || g.i2_lo > g.i2_hi) {
    out.fallback = true;
    return out;
  }
  out.rect = g;
  return out;
}

ConfidenceRegion range_preserve(const ConfidenceRegion& r) {
  ConfidenceRegion out = r;
  const ClippedRect c = clip_to_region(r.rect);
  out.rect = c.rect;
  out.clipped = r.clipped || c.clipped;
  return out;
}

}  // namespace joint_effect
