#pragma once

namespace joint_effect::special {

/// Standard normal cdf.
double normal_cdf(double z);
/// Standard normal upper tail 1 - Phi(z), accurate far into the tail.
double normal_sf(double z);
double normal_pdf(double z);
/// Standard normal quantile (Wichura AS241, about 1e-16 relative accuracy).
double normal_quantile(double p);

/// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x);
/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double gamma_q(double a, double x);

/// Regularized incomplete beta I_x(a, b).
double beta_inc(double a, double b, double x);

}  // namespace joint_effect::special
