#pragma once

#include <cstddef>
#include <ostream>
#include <vector>

#include "joint_effect/distributions.hpp"

namespace joint_effect {

/// Population values of the functionals for X ~ f, Y ~ g, each with its
/// quadrature error estimate.
struct ExactFunctionals {
  double theta, i1, i2;
  double theta_err, i1_err, i2_err;
};

/// Asymptotic covariance of sqrt(n) (theta_hat - theta, i2_hat - i2) with
/// nu = lim n/m (n the X sample size).
struct AsymptoticCov {
  double var_theta;
  double var_i2;
  double cov;
  double nu;
  double max_error;  // largest quadrature error over the terms
};

/// theta = P(X < Y) = 1 - int_0^1 G(F^{-1}(t)) dt.
double exact_theta(const DistributionSpec& f, const DistributionSpec& g);
/// I2 = 2 (int_{1/2}^1 G(F^{-1}(t)) dt - int_0^{1/2} G(F^{-1}(t)) dt).
double exact_i2(const DistributionSpec& f, const DistributionSpec& g);
/// I1(f, g) = I2(g, f).
double exact_i1(const DistributionSpec& f, const DistributionSpec& g);
/// All three with error estimates. Throws AccuracyError when an estimate
/// exceeds 1e-6.
ExactFunctionals exact_functionals(const DistributionSpec& f, const DistributionSpec& g);

/// Sigma = Sigma_X + nu * Sigma_Y where, with h = G o F^{-1}, k = F o G^{-1},
/// c = G(F^{-1}(1/2)) and ||u||* = Var u(V), <u, v>* = Cov(u(V), v(V)) for
/// V ~ U(0, 1):
///   Sigma_X = Cov of (-h(V), 2|h(V) - c|)
///   Sigma_Y = Cov of ( k(V), 2 min(k(V), 1 - k(V)))
/// Under F = G this is (1 + nu)/12 on the diagonal and 0 off it.
AsymptoticCov asymptotic_cov(const DistributionSpec& f, const DistributionSpec& g, double nu);

struct GridRow {
  double mu, sigma, theta, i1, i2;
};

/// Exact functionals of X ~ N(0, 1) against Y ~ N(mu, sigma) on a
/// mu_steps x sigma_steps grid (mu-major, both ranges inclusive).
std::vector<GridRow> functional_grid(double mu_lo, double mu_hi, std::size_t mu_steps,
                                     double sigma_lo, double sigma_hi, std::size_t sigma_steps,
                                     unsigned threads = 1);

/// CSV with header `mu,sigma,theta,i1,i2`, 10 significant digits.
void write_grid_csv(std::ostream& out, const std::vector<GridRow>& rows);

}  // namespace joint_effect
