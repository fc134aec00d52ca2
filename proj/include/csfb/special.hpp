#pragma once

namespace csfb {

// Gaussian tail Q(x) = P(N(0,1) > x)
double q_function(double x);

// standard normal CDF
double normal_cdf(double x);

// exponential integral E1(x) = int_x^inf e^-t / t dt, x > 0
double exp_integral_e1(double x);

// upper incomplete gamma Gamma(1-r, x) for integer r >= 1, x > 0.
// Downward recurrence from Gamma(0,x) = E1(x); accurate for small r
// (cancellation grows with r, callers keep r <= 10).
double upper_gamma_negint(int r, double x);

// generalized Laguerre polynomial L_n^(alpha)(x) by three-term recurrence
double laguerre(int n, double alpha, double x);

// marginal eigenvalue density of a complex Wishart matrix A*A with A r x s,
// entries CN(0,1), s <= r; normalized so it integrates to 1 over [0, inf)
double wishart_eigen_density(double lam, int s, int r);

}  // namespace csfb
