#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

namespace csfb {

// Real-valued equivalent of a complex linear model: the top r rows carry the
// real parts and the bottom r rows the imaginary parts, so for real v the
// residual norms of the two models coincide.
struct LiftedSystem {
  Eigen::MatrixXd A;  // 2r x n
  Eigen::VectorXd y;  // 2r
};

LiftedSystem lift_to_real(const Eigen::MatrixXcd& A,
                          const Eigen::VectorXcd& y);

// Indices (ascending) of the s columns with the largest correlation
// magnitudes |a_j' y| / ||a_j||. Normalizing by the column norm makes the
// ranking insensitive to the norm spread of random columns.
std::vector<int> max_correlation_support(const LiftedSystem& sys, int s);

struct LassoNonConvergence : std::runtime_error {
  explicit LassoNonConvergence(Eigen::VectorXd last)
      : std::runtime_error("lasso: no convergence within the pass budget"),
        iterate(std::move(last)) {}
  Eigen::VectorXd iterate;
};

// Minimizes (1/(2m)) ||y - A v||^2 + alpha ||v||_1, m = rows(A), by cyclic
// coordinate descent with soft thresholding. Stops when the largest
// coordinate change in a full pass drops below tol; throws
// LassoNonConvergence (carrying the last iterate) after max_passes.
Eigen::VectorXd lasso(const LiftedSystem& sys, double alpha,
                      int max_passes = 100000, double tol = 1e-9);

// indices with |v_j| > tol; coordinate descent yields exact zeros, the
// tolerance only guards round-off
std::vector<int> support_of(const Eigen::VectorXd& v, double tol = 1e-6);

// Least-squares re-estimation restricted to the given support. Throws
// std::runtime_error when the restricted columns are rank deficient.
Eigen::VectorXd ls_refine(const LiftedSystem& sys,
                          const std::vector<int>& support);

// Restricted isometry constant by brute force over all size-s supports:
// eps_s = max over supports of max(1 - sigma_min^2, sigma_max^2 - 1).
// Guarded to n <= 20, s <= 4.
double rip_constant(const Eigen::MatrixXd& A, int s);

// shared channels needed to recover an s-sparse vector among n users:
// ceil(c_half * s * ln(n - s))
int required_channels(double c_half, int s, int n);

// asymptotic channel count scale (ln ln ln n)(ln n), defined for n >= 16
double asymptotic_channels(int n);

// total channels for k-group block-diagonal training:
// k * ceil(c_half_prime * (s/k) * ln(n/k)); k must divide s
int block_diag_channels(double c_half_prime, int s, int n, int k);

}  // namespace csfb
