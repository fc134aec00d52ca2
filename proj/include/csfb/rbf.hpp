#pragma once

#include <Eigen/Dense>

#include "csfb/rng.hpp"

namespace csfb {

// p x p unitary beam set drawn from the Haar (isotropic) distribution;
// columns are the random orthonormal beams of one fading block
Eigen::MatrixXcd gen_beams(int p, Rng& rng);

// SINR(i, m) of user i under beam m when the BS sends one stream per beam at
// power rho/p each: |h_i phi_m|^2 / (1/rho + sum_{m' != m} |h_i phi_m'|^2)
Eigen::MatrixXd compute_sinr(const Eigen::MatrixXcd& H,
                             const Eigen::MatrixXcd& beams, double rho);

// P(SINR > zeta) for one user/beam pair: exp(-zeta/rho) / (1+zeta)^(p-1)
double sinr_ccdf(double zeta, double rho, int p);

// inverse of sinr_ccdf on (0, 1]; bisection to 1e-10 on the function value
double sinr_ccdf_inv(double u, double rho, int p);

}  // namespace csfb
