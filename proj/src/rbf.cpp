#include "csfb/rbf.hpp"

#include <cmath>
#include <stdexcept>

namespace csfb {

Eigen::MatrixXcd gen_beams(int p, Rng& rng) {
  if (p < 1) throw std::invalid_argument("gen_beams: p must be >= 1");
  Eigen::MatrixXcd G(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) G(i, j) = rng.cgaussian();
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(G);
  Eigen::MatrixXcd Q = qr.householderQ() * Eigen::MatrixXcd::Identity(p, p);
  Eigen::MatrixXcd R = qr.matrixQR().triangularView<Eigen::Upper>();
  // fix the phase ambiguity so the distribution is exactly Haar
  for (int j = 0; j < p; ++j) {
    const std::complex<double> d = R(j, j);
    const double mag = std::abs(d);
    if (mag > 0.0) Q.col(j) *= d / mag;
  }
  return Q;
}

Eigen::MatrixXd compute_sinr(const Eigen::MatrixXcd& H,
                             const Eigen::MatrixXcd& beams, double rho) {
  if (H.cols() != beams.rows())
    throw std::invalid_argument("compute_sinr: dimension mismatch");
  if (!(rho > 0.0)) throw std::invalid_argument("compute_sinr: rho must be > 0");
  const Eigen::MatrixXd gains = (H * beams).cwiseAbs2();  // n x p
  const Eigen::VectorXd totals = gains.rowwise().sum();
  Eigen::MatrixXd sinr(gains.rows(), gains.cols());
  for (Eigen::Index i = 0; i < gains.rows(); ++i)
    for (Eigen::Index m = 0; m < gains.cols(); ++m)
      sinr(i, m) = gains(i, m) / (1.0 / rho + totals(i) - gains(i, m));
  return sinr;
}

double sinr_ccdf(double zeta, double rho, int p) {
  if (!(rho > 0.0) || p < 1)
    throw std::invalid_argument("sinr_ccdf: need rho > 0 and p >= 1");
  if (zeta <= 0.0) return 1.0;
  return std::exp(-zeta / rho) / std::pow(1.0 + zeta, p - 1);
}

double sinr_ccdf_inv(double u, double rho, int p) {
  if (!(u > 0.0) || u > 1.0)
    throw std::invalid_argument("sinr_ccdf_inv: u must be in (0, 1]");
  if (u == 1.0) return 0.0;
  double lo = 0.0;
  double hi = 1.0;
  while (sinr_ccdf(hi, rho, p) > u) hi *= 2.0;
  // bisect until the ccdf value is pinned to 1e-10
  while (true) {
    const double mid = 0.5 * (lo + hi);
    const double v = sinr_ccdf(mid, rho, p);
    if (std::fabs(v - u) < 1e-10 || hi - lo < 1e-15 * (1.0 + hi)) return mid;
    if (v > u)
      lo = mid;
    else
      hi = mid;
  }
}

}  // namespace csfb
