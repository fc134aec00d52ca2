#include "csfb/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace csfb {

LiftedSystem lift_to_real(const Eigen::MatrixXcd& A,
                          const Eigen::VectorXcd& y) {
  if (A.rows() != y.size())
    throw std::invalid_argument("lift_to_real: dimension mismatch");
  const Eigen::Index r = A.rows();
  const Eigen::Index n = A.cols();
  LiftedSystem sys;
  sys.A.resize(2 * r, n);
  sys.A.topRows(r) = A.real();
  sys.A.bottomRows(r) = A.imag();
  sys.y.resize(2 * r);
  sys.y.head(r) = y.real();
  sys.y.tail(r) = y.imag();
  return sys;
}

std::vector<int> max_correlation_support(const LiftedSystem& sys, int s) {
  const int n = static_cast<int>(sys.A.cols());
  if (s < 1 || s > n)
    throw std::invalid_argument("max_correlation_support: need 1 <= s <= n");
  const Eigen::VectorXd corr = (sys.A.transpose() * sys.y).cwiseAbs();
  Eigen::VectorXd score(n);
  for (int j = 0; j < n; ++j) {
    const double nrm = sys.A.col(j).norm();
    score(j) = nrm > 0.0 ? corr(j) / nrm : 0.0;
  }
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::partial_sort(idx.begin(), idx.begin() + s, idx.end(),
                    [&score](int a, int b) {
                      if (score(a) != score(b)) return score(a) > score(b);
                      return a < b;
                    });
  std::vector<int> out(idx.begin(), idx.begin() + s);
  std::sort(out.begin(), out.end());
  return out;
}

Eigen::VectorXd lasso(const LiftedSystem& sys, double alpha, int max_passes,
                      double tol) {
  if (!(alpha > 0.0)) throw std::invalid_argument("lasso: alpha must be > 0");
  const Eigen::Index m = sys.A.rows();
  const Eigen::Index n = sys.A.cols();
  const Eigen::VectorXd col_sq = sys.A.colwise().squaredNorm();
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd resid = sys.y;
  const double lam = alpha * static_cast<double>(m);
  for (int pass = 0; pass < max_passes; ++pass) {
    double max_change = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (col_sq(j) == 0.0) continue;
      const double old = v(j);
      const double z = old + sys.A.col(j).dot(resid) / col_sq(j);
      const double thr = lam / col_sq(j);
      double next = 0.0;
      if (z > thr)
        next = z - thr;
      else if (z < -thr)
        next = z + thr;
      if (next != old) {
        resid -= (next - old) * sys.A.col(j);
        v(j) = next;
        max_change = std::fmax(max_change, std::fabs(next - old));
      }
    }
    if (max_change < tol) return v;
  }
  throw LassoNonConvergence(v);
}

std::vector<int> support_of(const Eigen::VectorXd& v, double tol) {
  std::vector<int> out;
  for (Eigen::Index j = 0; j < v.size(); ++j)
    if (std::fabs(v(j)) > tol) out.push_back(static_cast<int>(j));
  return out;
}

Eigen::VectorXd ls_refine(const LiftedSystem& sys,
                          const std::vector<int>& support) {
  const auto k = static_cast<Eigen::Index>(support.size());
  if (k == 0) throw std::runtime_error("ls_refine: empty support");
  if (k > sys.A.rows())
    throw std::runtime_error("ls_refine: support larger than measurement count");
  Eigen::MatrixXd As(sys.A.rows(), k);
  for (Eigen::Index c = 0; c < k; ++c) {
    const int j = support[c];
    if (j < 0 || j >= sys.A.cols())
      throw std::out_of_range("ls_refine: support index out of range");
    As.col(c) = sys.A.col(j);
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(As);
  if (qr.rank() < k)
    throw std::runtime_error("ls_refine: rank-deficient support columns");
  return qr.solve(sys.y);
}

double rip_constant(const Eigen::MatrixXd& A, int s) {
  const int n = static_cast<int>(A.cols());
  if (n > 20 || s > 4)
    throw std::invalid_argument("rip_constant: exhaustive search limited to n <= 20, s <= 4");
  if (s < 1 || s > n)
    throw std::invalid_argument("rip_constant: need 1 <= s <= n");
  std::vector<int> comb(s);
  for (int i = 0; i < s; ++i) comb[i] = i;
  double eps = 0.0;
  Eigen::MatrixXd As(A.rows(), s);
  while (true) {
    for (int c = 0; c < s; ++c) As.col(c) = A.col(comb[c]);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(As);
    const double smax = svd.singularValues()(0);
    const double smin = svd.singularValues()(s - 1);
    eps = std::fmax(eps, std::fmax(smax * smax - 1.0, 1.0 - smin * smin));
    // next combination in lexicographic order
    int i = s - 1;
    while (i >= 0 && comb[i] == n - s + i) --i;
    if (i < 0) break;
    ++comb[i];
    for (int j = i + 1; j < s; ++j) comb[j] = comb[j - 1] + 1;
  }
  return eps;
}

int required_channels(double c_half, int s, int n) {
  if (s < 1 || n <= s)
    throw std::invalid_argument("required_channels: need n > s >= 1");
  if (!(c_half > 0.0))
    throw std::invalid_argument("required_channels: c_half must be > 0");
  return static_cast<int>(std::ceil(c_half * s * std::log(n - s)));
}

double asymptotic_channels(int n) {
  if (n < 16)
    throw std::invalid_argument("asymptotic_channels: triple log needs n >= 16");
  return std::log(std::log(std::log(n))) * std::log(n);
}

int block_diag_channels(double c_half_prime, int s, int n, int k) {
  if (k < 1 || s < 1 || n <= k)
    throw std::invalid_argument("block_diag_channels: need n > k >= 1, s >= 1");
  if (s % k != 0)
    throw std::invalid_argument("block_diag_channels: k must divide s");
  if (!(c_half_prime > 0.0))
    throw std::invalid_argument("block_diag_channels: c_half_prime must be > 0");
  const double per_group =
      c_half_prime * (static_cast<double>(s) / k) * std::log(static_cast<double>(n) / k);
  return k * static_cast<int>(std::ceil(per_group));
}

}  // namespace csfb
