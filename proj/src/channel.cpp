#include "csfb/channel.hpp"

#include <stdexcept>

namespace csfb {

Eigen::MatrixXcd gen_downlink(int n_users, int n_antennas, Rng& rng) {
  if (n_antennas < 1)
    throw std::invalid_argument("gen_downlink: need at least one antenna");
  if (n_users < n_antennas)
    throw std::invalid_argument("gen_downlink: need n_users >= n_antennas");
  Eigen::MatrixXcd H(n_users, n_antennas);
  for (int i = 0; i < n_users; ++i)
    for (int j = 0; j < n_antennas; ++j) H(i, j) = rng.cgaussian();
  return H;
}

FeedbackMatrix gen_feedback_matrix(FeedbackMatrixKind kind, int r, int n,
                                   Rng& rng, int groups) {
  if (r < 1 || n < 1)
    throw std::invalid_argument("gen_feedback_matrix: r and n must be >= 1");
  FeedbackMatrix out;
  out.kind = kind;
  out.groups = 1;
  switch (kind) {
    case FeedbackMatrixKind::GaussianFading: {
      out.A.resize(r, n);
      for (int i = 0; i < r; ++i)
        for (int j = 0; j < n; ++j) out.A(i, j) = rng.cgaussian();
      break;
    }
    case FeedbackMatrixKind::BernoulliChips: {
      out.A.resize(r, n);
      for (int i = 0; i < r; ++i)
        for (int j = 0; j < n; ++j)
          out.A(i, j) = (rng.next_u32() & 1u) ? 1.0 : -1.0;
      break;
    }
    case FeedbackMatrixKind::DedicatedDiagonal: {
      if (r != n)
        throw std::invalid_argument(
            "gen_feedback_matrix: dedicated channels need r == n");
      out.A = Eigen::MatrixXcd::Identity(r, n);
      break;
    }
    case FeedbackMatrixKind::BlockDiagonal: {
      if (groups < 1 || r % groups != 0 || n % groups != 0)
        throw std::invalid_argument(
            "gen_feedback_matrix: groups must divide both r and n");
      out.groups = groups;
      out.A = Eigen::MatrixXcd::Zero(r, n);
      const int rb = r / groups;
      const int nb = n / groups;
      for (int g = 0; g < groups; ++g)
        for (int i = 0; i < rb; ++i)
          for (int j = 0; j < nb; ++j)
            out.A(g * rb + i, g * nb + j) = rng.cgaussian();
      break;
    }
  }
  return out;
}

FeedbackObservation transmit_feedback(const FeedbackMatrix& A,
                                      const Eigen::VectorXd& v,
                                      double sigma_w_sq, Rng& rng) {
  if (v.size() != A.A.cols())
    throw std::invalid_argument("transmit_feedback: size mismatch");
  if (sigma_w_sq < 0.0)
    throw std::invalid_argument("transmit_feedback: negative noise power");
  FeedbackObservation obs;
  obs.sigma_w_sq = sigma_w_sq;
  obs.y = A.A * v.cast<std::complex<double>>();
  if (sigma_w_sq > 0.0) {
    const double scale = std::sqrt(sigma_w_sq);
    for (Eigen::Index i = 0; i < obs.y.size(); ++i)
      obs.y(i) += scale * rng.cgaussian();
  }
  return obs;
}

}  // namespace csfb
