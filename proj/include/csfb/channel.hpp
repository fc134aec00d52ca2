#pragma once

#include <Eigen/Dense>

#include "csfb/rng.hpp"

namespace csfb {

// Rayleigh-fading downlink: one row per user, one column per BS antenna,
// entries iid CN(0,1). Requires n >= p >= 1.
Eigen::MatrixXcd gen_downlink(int n_users, int n_antennas, Rng& rng);

enum class FeedbackMatrixKind {
  GaussianFading,     // iid CN(0,1) uplink fading, shared channels
  BernoulliChips,     // +/-1 chips, unit magnitude
  DedicatedDiagonal,  // one orthogonal channel per user, unit gain
  BlockDiagonal,      // `groups` independent Gaussian blocks on the diagonal
};

struct FeedbackMatrix {
  FeedbackMatrixKind kind = FeedbackMatrixKind::GaussianFading;
  Eigen::MatrixXcd A;  // r x n
  int groups = 1;      // > 1 only for BlockDiagonal
};

// r x n measurement matrix for the feedback link. For BlockDiagonal, r and n
// must both be divisible by `groups`; each r/groups x n/groups block is iid
// CN(0,1) and off-block entries are zero. DedicatedDiagonal requires r == n
// and places 1 on the diagonal.
FeedbackMatrix gen_feedback_matrix(FeedbackMatrixKind kind, int r, int n,
                                   Rng& rng, int groups = 1);

struct FeedbackObservation {
  Eigen::VectorXcd y;
  double sigma_w_sq = 0.0;
};

// y = A v + w with w iid CN(0, sigma_w_sq); sigma_w_sq == 0 gives a clean
// observation
FeedbackObservation transmit_feedback(const FeedbackMatrix& A,
                                      const Eigen::VectorXd& v,
                                      double sigma_w_sq, Rng& rng);

}  // namespace csfb
