#pragma once

#include <cstdint>

#include "csfb/protocol.hpp"

namespace csfb {

struct ThroughputEstimate {
  double value = 0.0;          // bits/s/Hz
  double ci_half_width = 0.0;  // 95% normal CI half width
  std::int64_t trials = 0;
};

enum class ProtocolVariant {
  GenieDedicated,      // per beam, true max SINR over all users
  NoiselessDedicated,  // dedicated noiseless reports, best-beam scheduling
  AnalogShared,        // full analog protocol over shared channels
  DigitalShared,       // full digital protocol over shared channels
};

// Monte Carlo sum rate: mean over trials of sum_m log2(1 + cqi_m). For the
// shared variants cqi_m is the selected user's true SINR capped by the
// reported value, so overestimated reports earn at most the channel's actual
// capacity. Trial t draws from Rng(seed, stream_base + t); results are
// identical for any worker count.
ThroughputEstimate rbf_throughput_mc(const ProtocolConfig& cfg,
                                     ProtocolVariant variant,
                                     std::int64_t trials, std::uint64_t seed,
                                     int workers = 1,
                                     std::uint64_t stream_base = 0);

// large-n sum-rate scaling p log2(1 + rho ln n - rho (p-2) ln ln n)
double rbf_throughput_approx(int n, int p, double rho);

// throughput after backing off a noisy report by delta:
// (1 - Q(delta/sigma_w)) * p * log2(beta - delta), for 0 <= delta < beta - 1
double effective_throughput(double beta, double delta, double sigma_w, int p);

// exact digital sum rate:
// p * sum_i log2(1 + zeta_i) ([F(zeta_{i+1})]^n - [F(zeta_i)]^n), F = 1 - ccdf
double digital_throughput_closed(int n, int p, double rho,
                                 const ThresholdSet& thresholds);

enum class EcmVariant { MonteCarlo, ClosedForm, LargeRApprox, Dedicated };

struct EcmStats {
  double trace = 0.0;
  double determinant = 0.0;
  EcmVariant variant = EcmVariant::MonteCarlo;
};

// Monte Carlo trace/determinant of (sigma_v^-2 I + sigma_w^-2 A* A)^-1 with
// A an r x s matrix of iid CN(0,1) entries
EcmStats ecm_shared_mc(int s, int r, double sigma_v_sq, double sigma_w_sq,
                       std::int64_t trials, std::uint64_t seed,
                       int workers = 1, std::uint64_t stream_base = 0);

// diagonal-Gram trace formula s * int (1+rho x)^-1 x^(r-1) e^-x / (r-1)! dx
// evaluated by adaptive quadrature (relative error 1e-8)
double ecm_shared_trace_closed(int s, int r, double rho);

// equivalent incomplete-gamma form s (1/rho)^r e^(1/rho) Gamma(1-r, 1/rho);
// numerically stable only for r <= 10, used as a cross-check
double ecm_shared_trace_gamma_form(int s, int r, double rho);

// determinant via the marginal eigenvalue density of A*A:
// [int (1+rho*lam)^-1 p(lam) dlam]^s
double ecm_shared_det_closed(int s, int r, double rho);

// large-r approximation: trace s/(rho r), determinant (rho r)^-s
EcmStats ecm_shared_approx(int s, int r, double rho);

// dedicated channels: trace n/(1+rho), determinant (1+rho)^-n
EcmStats ecm_dedicated(int n, double rho);

struct FeedbackLoad {
  double reals = 0.0;
  double bits = 0.0;
};

enum class FeedbackScheme { AnalogShared, DigitalShared, Dedicated };

// channel-use accounting: analog p*r reals; digital p*k*r bits;
// dedicated n reals + n log2(p) bits
FeedbackLoad feedback_load(FeedbackScheme scheme, int p, int r, int k, int n);

}  // namespace csfb
