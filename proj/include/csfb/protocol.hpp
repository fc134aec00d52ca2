#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "csfb/channel.hpp"
#include "csfb/rng.hpp"

namespace csfb {

enum class RecoveryMethod { MaxCorrelation, Lasso };

struct ProtocolConfig {
  int n = 100;           // users
  int p = 4;             // BS antennas / beams
  double rho_dl = 10.0;  // downlink SNR, linear
  double rho_ul = 10.0;  // feedback link SNR, linear (noise power 1/rho_ul)
  int s = 5;             // designed strong users per beam
  double c_half = 0.8;   // oversampling constant for the channel count
  int k = 1;             // threshold count (digital protocol)
  int groups = 1;        // > 1 switches to a block-diagonal feedback matrix
  int r_override = 0;    // > 0 pins the channel count directly
  RecoveryMethod recovery = RecoveryMethod::MaxCorrelation;
  double lasso_alpha = 0.0;  // <= 0 picks sigma_w * sqrt(2 ln n / m)
};

struct ThresholdSet {
  std::vector<double> zetas;  // strictly ascending
  int k() const { return static_cast<int>(zetas.size()); }
};

// threshold with exactly s users per beam above it on average:
// sinr_ccdf(zeta) = s/n
double analog_threshold(int s, int n, double rho, int p);

// ascending thresholds zeta_i = ccdf_inv(s(k-i+1)/n); requires s*k <= n
ThresholdSet digital_thresholds(int s, int n, int k, double rho, int p);

// nominal peak SINR of the scheduled user at this scale:
// beta = 1 + rho ln n - rho (p-2) ln ln n
double nominal_peak_sinr(int n, int p, double rho);

// Back-off solving the stationarity condition
//   Q(d/s) + ((beta-d)/(sqrt(2 pi) s)) e^{-d^2/2s^2} ln(beta-d) = 1
// on (0, beta-1). nullopt when no sign change exists (degenerate regime;
// callers fall back to delta = 0).
std::optional<double> optimal_backoff(double beta, double sigma_w);

// probability the backed-off report does not exceed the true value:
// eta = 1 - Q(delta/sigma_w)
double backoff_efficiency(double delta, double sigma_w);

struct BackoffParams {
  double beta = 0.0;
  double sigma_w = 0.0;
  double delta = 0.0;
  double eta = 0.5;
};

// beta from (n, p, rho_dl), delta from optimal_backoff (0 when degenerate or
// sigma_w == 0), eta from backoff_efficiency
BackoffParams make_backoff(int n, int p, double rho_dl, double sigma_w);

// shared channels for the configured scheme: block-diagonal count when
// groups > 1, otherwise the dense count
int shared_channels(const ProtocolConfig& cfg);

struct ChannelRealization {
  Eigen::MatrixXcd H;      // n x p downlink
  Eigen::MatrixXcd beams;  // p x p orthonormal columns
  FeedbackMatrix A;        // r x n feedback measurement matrix
  double sigma_w_sq = 0.0;
};

// one coherence block: downlink, beams, feedback matrix, noise power 1/rho_ul
ChannelRealization draw_realization(const ProtocolConfig& cfg, Rng& rng);

struct BeamOutcome {
  int beam = 0;
  bool outage = true;
  std::optional<int> user;           // absent iff outage
  std::optional<double> reported_cqi;  // absent iff outage
};

// Analog protocol, one round: per beam, strong users (best beam = m,
// SINR >= zeta) transmit their SINR; BS recovers, LS-refines, backs off,
// and serves the largest backed-off estimate. Recovery degeneracy and the
// all-small energy test (every value < zeta/2) give outage, never an abort.
std::vector<BeamOutcome> run_analog_round(const ChannelRealization& chan,
                                          const ProtocolConfig& cfg, Rng& rng);

// Digital protocol, one round: per beam and threshold interval (highest
// first), users whose best-beam SINR falls in the interval transmit 1; the
// first interval whose recovery passes the energy test (some value >= 1/2) is
// served, choosing uniformly among passing entries; reported CQI is the
// interval's lower threshold.
std::vector<BeamOutcome> run_digital_round(const ChannelRealization& chan,
                                           const ProtocolConfig& cfg, Rng& rng);

}  // namespace csfb
