#include "csfb/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "csfb/rbf.hpp"
#include "csfb/recovery.hpp"
#include "csfb/special.hpp"

namespace csfb {

double analog_threshold(int s, int n, double rho, int p) {
  if (s < 1 || s > n)
    throw std::invalid_argument("analog_threshold: need 1 <= s <= n");
  return sinr_ccdf_inv(static_cast<double>(s) / n, rho, p);
}

ThresholdSet digital_thresholds(int s, int n, int k, double rho, int p) {
  if (k < 1) throw std::invalid_argument("digital_thresholds: k must be >= 1");
  if (s < 1 || static_cast<long>(s) * k > n)
    throw std::invalid_argument("digital_thresholds: need 1 <= s*k <= n");
  ThresholdSet out;
  out.zetas.resize(k);
  for (int i = 1; i <= k; ++i)
    out.zetas[i - 1] =
        sinr_ccdf_inv(static_cast<double>(s) * (k - i + 1) / n, rho, p);
  return out;
}

double nominal_peak_sinr(int n, int p, double rho) {
  if (n < 3 || p < 1)
    throw std::invalid_argument("nominal_peak_sinr: need n >= 3, p >= 1");
  if (!(rho > 0.0))
    throw std::invalid_argument("nominal_peak_sinr: rho must be > 0");
  return 1.0 + rho * std::log(n) - rho * (p - 2) * std::log(std::log(n));
}

namespace {

double backoff_lhs(double d, double beta, double sigma_w) {
  const double rem = beta - d;
  return q_function(d / sigma_w) +
         rem / (2.5066282746310005024 * sigma_w) *
             std::exp(-d * d / (2.0 * sigma_w * sigma_w)) * std::log(rem) -
         1.0;
}

}  // namespace

std::optional<double> optimal_backoff(double beta, double sigma_w) {
  if (!(beta > 2.0))
    throw std::invalid_argument("optimal_backoff: beta must be > 2");
  if (!(sigma_w > 0.0))
    throw std::invalid_argument("optimal_backoff: sigma_w must be > 0");
  const double lo_edge = 1e-9;
  const double hi_edge = beta - 1.0 - 1e-9;
  if (hi_edge <= lo_edge) return std::nullopt;
  // sign scan, then bisection
  const int panels = 1000;
  double a = lo_edge;
  double fa = backoff_lhs(a, beta, sigma_w);
  double b = a;
  bool bracketed = false;
  for (int i = 1; i <= panels; ++i) {
    b = lo_edge + (hi_edge - lo_edge) * i / panels;
    const double fb = backoff_lhs(b, beta, sigma_w);
    if (fa == 0.0) return a;
    if (fa * fb <= 0.0) {
      bracketed = true;
      break;
    }
    a = b;
    fa = fb;
  }
  if (!bracketed) return std::nullopt;
  while (b - a > 1e-10) {
    const double mid = 0.5 * (a + b);
    const double fm = backoff_lhs(mid, beta, sigma_w);
    if (fa * fm <= 0.0)
      b = mid;
    else {
      a = mid;
      fa = fm;
    }
  }
  return 0.5 * (a + b);
}

double backoff_efficiency(double delta, double sigma_w) {
  if (!(sigma_w > 0.0))
    throw std::invalid_argument("backoff_efficiency: sigma_w must be > 0");
  if (delta < 0.0)
    throw std::invalid_argument("backoff_efficiency: delta must be >= 0");
  return 1.0 - q_function(delta / sigma_w);
}

BackoffParams make_backoff(int n, int p, double rho_dl, double sigma_w) {
  BackoffParams out;
  out.beta = nominal_peak_sinr(n, p, rho_dl);
  out.sigma_w = sigma_w;
  if (sigma_w > 0.0 && out.beta > 2.0)
    out.delta = optimal_backoff(out.beta, sigma_w).value_or(0.0);
  out.eta = sigma_w > 0.0 ? backoff_efficiency(out.delta, sigma_w) : 1.0;
  return out;
}

int shared_channels(const ProtocolConfig& cfg) {
  if (cfg.r_override > 0) return cfg.r_override;
  if (cfg.groups > 1)
    return block_diag_channels(cfg.c_half, cfg.s, cfg.n, cfg.groups);
  return required_channels(cfg.c_half, cfg.s, cfg.n);
}

ChannelRealization draw_realization(const ProtocolConfig& cfg, Rng& rng) {
  ChannelRealization chan;
  chan.H = gen_downlink(cfg.n, cfg.p, rng);
  chan.beams = gen_beams(cfg.p, rng);
  const int r = shared_channels(cfg);
  const FeedbackMatrixKind kind = cfg.groups > 1
                                      ? FeedbackMatrixKind::BlockDiagonal
                                      : FeedbackMatrixKind::GaussianFading;
  chan.A = gen_feedback_matrix(kind, r, cfg.n, rng, cfg.groups);
  chan.sigma_w_sq = cfg.rho_ul > 0.0 ? 1.0 / cfg.rho_ul : 0.0;
  return chan;
}

namespace {

struct Recovered {
  std::vector<int> support;
  Eigen::VectorXd values;
};

// support recovery + LS refinement on one (sub)system
Recovered recover_block(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& y,
                        const ProtocolConfig& cfg, double sigma_w_sq,
                        int s_target) {
  const LiftedSystem sys = lift_to_real(A, y);
  Recovered rec;
  if (cfg.recovery == RecoveryMethod::MaxCorrelation) {
    rec.support = max_correlation_support(sys, s_target);
  } else {
    double alpha = cfg.lasso_alpha;
    if (alpha <= 0.0) {
      const double sigma_w = std::sqrt(sigma_w_sq);
      const double m = static_cast<double>(sys.A.rows());
      alpha = sigma_w * std::sqrt(2.0 * std::log(cfg.n) / m);
      if (alpha <= 0.0) alpha = 1e-8;  // noiseless fallback
    }
    const Eigen::VectorXd v = lasso(sys, alpha);
    rec.support = support_of(v);
    if (rec.support.empty()) return rec;
    // LS needs at most rows(A_real) columns; keep the largest entries
    const auto cap = static_cast<std::size_t>(sys.A.rows());
    if (rec.support.size() > cap) {
      std::sort(rec.support.begin(), rec.support.end(),
                [&v](int a, int b) { return std::fabs(v(a)) > std::fabs(v(b)); });
      rec.support.resize(cap);
      std::sort(rec.support.begin(), rec.support.end());
    }
  }
  rec.values = ls_refine(sys, rec.support);
  return rec;
}

// dispatches block-diagonal systems to per-block recovery
Recovered recover_feedback(const FeedbackMatrix& A, const Eigen::VectorXcd& y,
                           const ProtocolConfig& cfg, double sigma_w_sq,
                           int s_target) {
  if (A.kind != FeedbackMatrixKind::BlockDiagonal || A.groups <= 1)
    return recover_block(A.A, y, cfg, sigma_w_sq, s_target);
  const int groups = A.groups;
  const int rb = static_cast<int>(A.A.rows()) / groups;
  const int nb = static_cast<int>(A.A.cols()) / groups;
  const int sb = std::max(1, s_target / groups);
  Recovered all;
  for (int g = 0; g < groups; ++g) {
    const Eigen::MatrixXcd sub = A.A.block(g * rb, g * nb, rb, nb);
    const Eigen::VectorXcd suby = y.segment(g * rb, rb);
    const Recovered rec = recover_block(sub, suby, cfg, sigma_w_sq, sb);
    const auto base = static_cast<Eigen::Index>(all.support.size());
    all.values.conservativeResize(base + rec.values.size());
    for (std::size_t i = 0; i < rec.support.size(); ++i) {
      all.support.push_back(rec.support[i] + g * nb);
      all.values(base + static_cast<Eigen::Index>(i)) = rec.values(i);
    }
  }
  return all;
}

// beam index with the largest SINR for each user
Eigen::VectorXi best_beams(const Eigen::MatrixXd& S) {
  Eigen::VectorXi best(S.rows());
  for (Eigen::Index i = 0; i < S.rows(); ++i) {
    Eigen::Index m = 0;
    S.row(i).maxCoeff(&m);
    best(i) = static_cast<int>(m);
  }
  return best;
}

int pick_uniform(const std::vector<int>& candidates, Rng& rng) {
  if (candidates.size() == 1) return candidates[0];
  return candidates[rng.below(static_cast<std::uint32_t>(candidates.size()))];
}

}  // namespace

std::vector<BeamOutcome> run_analog_round(const ChannelRealization& chan,
                                          const ProtocolConfig& cfg,
                                          Rng& rng) {
  const Eigen::MatrixXd S = compute_sinr(chan.H, chan.beams, cfg.rho_dl);
  const Eigen::VectorXi best = best_beams(S);
  const double zeta = analog_threshold(cfg.s, cfg.n, cfg.rho_dl, cfg.p);
  const int r = static_cast<int>(chan.A.A.rows());
  // LS averaging across r channels shrinks the estimate noise to sigma_w/sqrt(r)
  const double sigma_eff = std::sqrt(chan.sigma_w_sq / r);
  const BackoffParams bo = make_backoff(cfg.n, cfg.p, cfg.rho_dl, sigma_eff);
  std::vector<BeamOutcome> outcomes(cfg.p);
  for (int m = 0; m < cfg.p; ++m) {
    BeamOutcome& out = outcomes[m];
    out.beam = m;
    Eigen::VectorXd v = Eigen::VectorXd::Zero(cfg.n);
    for (int i = 0; i < cfg.n; ++i)
      if (best(i) == m && S(i, m) >= zeta) v(i) = S(i, m);
    const FeedbackObservation obs =
        transmit_feedback(chan.A, v, chan.sigma_w_sq, rng);
    Recovered rec;
    try {
      rec = recover_feedback(chan.A, obs.y, cfg, chan.sigma_w_sq, cfg.s);
    } catch (const std::exception&) {
      continue;  // degenerate recovery -> outage
    }
    if (rec.support.empty()) continue;
    if ((rec.values.array() < 0.5 * zeta).all()) continue;  // energy test
    double best_val = -std::numeric_limits<double>::infinity();
    std::vector<int> ties;
    for (Eigen::Index j = 0; j < rec.values.size(); ++j) {
      const double backed = rec.values(j) - bo.delta;
      if (backed > best_val) {
        best_val = backed;
        ties.assign(1, static_cast<int>(j));
      } else if (backed == best_val) {
        ties.push_back(static_cast<int>(j));
      }
    }
    const int sel = pick_uniform(ties, rng);
    out.outage = false;
    out.user = rec.support[sel];
    out.reported_cqi = std::fmax(rec.values(sel) - bo.delta, 0.0);
  }
  return outcomes;
}

std::vector<BeamOutcome> run_digital_round(const ChannelRealization& chan,
                                           const ProtocolConfig& cfg,
                                           Rng& rng) {
  const Eigen::MatrixXd S = compute_sinr(chan.H, chan.beams, cfg.rho_dl);
  const Eigen::VectorXi best = best_beams(S);
  const ThresholdSet th =
      digital_thresholds(cfg.s, cfg.n, cfg.k, cfg.rho_dl, cfg.p);
  std::vector<BeamOutcome> outcomes(cfg.p);
  for (int m = 0; m < cfg.p; ++m) {
    BeamOutcome& out = outcomes[m];
    out.beam = m;
    for (int i = cfg.k - 1; i >= 0 && out.outage; --i) {
      const double lo = th.zetas[i];
      const double hi = (i + 1 < cfg.k)
                            ? th.zetas[i + 1]
                            : std::numeric_limits<double>::infinity();
      Eigen::VectorXd v = Eigen::VectorXd::Zero(cfg.n);
      for (int u = 0; u < cfg.n; ++u) {
        const double x = S(u, m);
        if (best(u) == m && x >= lo && x < hi) v(u) = 1.0;
      }
      const FeedbackObservation obs =
          transmit_feedback(chan.A, v, chan.sigma_w_sq, rng);
      Recovered rec;
      try {
        rec = recover_feedback(chan.A, obs.y, cfg, chan.sigma_w_sq, cfg.s);
      } catch (const std::exception&) {
        continue;  // degenerate recovery -> interval treated as empty
      }
      std::vector<int> candidates;
      for (Eigen::Index j = 0; j < rec.values.size(); ++j)
        if (rec.values(j) >= 0.5) candidates.push_back(static_cast<int>(j));
      if (candidates.empty()) continue;  // energy test: interval inactive
      const int sel = pick_uniform(candidates, rng);
      out.outage = false;
      out.user = rec.support[sel];
      out.reported_cqi = lo;
    }
  }
  return outcomes;
}

}  // namespace csfb
