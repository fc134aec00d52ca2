#include "csfb/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "csfb/parallel.hpp"
#include "csfb/quadrature.hpp"
#include "csfb/rbf.hpp"
#include "csfb/special.hpp"

namespace csfb {

namespace {

constexpr double kLog2 = 0.69314718055994530942;

double log2_rate(double sinr) { return std::log2(1.0 + sinr); }

// mean and 95% CI half width from per-trial sums, reduced in index order
ThroughputEstimate summarize(const std::vector<double>& xs) {
  ThroughputEstimate est;
  est.trials = static_cast<std::int64_t>(xs.size());
  const double sum = std::accumulate(xs.begin(), xs.end(), 0.0);
  est.value = sum / est.trials;
  if (est.trials > 1) {
    double ss = 0.0;
    for (const double x : xs) ss += (x - est.value) * (x - est.value);
    const double sd = std::sqrt(ss / (est.trials - 1));
    est.ci_half_width = 1.96 * sd / std::sqrt(static_cast<double>(est.trials));
  }
  return est;
}

double genie_trial(const ProtocolConfig& cfg, Rng& rng) {
  const Eigen::MatrixXcd H = gen_downlink(cfg.n, cfg.p, rng);
  const Eigen::MatrixXcd beams = gen_beams(cfg.p, rng);
  const Eigen::MatrixXd S = compute_sinr(H, beams, cfg.rho_dl);
  double rate = 0.0;
  for (int m = 0; m < cfg.p; ++m) rate += log2_rate(S.col(m).maxCoeff());
  return rate;
}

double noiseless_dedicated_trial(const ProtocolConfig& cfg, Rng& rng) {
  const Eigen::MatrixXcd H = gen_downlink(cfg.n, cfg.p, rng);
  const Eigen::MatrixXcd beams = gen_beams(cfg.p, rng);
  const Eigen::MatrixXd S = compute_sinr(H, beams, cfg.rho_dl);
  // every user reports its best beam's SINR; each beam serves the best
  // reporter, and beams nobody reported are lost
  Eigen::VectorXd best_val = Eigen::VectorXd::Constant(cfg.p, -1.0);
  for (int i = 0; i < cfg.n; ++i) {
    Eigen::Index m = 0;
    const double v = S.row(i).maxCoeff(&m);
    if (v > best_val(m)) best_val(m) = v;
  }
  double rate = 0.0;
  for (int m = 0; m < cfg.p; ++m)
    if (best_val(m) >= 0.0) rate += log2_rate(best_val(m));
  return rate;
}

double shared_trial(const ProtocolConfig& cfg, ProtocolVariant variant,
                    Rng& rng) {
  const ChannelRealization chan = draw_realization(cfg, rng);
  const Eigen::MatrixXd S = compute_sinr(chan.H, chan.beams, cfg.rho_dl);
  const std::vector<BeamOutcome> outcomes =
      variant == ProtocolVariant::AnalogShared
          ? run_analog_round(chan, cfg, rng)
          : run_digital_round(chan, cfg, rng);
  double rate = 0.0;
  for (const BeamOutcome& out : outcomes) {
    if (out.outage) continue;
    // realized rate: the selected user's true SINR capped by the report (an
    // overestimated report cannot beat the channel's actual capacity)
    const double reported = *out.reported_cqi;
    const double truth = S(*out.user, out.beam);
    rate += log2_rate(std::min(reported, truth));
  }
  return rate;
}

}  // namespace

ThroughputEstimate rbf_throughput_mc(const ProtocolConfig& cfg,
                                     ProtocolVariant variant,
                                     std::int64_t trials, std::uint64_t seed,
                                     int workers, std::uint64_t stream_base) {
  if (trials < 1)
    throw std::invalid_argument("rbf_throughput_mc: trials must be >= 1");
  const std::vector<double> rates =
      run_trials<double>(trials, workers, [&](std::int64_t t) {
        Rng rng(seed, stream_base + static_cast<std::uint64_t>(t));
        switch (variant) {
          case ProtocolVariant::GenieDedicated:
            return genie_trial(cfg, rng);
          case ProtocolVariant::NoiselessDedicated:
            return noiseless_dedicated_trial(cfg, rng);
          default:
            return shared_trial(cfg, variant, rng);
        }
      });
  return summarize(rates);
}

double rbf_throughput_approx(int n, int p, double rho) {
  const double beta = nominal_peak_sinr(n, p, rho);
  if (!(beta > 0.0))
    throw std::domain_error("rbf_throughput_approx: nonpositive log argument");
  return p * std::log2(beta);
}

double effective_throughput(double beta, double delta, double sigma_w, int p) {
  if (delta < 0.0 || delta >= beta - 1.0)
    throw std::domain_error("effective_throughput: need 0 <= delta < beta - 1");
  if (!(sigma_w > 0.0))
    throw std::domain_error("effective_throughput: sigma_w must be > 0");
  return (1.0 - q_function(delta / sigma_w)) * p * std::log2(beta - delta);
}

double digital_throughput_closed(int n, int p, double rho,
                                 const ThresholdSet& thresholds) {
  const int k = thresholds.k();
  if (k < 1)
    throw std::invalid_argument("digital_throughput_closed: empty thresholds");
  double sum = 0.0;
  for (int i = 0; i < k; ++i) {
    const double Fi = 1.0 - sinr_ccdf(thresholds.zetas[i], rho, p);
    const double Fnext =
        (i + 1 < k) ? 1.0 - sinr_ccdf(thresholds.zetas[i + 1], rho, p) : 1.0;
    sum += std::log2(1.0 + thresholds.zetas[i]) *
           (std::pow(Fnext, n) - std::pow(Fi, n));
  }
  return p * sum;
}

EcmStats ecm_shared_mc(int s, int r, double sigma_v_sq, double sigma_w_sq,
                       std::int64_t trials, std::uint64_t seed, int workers,
                       std::uint64_t stream_base) {
  if (s < 1 || r < s)
    throw std::invalid_argument("ecm_shared_mc: need r >= s >= 1");
  if (!(sigma_v_sq > 0.0) || !(sigma_w_sq > 0.0))
    throw std::invalid_argument("ecm_shared_mc: variances must be > 0");
  if (trials < 1)
    throw std::invalid_argument("ecm_shared_mc: trials must be >= 1");
  struct TraceDet {
    double trace;
    double det;
  };
  const std::vector<TraceDet> draws =
      run_trials<TraceDet>(trials, workers, [&](std::int64_t t) {
        Rng rng(seed, stream_base + static_cast<std::uint64_t>(t));
        Eigen::MatrixXcd A(r, s);
        for (int i = 0; i < r; ++i)
          for (int j = 0; j < s; ++j) A(i, j) = rng.cgaussian();
        Eigen::MatrixXcd M = (A.adjoint() * A) / sigma_w_sq;
        M.diagonal().array() += 1.0 / sigma_v_sq;
        const Eigen::LLT<Eigen::MatrixXcd> llt(M);
        const Eigen::MatrixXcd inv =
            llt.solve(Eigen::MatrixXcd::Identity(s, s));
        const double tr = inv.trace().real();
        if (s == 1) return TraceDet{tr, tr};  // scalar: same quantity, one path
        double logdet = 0.0;
        for (int j = 0; j < s; ++j)
          logdet += std::log(std::abs(llt.matrixL()(j, j)));
        return TraceDet{tr, std::exp(-2.0 * logdet)};
      });
  EcmStats out;
  out.variant = EcmVariant::MonteCarlo;
  for (const TraceDet& d : draws) {
    out.trace += d.trace;
    out.determinant += d.det;
  }
  out.trace /= trials;
  out.determinant /= trials;
  return out;
}

double ecm_shared_trace_closed(int s, int r, double rho) {
  if (s < 1 || r < 1)
    throw std::invalid_argument("ecm_shared_trace_closed: need s, r >= 1");
  if (!(rho > 0.0))
    throw std::invalid_argument("ecm_shared_trace_closed: rho must be > 0");
  const double lg = std::lgamma(static_cast<double>(r));
  auto f = [rho, r, lg](double x) {
    if (x <= 0.0) return 0.0;
    return std::exp((r - 1) * std::log(x) - x - lg) / (1.0 + rho * x);
  };
  const QuadResult q = integrate_semi_inf(f, 0.0, 1e-10);
  return s * q.value;
}

double ecm_shared_trace_gamma_form(int s, int r, double rho) {
  if (r > 10)
    throw std::invalid_argument(
        "ecm_shared_trace_gamma_form: unstable beyond r = 10, use the quadrature form");
  const double x = 1.0 / rho;
  return s * std::pow(x, r) * std::exp(x) * upper_gamma_negint(r, x);
}

double ecm_shared_det_closed(int s, int r, double rho) {
  if (s < 1 || r < s)
    throw std::invalid_argument("ecm_shared_det_closed: need r >= s >= 1");
  if (!(rho > 0.0))
    throw std::invalid_argument("ecm_shared_det_closed: rho must be > 0");
  auto density = [s, r](double lam) { return wishart_eigen_density(lam, s, r); };
  const QuadResult norm = integrate_semi_inf(density, 0.0, 1e-9);
  if (std::fabs(norm.value - 1.0) > 1e-6)
    throw std::runtime_error("ecm_shared_det_closed: eigenvalue density failed normalization");
  auto f = [s, r, rho](double lam) {
    return wishart_eigen_density(lam, s, r) / (1.0 + rho * lam);
  };
  const QuadResult q = integrate_semi_inf(f, 0.0, 1e-10);
  return std::pow(q.value, s);
}

EcmStats ecm_shared_approx(int s, int r, double rho) {
  if (r < 1)
    throw std::invalid_argument("ecm_shared_approx: r must be >= 1");
  EcmStats out;
  out.variant = EcmVariant::LargeRApprox;
  out.trace = s / (rho * r);
  out.determinant = std::pow(rho * r, -s);
  return out;
}

EcmStats ecm_dedicated(int n, double rho) {
  if (n < 1) throw std::invalid_argument("ecm_dedicated: n must be >= 1");
  if (rho < 0.0) throw std::invalid_argument("ecm_dedicated: rho must be >= 0");
  EcmStats out;
  out.variant = EcmVariant::Dedicated;
  out.trace = n / (1.0 + rho);
  out.determinant = std::pow(1.0 + rho, -n);
  return out;
}

FeedbackLoad feedback_load(FeedbackScheme scheme, int p, int r, int k, int n) {
  if (p < 1 || r < 0 || k < 0 || n < 0)
    throw std::invalid_argument("feedback_load: invalid counts");
  FeedbackLoad out;
  switch (scheme) {
    case FeedbackScheme::AnalogShared:
      out.reals = static_cast<double>(p) * r;
      break;
    case FeedbackScheme::DigitalShared:
      out.bits = static_cast<double>(p) * k * r;
      break;
    case FeedbackScheme::Dedicated:
      out.reals = n;
      out.bits = n * std::log2(static_cast<double>(p));
      break;
  }
  return out;
}

}  // namespace csfb
