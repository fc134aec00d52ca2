#include <doctest.h>

#include <cmath>
#include <vector>

#include "csfb/protocol.hpp"
#include "csfb/rbf.hpp"
#include "csfb/recovery.hpp"
#include "csfb/special.hpp"

using namespace csfb;

namespace {

// left-hand side of the stationarity condition, minus 1 (independent copy)
double stationarity_residual(double d, double beta, double sigma_w) {
  const double sqrt_2pi = 2.5066282746310005024;
  return q_function(d / sigma_w) +
         (beta - d) / (sqrt_2pi * sigma_w) *
             std::exp(-d * d / (2.0 * sigma_w * sigma_w)) *
             std::log(beta - d) -
         1.0;
}

// n x p channel with one designated strong user per listed beam; everyone
// else is far below any threshold
Eigen::MatrixXcd planted_channel(int n, int p,
                                 const std::vector<std::pair<int, double>>&
                                     strong,  // (user, amplitude) on beam u%p
                                 Rng& rng) {
  Eigen::MatrixXcd H(n, p);
  for (int i = 0; i < n; ++i)
    for (int m = 0; m < p; ++m) H(i, m) = 0.01 * rng.cgaussian();
  int beam = 0;
  for (const auto& [user, amp] : strong) {
    H(user, beam % p) = amp;
    beam++;
  }
  return H;
}

}  // namespace

TEST_CASE("analog_threshold") {
  CHECK(analog_threshold(10, 10, 5.0, 4) == doctest::Approx(0.0).epsilon(1e-9));
  // p=1: exponential law, zeta = rho ln(n/s)
  CHECK(analog_threshold(1, 10, 1.0, 1) ==
        doctest::Approx(std::log(10.0)).epsilon(1e-9));
  CHECK(analog_threshold(6, 100, 10.0, 4) ==
        doctest::Approx(1.4350528874822889).epsilon(1e-9));
  CHECK(analog_threshold(5, 100, 10.0, 4) ==
        doctest::Approx(1.5755404830397688).epsilon(1e-9));
  CHECK_THROWS_AS(analog_threshold(0, 10, 1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(analog_threshold(11, 10, 1.0, 1), std::invalid_argument);
}

TEST_CASE("digital_thresholds") {
  SUBCASE("k=1 reduces to the analog threshold") {
    const ThresholdSet t = digital_thresholds(5, 100, 1, 10.0, 4);
    REQUIRE(t.k() == 1);
    CHECK(t.zetas[0] ==
          doctest::Approx(analog_threshold(5, 100, 10.0, 4)).epsilon(1e-12));
  }
  SUBCASE("p=1 analytic pair") {
    const ThresholdSet t = digital_thresholds(1, 100, 2, 1.0, 1);
    REQUIRE(t.k() == 2);
    CHECK(t.zetas[0] == doctest::Approx(std::log(50.0)).epsilon(1e-9));
    CHECK(t.zetas[1] == doctest::Approx(std::log(100.0)).epsilon(1e-9));
  }
  SUBCASE("frozen k=4 ladder at the default operating point") {
    const ThresholdSet t = digital_thresholds(1, 100, 4, 10.0, 4);
    REQUIRE(t.k() == 4);
    CHECK(t.zetas[0] == doctest::Approx(1.7576282989251512).epsilon(1e-9));
    CHECK(t.zetas[1] == doctest::Approx(2.0097607961947761).epsilon(1e-9));
    CHECK(t.zetas[2] == doctest::Approx(2.4007092927645119).epsilon(1e-9));
    CHECK(t.zetas[3] == doctest::Approx(3.1753996331041515).epsilon(1e-9));
  }
  SUBCASE("ascending and CCDF-consistent") {
    const ThresholdSet t = digital_thresholds(2, 100, 5, 10.0, 4);
    for (int i = 1; i < t.k(); ++i) CHECK(t.zetas[i] > t.zetas[i - 1]);
    for (int i = 1; i <= t.k(); ++i)
      CHECK(sinr_ccdf(t.zetas[i - 1], 10.0, 4) ==
            doctest::Approx(2.0 * (5 - i + 1) / 100.0).epsilon(1e-8));
  }
  SUBCASE("s*k > n rejected") {
    CHECK_THROWS_AS(digital_thresholds(20, 100, 8, 10.0, 4),
                    std::invalid_argument);
  }
}

TEST_CASE("nominal_peak_sinr") {
  CHECK(nominal_peak_sinr(100, 4, 10.0) ==
        doctest::Approx(16.508109343722891).epsilon(1e-12));
  // p=2 kills the log log term
  CHECK(nominal_peak_sinr(50, 2, 3.0) ==
        doctest::Approx(1.0 + 3.0 * std::log(50.0)).epsilon(1e-12));
  CHECK_THROWS_AS(nominal_peak_sinr(2, 4, 10.0), std::invalid_argument);
}

TEST_CASE("optimal_backoff") {
  SUBCASE("frozen roots and tiny residuals") {
    const struct {
      double beta, sigma, root;
    } cases[] = {
        {10.0, 0.1, 0.29926514106297784},
        {10.0, 0.316, 0.80612159685454476},
        {6.0, 0.5, 0.97322277926676733},
    };
    for (const auto& c : cases) {
      const std::optional<double> d = optimal_backoff(c.beta, c.sigma);
      REQUIRE(d.has_value());
      CHECK(*d == doctest::Approx(c.root).epsilon(1e-8));
      CHECK(std::abs(stationarity_residual(*d, c.beta, c.sigma)) < 1e-8);
    }
  }
  SUBCASE("vanishing noise gives vanishing back-off") {
    const std::optional<double> d = optimal_backoff(10.0, 1e-6);
    REQUIRE(d.has_value());
    CHECK(*d < 1e-4);
  }
  SUBCASE("matches a fine grid argmax of the effective rate") {
    const double beta = 10.0, sigma = 0.316;
    const std::optional<double> d = optimal_backoff(beta, sigma);
    REQUIRE(d.has_value());
    double best_d = 0.0, best_v = -1.0;
    for (double x = 1e-3; x < beta - 1.0; x += 1e-3) {
      const double v =
          (1.0 - q_function(x / sigma)) * std::log2(beta - x);
      if (v > best_v) {
        best_v = v;
        best_d = x;
      }
    }
    CHECK(std::abs(best_d - *d) <= 2e-3);
  }
  SUBCASE("degenerate regime returns nullopt") {
    CHECK(!optimal_backoff(2.5, 5.0).has_value());
  }
  SUBCASE("guards") {
    CHECK_THROWS_AS(optimal_backoff(1.5, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(optimal_backoff(10.0, 0.0), std::invalid_argument);
  }
}

TEST_CASE("backoff_efficiency") {
  CHECK(backoff_efficiency(0.0, 1.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(backoff_efficiency(3.0, 1.0) ==
        doctest::Approx(0.998650101968370).epsilon(1e-12));
  CHECK(backoff_efficiency(0.5, 1.0) < backoff_efficiency(0.6, 1.0));
}

TEST_CASE("make_backoff") {
  SUBCASE("wires beta, delta, eta together") {
    const BackoffParams bo = make_backoff(100, 4, 10.0, 0.316);
    CHECK(bo.beta == doctest::Approx(16.508109343722891).epsilon(1e-12));
    CHECK(bo.delta ==
          doctest::Approx(*optimal_backoff(bo.beta, 0.316)).epsilon(1e-12));
    CHECK(bo.eta ==
          doctest::Approx(backoff_efficiency(bo.delta, 0.316)).epsilon(1e-12));
  }
  SUBCASE("noiseless reports are never backed off") {
    const BackoffParams bo = make_backoff(100, 4, 10.0, 0.0);
    CHECK(bo.delta == 0.0);
    CHECK(bo.eta == 1.0);
  }
  SUBCASE("degenerate beta falls back to zero back-off") {
    // p=8 at rho=10 drives beta negative
    const BackoffParams bo = make_backoff(100, 8, 10.0, 0.3);
    CHECK(bo.delta == 0.0);
  }
}

TEST_CASE("shared_channels resolution order") {
  ProtocolConfig cfg;
  cfg.n = 100;
  cfg.s = 5;
  cfg.c_half = 0.8;
  CHECK(shared_channels(cfg) == 19);
  cfg.groups = 2;
  cfg.s = 6;
  cfg.c_half = 1.0;
  CHECK(shared_channels(cfg) == block_diag_channels(1.0, 6, 100, 2));
  cfg.r_override = 7;
  CHECK(shared_channels(cfg) == 7);
}

TEST_CASE("draw_realization shapes") {
  ProtocolConfig cfg;
  cfg.n = 30;
  cfg.p = 3;
  cfg.s = 2;
  cfg.c_half = 1.0;
  Rng rng(6, 0);
  const ChannelRealization chan = draw_realization(cfg, rng);
  CHECK(chan.H.rows() == 30);
  CHECK(chan.H.cols() == 3);
  CHECK(chan.beams.rows() == 3);
  CHECK((chan.beams.adjoint() * chan.beams -
         Eigen::MatrixXcd::Identity(3, 3))
            .norm() < 1e-10);
  CHECK(chan.A.A.rows() == required_channels(1.0, 2, 30));
  CHECK(chan.A.A.cols() == 30);
  CHECK(chan.sigma_w_sq == doctest::Approx(0.1).epsilon(1e-14));
}

TEST_CASE("run_analog_round on planted channels") {
  ProtocolConfig cfg;
  cfg.n = 12;
  cfg.p = 2;
  cfg.rho_dl = 10.0;
  cfg.s = 2;
  cfg.r_override = 8;

  Rng rng(400, 0);
  ChannelRealization chan;
  // user 3 participates on beam 0; user 7 sits just below the threshold
  // (so the transmitted vector is 1-sparse and LS is exact no matter which
  // extra column max-correlation drags in); beam 1 left empty
  chan.H = planted_channel(12, 2, {{3, 3.0}}, rng);
  chan.H(7, 0) = 0.5;
  chan.H(7, 1) = 0.001;
  chan.beams = Eigen::MatrixXcd::Identity(2, 2);
  chan.A = gen_feedback_matrix(FeedbackMatrixKind::GaussianFading, 8, 12, rng);
  chan.sigma_w_sq = 0.0;

  const Eigen::MatrixXd S = compute_sinr(chan.H, chan.beams, cfg.rho_dl);
  REQUIRE(S(7, 0) < analog_threshold(2, 12, 10.0, 2));
  Rng round_rng(401, 0);
  const std::vector<BeamOutcome> out = run_analog_round(chan, cfg, round_rng);
  REQUIRE(out.size() == 2);

  SUBCASE("the lone participant is served with an exact report") {
    REQUIRE(!out[0].outage);
    CHECK(*out[0].user == 3);
    // sigma_w = 0: no back-off, LS is exact
    CHECK(*out[0].reported_cqi ==
          doctest::Approx(S(3, 0)).epsilon(1e-8));
  }
  SUBCASE("beam without participants is an outage") {
    CHECK(out[1].outage);
    CHECK(!out[1].user.has_value());
    CHECK(!out[1].reported_cqi.has_value());
  }
}

TEST_CASE("analog selection matches the genie on one-strong-user beams") {
  // one planted strong user per beam, noiseless feedback, generous r
  ProtocolConfig cfg;
  cfg.n = 20;
  cfg.p = 2;
  cfg.rho_dl = 10.0;
  cfg.s = 1;
  cfg.c_half = 2.0;  // r = ceil(2 ln 19) = 6
  int matches = 0;
  const int trials = 200;
  for (int t = 0; t < trials; ++t) {
    Rng rng(9000, static_cast<std::uint64_t>(t));
    const int u0 = static_cast<int>(rng.below(20));
    int u1 = static_cast<int>(rng.below(20));
    if (u1 == u0) u1 = (u1 + 1) % 20;
    ChannelRealization chan;
    chan.H = planted_channel(20, 2, {}, rng);
    chan.H(u0, 0) = 2.0 + rng.uniform();
    chan.H(u1, 1) = 2.0 + rng.uniform();
    chan.beams = Eigen::MatrixXcd::Identity(2, 2);
    chan.A = gen_feedback_matrix(FeedbackMatrixKind::GaussianFading,
                                 shared_channels(cfg), 20, rng);
    chan.sigma_w_sq = 0.0;
    const std::vector<BeamOutcome> out = run_analog_round(chan, cfg, rng);
    matches += !out[0].outage && *out[0].user == u0 && !out[1].outage &&
               *out[1].user == u1;
  }
  CHECK(matches >= 190);  // target match rate 0.95
}

TEST_CASE("expected above-threshold count per beam is s") {
  // at this operating point zeta = 1.576 > 1, so above-threshold implies
  // best beam and the per-beam expectation is exactly n * s/n = s
  const int n = 100, p = 4;
  const double rho = 10.0;
  const double zeta = analog_threshold(5, n, rho, p);
  REQUIRE(zeta > 1.0);
  double count = 0.0;
  const int reps = 400;
  Rng rng(31415, 0);
  for (int t = 0; t < reps; ++t) {
    const Eigen::MatrixXcd H = gen_downlink(n, p, rng);
    const Eigen::MatrixXcd phi = gen_beams(p, rng);
    const Eigen::MatrixXd S = compute_sinr(H, phi, rho);
    for (int i = 0; i < n; ++i) {
      Eigen::Index m;
      S.row(i).maxCoeff(&m);
      count += S(i, m) >= zeta;
    }
  }
  CHECK(count / (reps * p) == doctest::Approx(5.0).epsilon(0.06));
}

TEST_CASE("backoff safety: reports rarely exceed the truth") {
  // the safety target eta is stated for exact support recovery, so plant
  // exactly s strong users per beam and give the decoder a generous r; what
  // remains is the feedback noise the back-off is there to absorb
  ProtocolConfig cfg;
  cfg.n = 40;
  cfg.p = 2;
  cfg.s = 3;
  cfg.c_half = 3.0;  // r = ceil(9 ln 40) = 34
  cfg.rho_dl = 10.0;
  cfg.rho_ul = 10.0;
  const int r = shared_channels(cfg);
  const double sigma_eff = std::sqrt(0.1 / r);
  const double eta =
      make_backoff(cfg.n, cfg.p, cfg.rho_dl, sigma_eff).eta;
  std::int64_t served = 0, safe = 0;
  const int trials = 10000;
  for (int t = 0; t < trials; ++t) {
    Rng rng(52000, static_cast<std::uint64_t>(t));
    ChannelRealization chan;
    chan.H = planted_channel(40, 2, {}, rng);
    for (int u = 0; u < 6; ++u)
      chan.H(u, u % 2) = 4.0 + 0.5 * rng.uniform();  // SINR ~ 160-200
    chan.beams = Eigen::MatrixXcd::Identity(2, 2);
    chan.A =
        gen_feedback_matrix(FeedbackMatrixKind::GaussianFading, r, 40, rng);
    chan.sigma_w_sq = 0.1;
    const Eigen::MatrixXd S = compute_sinr(chan.H, chan.beams, cfg.rho_dl);
    for (const BeamOutcome& o : run_analog_round(chan, cfg, rng)) {
      if (o.outage) continue;
      ++served;
      safe += *o.reported_cqi <= S(*o.user, o.beam) + 1e-12;
    }
  }
  REQUIRE(served > 0);
  CHECK(static_cast<double>(safe) / served >= eta - 0.02);
}

TEST_CASE("run_digital_round on planted channels") {
  ProtocolConfig cfg;
  cfg.n = 12;
  cfg.p = 2;
  cfg.rho_dl = 10.0;
  cfg.s = 3;
  cfg.k = 2;
  cfg.r_override = 8;
  const ThresholdSet th = digital_thresholds(3, 12, 2, 10.0, 2);

  SUBCASE("single occupant of the top interval is served at zeta_k") {
    Rng rng(600, 0);
    ChannelRealization chan;
    chan.H = planted_channel(12, 2, {}, rng);
    chan.H(5, 0) = 4.0;  // SINR ~ 160 on beam 0, top interval
    chan.beams = Eigen::MatrixXcd::Identity(2, 2);
    chan.A =
        gen_feedback_matrix(FeedbackMatrixKind::GaussianFading, 8, 12, rng);
    chan.sigma_w_sq = 1e-10;
    const std::vector<BeamOutcome> out = run_digital_round(chan, cfg, rng);
    REQUIRE(!out[0].outage);
    CHECK(*out[0].user == 5);
    CHECK(*out[0].reported_cqi == doctest::Approx(th.zetas.back()));
    CHECK(out[1].outage);  // nobody above zeta_1 there
  }

  SUBCASE("selection among recovered top-interval users is uniform") {
    // identity feedback matrix: recovery of the planted trio is exact every
    // round, isolating the tie-break that this subcase measures
    int hits[3] = {0, 0, 0};
    const int planted[3] = {2, 6, 9};
    const int rounds = 6000;
    for (int t = 0; t < rounds; ++t) {
      Rng rng(601, static_cast<std::uint64_t>(t));
      ChannelRealization chan;
      chan.H = planted_channel(12, 2, {}, rng);
      for (int u : planted) chan.H(u, 0) = 4.0 + 0.1 * rng.uniform();
      chan.beams = Eigen::MatrixXcd::Identity(2, 2);
      chan.A = gen_feedback_matrix(FeedbackMatrixKind::DedicatedDiagonal, 12,
                                   12, rng);
      chan.sigma_w_sq = 1e-8;
      const std::vector<BeamOutcome> out = run_digital_round(chan, cfg, rng);
      REQUIRE(!out[0].outage);
      for (int j = 0; j < 3; ++j) hits[j] += *out[0].user == planted[j];
    }
    double chi2 = 0.0;
    const double expect = rounds / 3.0;
    int total = 0;
    for (int j = 0; j < 3; ++j) {
      chi2 += (hits[j] - expect) * (hits[j] - expect) / expect;
      total += hits[j];
    }
    CHECK(total == rounds);   // nobody outside the planted set ever wins
    CHECK(chi2 < 13.82);      // chi^2_{2} at the 0.1% level
  }

  SUBCASE("everyone below the lowest threshold is an outage") {
    Rng rng(602, 0);
    ChannelRealization chan;
    chan.H = planted_channel(12, 2, {}, rng);
    chan.beams = Eigen::MatrixXcd::Identity(2, 2);
    chan.A =
        gen_feedback_matrix(FeedbackMatrixKind::GaussianFading, 8, 12, rng);
    chan.sigma_w_sq = 1e-8;
    for (const BeamOutcome& o : run_digital_round(chan, cfg, rng)) {
      CHECK(o.outage);
    }
  }

  SUBCASE("reported CQI is always one of the thresholds") {
    ProtocolConfig full;
    full.n = 40;
    full.p = 2;
    full.s = 2;
    full.k = 3;
    full.c_half = 1.5;
    for (int t = 0; t < 50; ++t) {
      Rng rng(603, static_cast<std::uint64_t>(t));
      const ChannelRealization chan = draw_realization(full, rng);
      const ThresholdSet ladder =
          digital_thresholds(full.s, full.n, full.k, full.rho_dl, full.p);
      for (const BeamOutcome& o : run_digital_round(chan, full, rng)) {
        if (o.outage) continue;
        bool found = false;
        for (double z : ladder.zetas) found |= *o.reported_cqi == z;
        CHECK(found);
      }
    }
  }
}

TEST_CASE("lasso-backed analog round runs clean") {
  ProtocolConfig cfg;
  cfg.n = 40;
  cfg.p = 2;
  cfg.s = 2;
  cfg.c_half = 1.5;
  cfg.recovery = RecoveryMethod::Lasso;
  int served = 0;
  for (int t = 0; t < 25; ++t) {
    Rng rng(700, static_cast<std::uint64_t>(t));
    const ChannelRealization chan = draw_realization(cfg, rng);
    for (const BeamOutcome& o : run_analog_round(chan, cfg, rng)) {
      if (!o.outage) {
        ++served;
        CHECK(*o.reported_cqi >= 0.0);
        CHECK(*o.user >= 0);
        CHECK(*o.user < 40);
      }
    }
  }
  CHECK(served > 0);
}
