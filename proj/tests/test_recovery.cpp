#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "csfb/channel.hpp"
#include "csfb/recovery.hpp"

using namespace csfb;

namespace {

LiftedSystem random_lifted(int r, int n, Rng& rng) {
  Eigen::MatrixXcd A(r, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < r; ++i) A(i, j) = rng.cgaussian();
  Eigen::VectorXcd y(r);
  for (int i = 0; i < r; ++i) y(i) = rng.cgaussian();
  return lift_to_real(A, y);
}

double lasso_objective(const LiftedSystem& sys, const Eigen::VectorXd& v,
                       double alpha) {
  const double m = static_cast<double>(sys.A.rows());
  return (sys.y - sys.A * v).squaredNorm() / (2.0 * m) +
         alpha * v.lpNorm<1>();
}

}  // namespace

TEST_CASE("lift_to_real stacking") {
  SUBCASE("pure imaginary 1x1") {
    Eigen::MatrixXcd A(1, 1);
    A(0, 0) = std::complex<double>(0.0, 1.0);
    Eigen::VectorXcd y(1);
    y(0) = std::complex<double>(0.0, 2.0);
    const LiftedSystem sys = lift_to_real(A, y);
    REQUIRE(sys.A.rows() == 2);
    CHECK(sys.A(0, 0) == 0.0);
    CHECK(sys.A(1, 0) == 1.0);
    CHECK(sys.y(0) == 0.0);
    CHECK(sys.y(1) == 2.0);
  }
  SUBCASE("real inputs leave the bottom half zero") {
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(3, 3) * 2.0;
    Eigen::VectorXcd y = Eigen::VectorXcd::Ones(3);
    const LiftedSystem sys = lift_to_real(A, y);
    CHECK(sys.A.bottomRows(3).isZero(0.0));
    CHECK(sys.y.tail(3).isZero(0.0));
  }
  SUBCASE("residual norms coincide for real v") {
    Rng rng(4, 0);
    Eigen::MatrixXcd A(3, 5);
    for (int j = 0; j < 5; ++j)
      for (int i = 0; i < 3; ++i) A(i, j) = rng.cgaussian();
    Eigen::VectorXcd y(3);
    for (int i = 0; i < 3; ++i) y(i) = rng.cgaussian();
    Eigen::VectorXd v(5);
    v << 0.3, -1.0, 0.0, 2.0, 0.5;
    const LiftedSystem sys = lift_to_real(A, y);
    const double complex_res = (y - A * v.cast<std::complex<double>>()).norm();
    const double lifted_res = (sys.y - sys.A * v).norm();
    CHECK(std::abs(complex_res - lifted_res) < 1e-12);
  }
}

TEST_CASE("max_correlation_support") {
  SUBCASE("diagonal case picks the largest magnitudes") {
    LiftedSystem sys;
    sys.A = Eigen::MatrixXd::Identity(3, 3);
    sys.y = Eigen::Vector3d(0.1, 5.0, -3.0);
    CHECK(max_correlation_support(sys, 2) == std::vector<int>{1, 2});
    CHECK(max_correlation_support(sys, 3) == std::vector<int>{0, 1, 2});
  }
  SUBCASE("result is ascending") {
    Rng rng(12, 0);
    const LiftedSystem sys = random_lifted(6, 15, rng);
    const std::vector<int> sup = max_correlation_support(sys, 5);
    CHECK(std::is_sorted(sup.begin(), sup.end()));
  }
  SUBCASE("duplicate-column tie resolves to the lower index") {
    LiftedSystem sys;
    sys.A = Eigen::MatrixXd::Zero(4, 3);
    sys.A.col(0) << 1, 1, 0, 0;
    sys.A.col(1) << 0, 0, 0.1, 0;
    sys.A.col(2) = sys.A.col(0);
    sys.y = sys.A.col(0);
    CHECK(max_correlation_support(sys, 1) == std::vector<int>{0});
  }
  SUBCASE("one-sparse Gaussian recovery, 100 seeded trials") {
    int hits = 0;
    for (int t = 0; t < 100; ++t) {
      Rng rng(555, static_cast<std::uint64_t>(t));
      Eigen::MatrixXcd A(20, 50);
      for (int j = 0; j < 50; ++j)
        for (int i = 0; i < 20; ++i) A(i, j) = rng.cgaussian();
      const int truth = static_cast<int>(rng.below(50));
      Eigen::VectorXd v = Eigen::VectorXd::Zero(50);
      v(truth) = 1.0;
      const Eigen::VectorXcd y = A * v;
      const LiftedSystem sys = lift_to_real(A, y);
      hits += max_correlation_support(sys, 1) == std::vector<int>{truth};
    }
    CHECK(hits >= 99);
  }
}

TEST_CASE("lasso coordinate descent") {
  SUBCASE("scalar soft threshold: A=[1], y=[3], alpha=1 -> 2") {
    LiftedSystem sys;
    sys.A = Eigen::MatrixXd::Ones(1, 1);
    sys.y = Eigen::VectorXd::Ones(1) * 3.0;
    const Eigen::VectorXd v = lasso(sys, 1.0);
    CHECK(v(0) == doctest::Approx(2.0).epsilon(1e-9));
  }
  SUBCASE("full shrinkage gives the zero vector") {
    Rng rng(77, 0);
    const LiftedSystem sys = random_lifted(5, 8, rng);
    const double m = static_cast<double>(sys.A.rows());
    double amax = 0.0;
    for (int j = 0; j < sys.A.cols(); ++j)
      amax = std::max(amax, std::abs(sys.A.col(j).dot(sys.y)) / m);
    const Eigen::VectorXd v = lasso(sys, amax * 1.0001);
    CHECK(v.isZero(0.0));
  }
  SUBCASE("alpha -> 0 limit approaches the exact solve") {
    Rng rng(78, 1);
    Eigen::MatrixXd A(4, 4);
    Eigen::VectorXd y(4);
    for (int j = 0; j < 4; ++j) {
      y(j) = rng.gaussian();
      for (int i = 0; i < 4; ++i) A(i, j) = rng.gaussian();
    }
    LiftedSystem sys{A, y};
    const Eigen::VectorXd v = lasso(sys, 1e-8);
    const Eigen::VectorXd exact = A.colPivHouseholderQr().solve(y);
    CHECK((v - exact).cwiseAbs().maxCoeff() < 1e-4);
  }
  SUBCASE("another full pass cannot improve the converged objective") {
    Rng rng(79, 2);
    const LiftedSystem sys = random_lifted(10, 25, rng);
    const double alpha = 0.05;
    const Eigen::VectorXd v = lasso(sys, alpha);
    const double m = static_cast<double>(sys.A.rows());
    Eigen::VectorXd w = v;
    Eigen::VectorXd res = sys.y - sys.A * w;
    for (int j = 0; j < sys.A.cols(); ++j) {
      const double csq = sys.A.col(j).squaredNorm();
      if (csq == 0.0) continue;
      const double rho_j = sys.A.col(j).dot(res) + csq * w(j);
      const double thr = alpha * m;
      double nj = 0.0;
      if (rho_j > thr)
        nj = (rho_j - thr) / csq;
      else if (rho_j < -thr)
        nj = (rho_j + thr) / csq;
      res += sys.A.col(j) * (w(j) - nj);
      w(j) = nj;
    }
    CHECK(lasso_objective(sys, v, alpha) - lasso_objective(sys, w, alpha) <
          1e-8);
  }
  SUBCASE("pass budget exhaustion carries the last iterate") {
    Rng rng(80, 3);
    const LiftedSystem sys = random_lifted(10, 25, rng);
    CHECK_THROWS_AS(lasso(sys, 0.01, 1, 1e-16), LassoNonConvergence);
    try {
      lasso(sys, 0.01, 1, 1e-16);
    } catch (const LassoNonConvergence& e) {
      CHECK(e.iterate.size() == 25);
    }
  }
  SUBCASE("alpha guard") {
    Rng rng(81, 0);
    const LiftedSystem sys = random_lifted(3, 4, rng);
    CHECK_THROWS_AS(lasso(sys, 0.0), std::invalid_argument);
  }
}

TEST_CASE("support_of") {
  Eigen::VectorXd v(5);
  v << 0.0, 1e-9, -2.0, 0.0, 3e-6;
  CHECK(support_of(v) == std::vector<int>{2, 4});
  CHECK(support_of(v, 1e-5) == std::vector<int>{2});
}

TEST_CASE("ls_refine") {
  Rng rng(31, 0);
  SUBCASE("noiseless consistency on the true support") {
    Eigen::MatrixXcd A(6, 10);
    for (int j = 0; j < 10; ++j)
      for (int i = 0; i < 6; ++i) A(i, j) = rng.cgaussian();
    Eigen::VectorXd v = Eigen::VectorXd::Zero(10);
    v(2) = 1.7;
    v(6) = -0.4;
    v(9) = 2.2;
    const LiftedSystem sys =
        lift_to_real(A, A * v.cast<std::complex<double>>());
    const Eigen::VectorXd got = ls_refine(sys, {2, 6, 9});
    CHECK(got(0) == doctest::Approx(1.7).epsilon(1e-10));
    CHECK(got(1) == doctest::Approx(-0.4).epsilon(1e-10));
    CHECK(got(2) == doctest::Approx(2.2).epsilon(1e-10));
  }
  SUBCASE("orthonormal support columns reduce to inner products") {
    LiftedSystem sys;
    sys.A = Eigen::MatrixXd::Identity(4, 4);
    sys.y = Eigen::Vector4d(0.5, -1.0, 2.0, 0.0);
    const Eigen::VectorXd got = ls_refine(sys, {1, 2});
    CHECK(got(0) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(got(1) == doctest::Approx(2.0).epsilon(1e-12));
  }
  SUBCASE("residual orthogonal to support columns") {
    const LiftedSystem sys = random_lifted(8, 12, rng);
    const std::vector<int> sup{0, 3, 7};
    const Eigen::VectorXd coef = ls_refine(sys, sup);
    Eigen::VectorXd res = sys.y;
    for (std::size_t i = 0; i < sup.size(); ++i)
      res -= sys.A.col(sup[i]) * coef(static_cast<Eigen::Index>(i));
    for (int j : sup) CHECK(std::abs(sys.A.col(j).dot(res)) < 1e-8);
  }
  SUBCASE("rank-deficient support throws") {
    LiftedSystem sys;
    sys.A = Eigen::MatrixXd::Zero(4, 3);
    sys.A.col(0) << 1, 0, 0, 0;
    sys.A.col(1) = sys.A.col(0);
    sys.A.col(2) << 0, 1, 0, 0;
    sys.y = Eigen::VectorXd::Ones(4);
    CHECK_THROWS_AS(ls_refine(sys, {0, 1}), std::runtime_error);
  }
}

TEST_CASE("rip_constant") {
  SUBCASE("orthonormal columns have zero constant") {
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(5, 5);
    CHECK(rip_constant(I, 2) == doctest::Approx(0.0).epsilon(1e-14));
  }
  SUBCASE("2I scaling example") {
    const Eigen::MatrixXd A = 2.0 * Eigen::MatrixXd::Identity(2, 2);
    CHECK(rip_constant(A, 1) == doctest::Approx(3.0).epsilon(1e-14));
  }
  SUBCASE("monotone nondecreasing in s") {
    Rng rng(41, 0);
    Eigen::MatrixXd A(6, 9);
    for (int j = 0; j < 9; ++j)
      for (int i = 0; i < 6; ++i) A(i, j) = rng.gaussian() / std::sqrt(6.0);
    double prev = 0.0;
    for (int s = 1; s <= 3; ++s) {
      const double eps = rip_constant(A, s);
      CHECK(eps >= prev - 1e-15);
      prev = eps;
    }
  }
  SUBCASE("combinatorial guard") {
    const Eigen::MatrixXd big = Eigen::MatrixXd::Identity(21, 21);
    CHECK_THROWS_AS(rip_constant(big, 2), std::invalid_argument);
    const Eigen::MatrixXd ok = Eigen::MatrixXd::Identity(8, 8);
    CHECK_THROWS_AS(rip_constant(ok, 5), std::invalid_argument);
  }
}

TEST_CASE("channel-count formulas") {
  SUBCASE("the four quoted anchors") {
    CHECK(required_channels(0.4, 6, 100) == 11);
    CHECK(required_channels(0.8, 5, 100) == 19);
    CHECK(required_channels(0.8, 4, 100) == 15);
    CHECK(required_channels(2.0, 1, 100) == 10);
  }
  SUBCASE("guards") {
    CHECK_THROWS_AS(required_channels(0.5, 0, 100), std::invalid_argument);
    CHECK_THROWS_AS(required_channels(0.5, 100, 100), std::invalid_argument);
    CHECK_THROWS_AS(required_channels(0.0, 5, 100), std::invalid_argument);
  }
  SUBCASE("asymptotic scale") {
    CHECK(asymptotic_channels(100) ==
          doctest::Approx(1.9499333751821883).epsilon(1e-12));
    // n = round(e^(e^e)): triple log collapses to ~1, value ~ e^e
    CHECK(asymptotic_channels(3814279) ==
          doctest::Approx(15.154262241479262).epsilon(1e-7));
    CHECK_THROWS_AS(asymptotic_channels(15), std::invalid_argument);
    double prev = asymptotic_channels(16);
    for (int n : {32, 100, 1000, 100000}) {
      const double cur = asymptotic_channels(n);
      CHECK(cur > prev);
      prev = cur;
    }
  }
  SUBCASE("block-diagonal totals") {
    CHECK(block_diag_channels(1.0, 6, 100, 2) == 24);
    CHECK(block_diag_channels(1.0, 6, 100, 3) == 24);
    // k=1 degenerates to the dense formula with ln n
    CHECK(block_diag_channels(1.0, 6, 100, 1) ==
          static_cast<int>(std::ceil(6.0 * std::log(100.0))));
    CHECK_THROWS_AS(block_diag_channels(1.0, 5, 100, 2),
                    std::invalid_argument);
  }
}
