#include "csfb/special.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace csfb {

namespace {
constexpr double kEulerGamma = 0.57721566490153286061;
constexpr double kSqrt2 = 1.41421356237309504880;
}  // namespace

double q_function(double x) { return 0.5 * std::erfc(x / kSqrt2); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double exp_integral_e1(double x) {
  if (!(x > 0.0)) throw std::domain_error("exp_integral_e1: x must be > 0");
  if (x <= 1.0) {
    // power series around 0
    double sum = -kEulerGamma - std::log(x);
    double term = 1.0;
    for (int k = 1; k < 80; ++k) {
      term *= x / k;
      const double add = (k % 2 == 1) ? term / k : -term / k;
      sum += add;
      if (std::fabs(add) < 1e-18 * std::fabs(sum)) break;
    }
    return sum;
  }
  // continued fraction, modified Lentz
  double b = x + 1.0;
  double c = std::numeric_limits<double>::max();
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 300; ++i) {
    const double a = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    const double delta = c * d;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x);
}

double upper_gamma_negint(int r, double x) {
  if (r < 1) throw std::domain_error("upper_gamma_negint: r must be >= 1");
  if (!(x > 0.0)) throw std::domain_error("upper_gamma_negint: x must be > 0");
  double g = exp_integral_e1(x);  // Gamma(0, x)
  const double ex = std::exp(-x);
  for (int j = 1; j < r; ++j) {
    // Gamma(-j, x) = (x^-j e^-x - Gamma(-j+1, x)) / j
    g = (std::pow(x, -j) * ex - g) / j;
  }
  return g;
}

double laguerre(int n, double alpha, double x) {
  if (n < 0) throw std::domain_error("laguerre: n must be >= 0");
  if (n == 0) return 1.0;
  double lm1 = 1.0;
  double l = 1.0 + alpha - x;
  for (int k = 1; k < n; ++k) {
    const double lp1 = ((2.0 * k + 1.0 + alpha - x) * l - (k + alpha) * lm1) /
                       (k + 1.0);
    lm1 = l;
    l = lp1;
  }
  return l;
}

double wishart_eigen_density(double lam, int s, int r) {
  if (s < 1 || r < s) throw std::domain_error("wishart_eigen_density: need 1 <= s <= r");
  if (lam < 0.0) return 0.0;
  const int a = r - s;
  double weight;  // lam^a e^-lam, stable for large lam
  if (lam == 0.0) {
    weight = (a == 0) ? 1.0 : 0.0;
  } else {
    weight = std::exp(a * std::log(lam) - lam);
  }
  if (weight == 0.0) return 0.0;
  double sum = 0.0;
  for (int l = 0; l < s; ++l) {
    const double coef = std::exp(std::lgamma(l + 1.0) - std::lgamma(l + a + 1.0));
    const double L = laguerre(l, static_cast<double>(a), lam);
    sum += coef * L * L;
  }
  return weight * sum / s;
}

}  // namespace csfb
