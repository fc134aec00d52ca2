#pragma once

#include <functional>

namespace csfb {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;  // absolute error estimate
  bool converged = false;
};

// Adaptive Gauss-Kronrod 7/15 on [a, b]
QuadResult integrate(const std::function<double(double)>& f, double a,
                     double b, double rel_tol = 1e-10,
                     double abs_tol = 1e-300, int max_depth = 48);

// Integral over [a, inf) via the map x = a + t/(1-t)
QuadResult integrate_semi_inf(const std::function<double(double)>& f, double a,
                              double rel_tol = 1e-10);

}  // namespace csfb
