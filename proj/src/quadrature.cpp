#include "csfb/quadrature.hpp"

#include <cmath>

namespace csfb {

namespace {

// 15-point Kronrod abscissae (positive half) and weights, with the embedded
// 7-point Gauss weights on the odd-indexed nodes
const double kXgk[8] = {0.991455371120812639206854697526329,
                        0.949107912342758524526189684047851,
                        0.864864423359769072789712788640926,
                        0.741531185599394439863864773280788,
                        0.586087235467691130294144838258730,
                        0.405845151377397166906606412076961,
                        0.207784955007898467600689403773245,
                        0.0};
const double kWgk[8] = {0.022935322010529224963732008058970,
                        0.063092092629978553290700663189204,
                        0.104790010322250183839876322541518,
                        0.140653259715525918745189590510238,
                        0.169004726639267902826583426598550,
                        0.190350578064785409913256402421014,
                        0.204432940075298892414161999234649,
                        0.209482141084727828012999174891714};
const double kWg[4] = {0.129484966168869693270611432679082,
                       0.279705391489276667901467771423780,
                       0.381830050505118944950369775488975,
                       0.417959183673469387755102040816327};

struct Panel {
  double kronrod;
  double err;
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double resg = fc * kWg[3];
  double resk = fc * kWgk[7];
  for (int j = 0; j < 7; ++j) {
    const double x = h * kXgk[j];
    const double fsum = f(c - x) + f(c + x);
    resk += kWgk[j] * fsum;
    if (j % 2 == 1) resg += kWg[j / 2] * fsum;
  }
  return {resk * h, std::fabs((resk - resg) * h)};
}

void refine(const std::function<double(double)>& f, double a, double b,
            const Panel& p, double tol, int depth, int max_depth, double* sum,
            double* err_sum, bool* ok) {
  if (p.err <= tol || depth >= max_depth) {
    *sum += p.kronrod;
    *err_sum += p.err;
    if (p.err > tol) *ok = false;
    return;
  }
  const double m = 0.5 * (a + b);
  const Panel left = gk15(f, a, m);
  const Panel right = gk15(f, m, b);
  refine(f, a, m, left, 0.5 * tol, depth + 1, max_depth, sum, err_sum, ok);
  refine(f, m, b, right, 0.5 * tol, depth + 1, max_depth, sum, err_sum, ok);
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double a,
                     double b, double rel_tol, double abs_tol, int max_depth) {
  const Panel whole = gk15(f, a, b);
  const double tol =
      std::fmax(abs_tol, rel_tol * std::fmax(std::fabs(whole.kronrod), 1e-30));
  QuadResult out;
  bool ok = true;
  refine(f, a, b, whole, tol, 0, max_depth, &out.value, &out.error, &ok);
  out.converged = ok;
  return out;
}

QuadResult integrate_semi_inf(const std::function<double(double)>& f, double a,
                              double rel_tol) {
  auto g = [&f, a](double t) {
    const double om = 1.0 - t;
    const double x = a + t / om;
    return f(x) / (om * om);
  };
  return integrate(g, 0.0, 1.0, rel_tol);
}

}  // namespace csfb
