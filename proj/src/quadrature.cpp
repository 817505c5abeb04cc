#include "doilab/quadrature.hpp"

#include <cmath>

#include "doilab/error.hpp"

namespace doilab::quadrature {

double simpson(const Integrand& f, double a, double b, int nodes) {
  if (nodes < 3 || nodes % 2 == 0) throw InvalidArgument("simpson: node count must be odd and >= 3");
  const int intervals = nodes - 1;
  const double h = (b - a) / intervals;
  double acc = f(a) + f(b);
  for (int i = 1; i < intervals; ++i) acc += (i % 2 == 1 ? 4.0 : 2.0) * f(a + i * h);
  return acc * h / 3.0;
}

namespace {

struct Panel {
  double a, b, fa, fm, fb, whole;
};

double simpson_panel(double a, double b, double fa, double fm, double fb) { return (b - a) / 6.0 * (fa + 4.0 * fm + fb); }

double refine(const Integrand& f, const Panel& p, double tol, int depth) {
  const double m = 0.5 * (p.a + p.b);
  const double lm = 0.5 * (p.a + m);
  const double rm = 0.5 * (m + p.b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson_panel(p.a, m, p.fa, flm, p.fm);
  const double right = simpson_panel(m, p.b, p.fm, frm, p.fb);
  const double delta = left + right - p.whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return refine(f, {p.a, m, p.fa, flm, p.fm, left}, 0.5 * tol, depth - 1) +
         refine(f, {m, p.b, p.fm, frm, p.fb, right}, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive(const Integrand& f, double a, double b, double tol, int initial_panels, int max_depth) {
  if (initial_panels < 1) throw InvalidArgument("adaptive: need at least one panel");
  if (!(tol > 0.0)) throw InvalidArgument("adaptive: tolerance must be positive");
  if (a == b) return 0.0;
  const double width = (b - a) / initial_panels;
  const double panel_tol = tol / initial_panels;
  double total = 0.0;
  double left = a;
  double f_left = f(a);
  for (int i = 0; i < initial_panels; ++i) {
    const double right = (i + 1 == initial_panels) ? b : a + (i + 1) * width;
    const double mid = 0.5 * (left + right);
    const double f_mid = f(mid);
    const double f_right = f(right);
    total += refine(f, {left, right, f_left, f_mid, f_right, simpson_panel(left, right, f_left, f_mid, f_right)},
                    panel_tol, max_depth);
    left = right;
    f_left = f_right;
  }
  return total;
}

}  // namespace doilab::quadrature
