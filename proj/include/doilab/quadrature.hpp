#pragma once

#include <functional>

namespace doilab::quadrature {

using Integrand = std::function<double(double)>;

// Composite Simpson rule on `nodes` equally spaced points (nodes odd, >= 3).
double simpson(const Integrand& f, double a, double b, int nodes);

// Adaptive Simpson with interval bisection and Richardson acceptance
// |S2 - S1| <= 15 tol. The interval is first split into `initial_panels`
// pieces so integrands supported on a small subinterval are not missed.
double adaptive(const Integrand& f, double a, double b, double tol = 1e-9, int initial_panels = 32,
                int max_depth = 60);

}  // namespace doilab::quadrature
