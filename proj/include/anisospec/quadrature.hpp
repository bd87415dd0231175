#pragma once

#include <functional>
#include <vector>

namespace aniso {

// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Nodes/weights by Newton iteration on the Legendre recurrence; accurate to
// machine precision for the orders used here (<= 64).
GaussRule make_gauss_rule(int order);

// Integral of f over [a, b] with a single rule of the given order.
double integrate_gauss(const std::function<double(double)>& f, double a, double b,
                       int order);

// Composite integral over consecutive panels [breaks[i], breaks[i+1]).
double integrate_panels(const std::function<double(double)>& f,
                        const std::vector<double>& breaks, int order);

// Adaptive bisection, accepting a panel when GL-15 and GL-31 agree to the
// requested tolerance. Deterministic: no randomization, fixed split order.
double adaptive_integrate(const std::function<double(double)>& f, double a, double b,
                          double rel_tol, double abs_tol = 0.0, int max_depth = 48);

// Adaptive integral over [start, inf) of a decaying integrand. Marches over
// geometrically growing panels until `tail_bound(x)` (an upper bound on the
// remaining integral past x) drops below the tolerance.
double integrate_to_infinity(const std::function<double(double)>& f, double start,
                             const std::function<double(double)>& tail_bound,
                             double rel_tol, double abs_tol);

// Geometrically spaced breakpoints: [a, a*ratio, ...] clipped at b, starting
// from a first panel of width `first`.
std::vector<double> geometric_breaks(double a, double b, double first, double ratio);

}  // namespace aniso
