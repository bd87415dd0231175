#include "anisospec/quadrature.hpp"

#include <cmath>
#include <stdexcept>

#include "anisospec/errors.hpp"

namespace aniso {

GaussRule make_gauss_rule(int order) {
    if (order < 1) throw ParameterError("gauss rule order must be >= 1");
    GaussRule rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    const int m = (order + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Chebyshev-based initial guess, then Newton on P_n.
        double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < order; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = order * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[order - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        rule.weights[i] = w;
        rule.weights[order - 1 - i] = w;
    }
    return rule;
}

namespace {

const GaussRule& cached_rule_15() {
    static const GaussRule r = make_gauss_rule(15);
    return r;
}

const GaussRule& cached_rule_31() {
    static const GaussRule r = make_gauss_rule(31);
    return r;
}

double apply_rule(const GaussRule& rule, const std::function<double(double)>& f,
                  double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        sum += rule.weights[i] * f(c + h * rule.nodes[i]);
    return h * sum;
}

double adaptive_recurse(const std::function<double(double)>& f, double a, double b,
                        double tol_abs, int depth, int max_depth) {
    const double coarse = apply_rule(cached_rule_15(), f, a, b);
    const double fine = apply_rule(cached_rule_31(), f, a, b);
    if (std::abs(fine - coarse) <= tol_abs || depth >= max_depth) return fine;
    const double mid = 0.5 * (a + b);
    return adaptive_recurse(f, a, mid, 0.5 * tol_abs, depth + 1, max_depth) +
           adaptive_recurse(f, mid, b, 0.5 * tol_abs, depth + 1, max_depth);
}

}  // namespace

double integrate_gauss(const std::function<double(double)>& f, double a, double b,
                       int order) {
    return apply_rule(make_gauss_rule(order), f, a, b);
}

double integrate_panels(const std::function<double(double)>& f,
                        const std::vector<double>& breaks, int order) {
    if (breaks.size() < 2) throw ParameterError("need at least two breakpoints");
    const GaussRule rule = make_gauss_rule(order);
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
        sum += apply_rule(rule, f, breaks[i], breaks[i + 1]);
    return sum;
}

double adaptive_integrate(const std::function<double(double)>& f, double a, double b,
                          double rel_tol, double abs_tol, int max_depth) {
    if (!(b > a)) return 0.0;
    const double probe = std::abs(apply_rule(cached_rule_15(), f, a, b));
    double tol = abs_tol + rel_tol * probe;
    if (tol <= 0.0) tol = 1e-14 * (probe > 0.0 ? probe : 1.0);
    return adaptive_recurse(f, a, b, tol, 0, max_depth);
}

double integrate_to_infinity(const std::function<double(double)>& f, double start,
                             const std::function<double(double)>& tail_bound,
                             double rel_tol, double abs_tol) {
    double lo = start;
    double width = 1.0;
    double total = 0.0;
    // 200 doublings reach ~1e60; any integrable tail bound falls below
    // tolerance long before that.
    for (int panel = 0; panel < 200; ++panel) {
        const double hi = lo + width;
        total += adaptive_integrate(f, lo, hi, rel_tol * 0.1,
                                    abs_tol * 0.1 + rel_tol * 0.01 * std::abs(total));
        lo = hi;
        width *= 2.0;
        const double remaining = tail_bound(lo);
        if (remaining <= abs_tol + rel_tol * std::abs(total)) return total;
    }
    throw ConvergenceError("semi-infinite integral tail did not fall below tolerance",
                           total, tail_bound(lo));
}

std::vector<double> geometric_breaks(double a, double b, double first, double ratio) {
    std::vector<double> breaks{a};
    double w = first;
    double x = a;
    while (x + w < b) {
        x += w;
        breaks.push_back(x);
        w *= ratio;
    }
    breaks.push_back(b);
    return breaks;
}

}  // namespace aniso
