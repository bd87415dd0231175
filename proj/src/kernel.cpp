#include "anisospec/kernel.hpp"

#include <cmath>
#include <string>

#include "anisospec/errors.hpp"
#include "anisospec/quadrature.hpp"

namespace aniso {

namespace {

constexpr double kPi = 3.141592653589793238462643;

// (x^2 + y^2)^t without pow() in the dominant t = 2 case.
double radial_power(double q, double t) {
    if (t == 2.0) return q * q;
    if (t == 1.0) return q;
    return std::pow(q, t);
}

void require_finite(double x, double y) {
    if (!std::isfinite(x) || !std::isfinite(y))
        throw DomainError("kernel evaluated at non-finite point");
}

}  // namespace

void validate(const KernelParams& p) {
    if (!(p.T > 0.0)) throw ParameterError("kernel requires T > 0");
    if (!(p.a >= 0.0)) throw ParameterError("kernel requires a >= 0");
    if (!(p.t > 0.0)) throw ParameterError("kernel requires t > 0");
}

double eval_full(const KernelParams& p, double x, double y) {
    validate(p);
    require_finite(x, y);
    const double d = x - y;
    const double q = x * x + y * y;
    return 1.0 / (kPi * (p.T * p.T + d * d + p.a * p.a * radial_power(q, p.t)));
}

double eval_antisym(const KernelParams& p, double x, double y) {
    validate(p);
    require_finite(x, y);
    if (p.T != 1.0)
        throw ParameterError(
            "antisymmetrized kernel is defined at T = 1 only; "
            "reduce via the norm scaling identity first");
    if (p.t != 2.0) throw ParameterError("antisymmetrized kernel requires t = 2");
    const double q = x * x + y * y;
    const double c = 1.0 + q + p.a * p.a * q * q;
    const double xy = x * y;
    return (2.0 / kPi) * xy / (c * c - 4.0 * xy * xy);
}

double eval_polar_antisym(const KernelParams& p, double r, double phi) {
    validate(p);
    require_finite(r, phi);
    if (p.T != 1.0)
        throw ParameterError("polar antisymmetrized kernel is defined at T = 1 only");
    if (p.t != 2.0) throw ParameterError("polar antisymmetrized kernel requires t = 2");
    if (r < 0.0) throw DomainError("polar radius must be >= 0");
    const double r2 = r * r;
    const double s = std::sin(2.0 * phi);
    const double c = 1.0 + r2 + p.a * p.a * r2 * r2;
    return (1.0 / kPi) * r2 * s / (c * c - r2 * r2 * s * s);
}

double eval_convolution_symbol(double T, double s) {
    if (!(T > 0.0)) throw ParameterError("convolution symbol requires T > 0");
    if (!std::isfinite(s)) throw DomainError("convolution symbol at non-finite s");
    return std::exp(-T * std::abs(s)) / T;
}

double hs_norm_squared(const KernelParams& p, int resolution) {
    validate(p);
    if (p.a == 0.0)
        throw DomainError(
            "HS norm diverges at a = 0: the convolution kernel is not "
            "square-integrable over the plane");
    if (p.t <= 0.5)
        throw DomainError("HS norm diverges for t <= 1/2");
    if (resolution < 1) throw ParameterError("resolution must be >= 1");

    const double a2 = p.a * p.a;
    const double T2 = p.T * p.T;
    const double t = p.t;

    // Integrate K^2 in polar coordinates. Past R the integrand is below
    // r / (pi^2 a^4 r^(4t)), so the tail past R is bounded by
    // R^(2-4t) / ((4t-2) pi^2 a^4); pick R so that bound is < 1e-12.
    const double tail_target = 1e-12;
    const double R = std::pow(
        1.0 / ((4.0 * t - 2.0) * kPi * kPi * a2 * a2 * tail_target), 1.0 / (4.0 * t - 2.0));

    const auto angular = [&](double r) {
        const double r2 = r * r;
        const double rp = a2 * radial_power(r2, t);
        // K^2 integrated over phi in [0, 2pi); integrand depends on sin(2 phi).
        const auto g = [&](double phi) {
            const double den = T2 + r2 * (1.0 - std::sin(2.0 * phi)) + rp;
            return 1.0 / (den * den);
        };
        return adaptive_integrate(g, 0.0, 2.0 * kPi, 1e-12) / (kPi * kPi);
    };

    // Radial panels dense near the origin, geometric further out; the
    // resolution knob refines the first panel width.
    const double first = std::fmin(p.T, 1.0) / (2.0 * resolution);
    const std::vector<double> breaks = geometric_breaks(0.0, R, first, 1.25);
    const auto radial = [&](double r) { return r * angular(r); };
    return integrate_panels(radial, breaks, 12 + 2 * resolution);
}

}  // namespace aniso
