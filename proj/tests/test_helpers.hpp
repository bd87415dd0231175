#pragma once

#include <cmath>
#include <vector>

#include "anisospec/quadrature.hpp"

namespace aniso::testing {

// Direct angular quadrature of (1/2pi) Int_0^{2pi} sin^2(2phi) /
// (C^2 - A^2 sin^2(2phi)) dphi. Test-side oracle for the closed form; it must
// stay independent of the implementation it checks.
inline double angular_quadrature_oracle(double C, double A, double rel_tol = 1e-13) {
    const double two_pi = 6.283185307179586476925287;
    const auto integrand = [&](double phi) {
        const double s = std::sin(2.0 * phi);
        return s * s / (C * C - A * A * s * s);
    };
    return adaptive_integrate(integrand, 0.0, two_pi, rel_tol) / two_pi;
}

inline std::vector<double> logspace(double lo, double hi, int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        v[static_cast<std::size_t>(i)] =
            lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
    return v;
}

}  // namespace aniso::testing
