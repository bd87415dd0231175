#pragma once

#include <optional>
#include <string>
#include <vector>

#include "anisospec/discretize.hpp"

namespace aniso {

// One solved point of the critical-temperature curve T = 1 - tau(a), defined
// by N^o(a, T) = 1, solved through the reduced equation N^o(aT; 1) = T.
struct TcCurvePoint {
    double a = 0.0;
    double tau = 0.0;
    int iterations = 0;
    double residual = 0.0;  // |N^o(aT;1) - T| at the returned root
};

// Residual of the norm scaling identity N(ab, T/b) = b N(a, T), both sides
// computed with grid-converged eigenvalues. Returns |lhs - rhs|; the caller
// compares against the combined grid uncertainties, also returned.
struct ScalingCheck {
    double residual = 0.0;
    double combined_uncertainty = 0.0;  // b * unc(a,T) + unc(ab, T/b)
};
ScalingCheck norm_scaling_check(double a, double T, double b, ParitySector sector,
                                double tol = 1e-7);

// Bisection for tau(a) on the bracket T in [1/2, 1]. The bracket follows the
// small-a regime; outside it the missing sign change surfaces as a
// DomainError reporting the endpoint values rather than extrapolating.
TcCurvePoint solve_tau(double a, double tol);

// Sweep over several anisotropies; per-point failures are collected, not
// fatal to the remaining points.
struct TcCurveEntry {
    double a = 0.0;
    std::optional<TcCurvePoint> point;
    std::string error;  // empty on success
};
std::vector<TcCurveEntry> tc_curve(const std::vector<double>& a_values, double tol);

}  // namespace aniso
