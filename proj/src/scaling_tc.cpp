#include "anisospec/scaling_tc.hpp"

#include <cmath>
#include <sstream>

#include "anisospec/eigensolve.hpp"
#include "anisospec/errors.hpp"
#include "anisospec/spectra.hpp"

namespace aniso {

namespace {

// Odd-sector norm N^o(t; 1) evaluated during bisection. The refined grid is
// reused across iterates and only rebuilt when the kernel parameter drifts
// more than 10% from the one it was converged for: each re-refinement costs
// several eigensolves, and the bisection path stays within a factor two.
class OddNormEvaluator {
  public:
    explicit OddNormEvaluator(double tol) : tol_(tol) {}

    double operator()(double param) {
        if (!(param > 0.0)) throw DomainError("odd norm needs a positive parameter");
        const KernelParams p{param, 1.0, 2.0};
        if (!grid_ || std::abs(param - ref_param_) > 0.1 * ref_param_) {
            auto [op, report] = refine_until(p, ParitySector::Odd, tol_);
            ref_param_ = param;
            grid_nodes_ = static_cast<int>(op.grid.node_count());
            grid_radius_ = op.grid.truncation_radius;
            grid_ = true;
            return report.levels.back().eigenvalues[0];
        }
        const DiscretizedOperator op = assemble(
            p, ParitySector::Odd,
            build_grid(ParitySector::Odd, grid_radius_, grid_nodes_));
        return top_eigenpairs(op.matrix, 1, 1e-11).values[0];
    }

  private:
    double tol_;
    bool grid_ = false;
    double ref_param_ = 0.0;
    int grid_nodes_ = 0;
    double grid_radius_ = 0.0;
};

}  // namespace

ScalingCheck norm_scaling_check(double a, double T, double b, ParitySector sector,
                                double tol) {
    if (!(a > 0.0) || !(T > 0.0) || !(b > 0.0))
        throw ParameterError("scaling check requires a, T, b > 0");
    const KernelParams base{a, T, 2.0};
    const KernelParams scaled{a * b, T / b, 2.0};
    auto [n_base, unc_base] = largest_eigenvalue(base, sector, tol);
    auto [n_scaled, unc_scaled] = largest_eigenvalue(scaled, sector, tol);
    ScalingCheck check;
    check.residual = std::abs(n_scaled - b * n_base);
    check.combined_uncertainty = b * unc_base + unc_scaled;
    return check;
}

TcCurvePoint solve_tau(double a, double tol) {
    if (!(a > 0.0)) throw DomainError("tau solve requires a > 0");
    if (!(tol > 0.0)) throw ParameterError("tau solve tolerance must be > 0");

    // Evaluate norms tighter than the root tolerance so grid rebuilds along
    // the bisection path cannot dominate the residual.
    OddNormEvaluator norm(std::max(std::min(tol, 1e-8) / 4.0, 1e-9));
    const auto g = [&](double T) { return norm(a * T) - T; };

    double lo = 0.5, hi = 1.0;
    double g_lo = g(lo), g_hi = g(hi);
    // g(1) = N^o(a;1) - 1 < 0 always; g(1/2) > 0 only in the small-a regime.
    if (!(g_lo > 0.0) || !(g_hi < 0.0)) {
        std::ostringstream msg;
        msg << "no sign change on the tau bracket [1/2, 1]: g(0.5) = " << g_lo
            << ", g(1) = " << g_hi << " (a = " << a
            << " is outside the asymptotic regime)";
        throw DomainError(msg.str());
    }

    TcCurvePoint point;
    point.a = a;
    double mid = 0.5 * (lo + hi);
    double g_mid = 0.0;
    for (int it = 0; it < 80; ++it) {
        mid = 0.5 * (lo + hi);
        g_mid = g(mid);
        ++point.iterations;
        if (std::abs(g_mid) <= tol && (hi - lo) <= tol) break;
        if (g_mid > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    point.tau = 1.0 - mid;
    point.residual = std::abs(g_mid);
    if (point.residual > tol)
        throw ConvergenceError("tau bisection did not reach the residual target",
                               point.tau, point.residual);
    return point;
}

std::vector<TcCurveEntry> tc_curve(const std::vector<double>& a_values, double tol) {
    std::vector<TcCurveEntry> entries;
    entries.reserve(a_values.size());
    for (const double a : a_values) {
        TcCurveEntry entry;
        entry.a = a;
        try {
            entry.point = solve_tau(a, tol);
        } catch (const std::exception& e) {
            entry.error = e.what();
        }
        entries.push_back(std::move(entry));
    }
    return entries;
}

}  // namespace aniso
