#include "anisospec/asymptotics.hpp"

#include <algorithm>
#include <cmath>

#include "anisospec/eigensolve.hpp"
#include "anisospec/errors.hpp"

namespace aniso {

namespace {

constexpr double kPi = 3.141592653589793238462643;

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

ExponentFit fit_exponent(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 3)
        throw ParameterError("power-law fit needs at least three points");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    double a_min = points.front().first, a_max = points.front().first;
    for (const auto& [a, value] : points) {
        if (!(a > 0.0) || !(value > 0.0))
            throw DomainError("power-law fit needs positive abscissae and values");
        const double lx = std::log(a);
        const double ly = std::log(value);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        a_min = std::min(a_min, a);
        a_max = std::max(a_max, a);
    }
    const double n = static_cast<double>(points.size());
    const double denom = n * sxx - sx * sx;
    if (std::abs(denom) < 1e-14 * (1.0 + sxx * n))
        throw DomainError("power-law fit needs distinct abscissae");
    ExponentFit fit;
    fit.exponent = (n * sxy - sx * sy) / denom;
    const double intercept = (sy - fit.exponent * sx) / n;
    fit.prefactor = std::exp(intercept);
    double ss = 0.0;
    for (const auto& [a, value] : points) {
        const double r = std::log(value) - (intercept + fit.exponent * std::log(a));
        ss += r * r;
    }
    fit.rms_residual = std::sqrt(ss / n);
    fit.a_range = {a_min, a_max};
    return fit;
}

std::vector<std::pair<double, double>> deficiency_sweep(
    double t, const std::vector<double>& a_values, ParitySector sector, int j,
    double tol) {
    if (j < 0 || j > 5) throw ParameterError("deficiency sweep supports j in [0, 5]");
    std::vector<std::pair<double, double>> points;
    points.reserve(a_values.size());
    RefineOptions options;
    options.track_k = j + 1;
    for (const double a : a_values) {
        const KernelParams p{a, 1.0, t};
        auto [op, report] = refine_until(p, sector, tol, options);
        const double e_j = report.levels.back().eigenvalues[static_cast<std::size_t>(j)];
        points.emplace_back(a, 1.0 - e_j);
    }
    return points;
}

DiscretizedOperator widom_operator(int n, double half_width) {
    if (!is_power_of_two(n) || n < 64)
        throw ParameterError("widom grid needs a power-of-two n >= 64");
    if (!(half_width > 0.0)) throw ParameterError("half width must be > 0");

    const double L = half_width;
    const double dx = 2.0 * L / n;

    // Quadratic-form quantization: the |s| part is diagonal in the discrete
    // frequency basis with multipliers |s_k|, s_k = pi k / L signed; the
    // quartic part is diagonal in space. The |s| block becomes a symmetric
    // circulant in the spatial basis, assembled from its first column.
    std::vector<double> column(n, 0.0);
    for (int m = 0; m < n; ++m) {
        double sum = 0.0;
        for (int k = 0; k < n; ++k) {
            const int signed_k = k <= n / 2 ? k : k - n;
            const double s = kPi * std::abs(signed_k) / L;
            sum += s * std::cos(2.0 * kPi * k * m / n);
        }
        column[m] = sum / n;
    }

    DiscretizedOperator op;
    op.matrix.resize(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const int m = std::abs(i - j);
            op.matrix(i, j) = column[m];
        }
    for (int i = 0; i < n; ++i) {
        const double x = -L + i * dx;
        const double x2 = x * x;
        op.matrix(i, i) += 4.0 * x2 * x2;
    }

    // Periodic uniform grid, recorded with equal weights so Rayleigh
    // quotients against tabulated functions carry the right normalization.
    op.grid.nodes.resize(n);
    op.grid.weights.assign(n, dx);
    for (int i = 0; i < n; ++i) op.grid.nodes[i] = -L + i * dx;
    op.grid.panel_offsets = {0, static_cast<std::size_t>(n)};
    op.grid.truncation_radius = L;
    op.grid.sector = ParitySector::Full;
    op.sector = ParitySector::Full;
    return op;
}

std::vector<double> widom_eigenvalues(int j_max, int n, double half_width) {
    if (j_max < 0) throw ParameterError("j_max must be >= 0");
    const auto lowest = [&](int nn, double L) {
        const DiscretizedOperator op = widom_operator(nn, L);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(op.matrix);
        std::vector<double> mu(static_cast<std::size_t>(j_max) + 1);
        for (int j = 0; j <= j_max; ++j) mu[static_cast<std::size_t>(j)] =
            solver.eigenvalues()[j];
        return mu;
    };
    const std::vector<double> coarse = lowest(n, half_width);
    const std::vector<double> fine = lowest(2 * n, 2.0 * half_width);
    for (std::size_t j = 0; j < coarse.size(); ++j) {
        const double rel = std::abs(fine[j] - coarse[j]) / std::abs(fine[j]);
        if (rel > 5e-3)
            throw ConvergenceError("widom eigenvalue unstable under grid doubling",
                                   fine[j], rel);
    }
    return fine;
}

WidomComparison widom_compare(int j_max, const std::vector<double>& a_values,
                              double tol) {
    if (j_max < 0 || j_max > 5) throw ParameterError("widom compare supports j_max <= 5");
    for (std::size_t i = 0; i + 1 < a_values.size(); ++i)
        if (!(a_values[i] > a_values[i + 1]))
            throw ParameterError("a values must be descending");

    WidomComparison cmp;
    cmp.a_values = a_values;
    if (a_values.empty()) return cmp;
    cmp.mu = widom_eigenvalues(j_max);

    const int k = j_max + 1;
    cmp.rescaled_even.assign(k, {});
    cmp.rescaled_odd.assign(k, {});
    cmp.rescaled_merged.assign(k, {});

    RefineOptions options;
    options.track_k = k;
    for (const double a : a_values) {
        const KernelParams p{a, 1.0, 2.0};
        auto [op_e, rep_e] = refine_until(p, ParitySector::Even, tol, options);
        auto [op_o, rep_o] = refine_until(p, ParitySector::Odd, tol, options);
        const std::vector<double>& even = rep_e.levels.back().eigenvalues;
        const std::vector<double>& odd = rep_o.levels.back().eigenvalues;
        // The full-line spectrum is exactly the union of the two half-line
        // sector spectra, so the merged sequence is a merge-sort.
        std::vector<double> merged;
        merged.reserve(even.size() + odd.size());
        merged.insert(merged.end(), even.begin(), even.end());
        merged.insert(merged.end(), odd.begin(), odd.end());
        std::sort(merged.begin(), merged.end(), std::greater<>());

        const double scale = std::pow(a, -0.4);
        for (int j = 0; j < k; ++j) {
            cmp.rescaled_even[j].push_back((1.0 - even[j]) * scale);
            cmp.rescaled_odd[j].push_back((1.0 - odd[j]) * scale);
            cmp.rescaled_merged[j].push_back((1.0 - merged[j]) * scale);
        }
    }

    // Display-only Richardson extrapolation in a^(2/5) from the two smallest
    // a values: ratio(a) ~ mu + c a^(2/5) gives
    // mu ~ (r2 q - r1) / (q - 1), q = (a1/a2)^(2/5).
    cmp.richardson_merged.assign(k, 0.0);
    cmp.relative_gap_merged.assign(k, 0.0);
    const std::size_t last = a_values.size() - 1;
    for (int j = 0; j < k; ++j) {
        const double r_small = cmp.rescaled_merged[j][last];
        if (a_values.size() >= 2) {
            const double r_prev = cmp.rescaled_merged[j][last - 1];
            const double q = std::pow(a_values[last - 1] / a_values[last], 0.4);
            cmp.richardson_merged[j] = (r_small * q - r_prev) / (q - 1.0);
        } else {
            cmp.richardson_merged[j] = r_small;
        }
        cmp.relative_gap_merged[j] = std::abs(r_small - cmp.mu[j]) / cmp.mu[j];
    }
    return cmp;
}

}  // namespace aniso
