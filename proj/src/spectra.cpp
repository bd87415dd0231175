#include "anisospec/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "anisospec/eigensolve.hpp"
#include "anisospec/errors.hpp"

namespace aniso {

namespace {

std::string describe_grid(const DiscretizedOperator& op) {
    std::ostringstream out;
    out << to_string(op.sector) << " n=" << op.grid.node_count()
        << " X=" << op.grid.truncation_radius;
    if (op.params) out << " a=" << op.params->a << " T=" << op.params->T
                       << " t=" << op.params->t;
    return out.str();
}

// Weighted coordinates: the symmetrized matrix acts on g_i = sqrt(w_i) f(x_i).
Eigen::VectorXd to_weighted(const QuadratureGrid& grid, const std::vector<double>& f) {
    Eigen::VectorXd g(static_cast<Eigen::Index>(f.size()));
    for (std::size_t i = 0; i < f.size(); ++i)
        g[static_cast<Eigen::Index>(i)] = std::sqrt(grid.weights[i]) * f[i];
    return g;
}

std::vector<double> evaluate_on_grid(const DiscretizedOperator& op,
                                     const TestFunction& f) {
    const QuadratureGrid& grid = op.grid;
    std::vector<double> values(grid.node_count());
    if (const auto* g = std::get_if<GaussianOdd>(&f)) {
        if (op.sector != ParitySector::Odd)
            throw ParameterError("odd test function requires the Odd sector");
        if (!(g->h > 0.0)) throw ParameterError("Gaussian width must be > 0");
        for (std::size_t i = 0; i < values.size(); ++i) {
            const double x = grid.nodes[i];
            values[i] = x * std::exp(-0.5 * g->h * g->h * x * x);
        }
    } else if (const auto* l = std::get_if<TruncatedLinear>(&f)) {
        if (op.sector != ParitySector::Odd)
            throw ParameterError("odd test function requires the Odd sector");
        if (!(l->H > 0.0)) throw ParameterError("cutoff H must be > 0");
        for (std::size_t i = 0; i < values.size(); ++i) {
            const double x = grid.nodes[i];
            values[i] = std::abs(x) <= l->H ? x : 0.0;
        }
    } else {
        const auto& tab = std::get<Tabulated>(f);
        if (tab.values.size() != grid.node_count())
            throw ParameterError("tabulated function does not match operator grid");
        for (std::size_t i = 0; i < tab.values.size(); ++i)
            if (std::abs(tab.grid.nodes[i] - grid.nodes[i]) >
                1e-12 * (1.0 + std::abs(grid.nodes[i])))
                throw ParameterError("tabulated function lives on a different grid");
        values = tab.values;
    }
    return values;
}

}  // namespace

SpectrumResult top_eigenvalues(const DiscretizedOperator& op, int k, double tol) {
    const EigenPairs pairs = top_eigenpairs(op.matrix, k, tol);
    SpectrumResult result;
    result.eigenvalues = pairs.values;
    result.residuals = pairs.residuals;
    result.vectors = pairs.vectors;
    result.iterations = pairs.iterations;
    result.deficiencies.reserve(pairs.values.size());
    for (const double e : pairs.values) result.deficiencies.push_back(1.0 - e);
    result.grid_meta = describe_grid(op);
    return result;
}

std::pair<double, double> largest_eigenvalue(const KernelParams& p, ParitySector sector,
                                             double tol, const RefineOptions& options) {
    if (!(p.a > 0.0))
        throw ParameterError("grid-converged eigenvalue requires a > 0");
    auto [op, report] = refine_until(p, sector, tol, options);
    return {report.levels.back().eigenvalues[0], report.final_delta};
}

double rayleigh_quotient(const DiscretizedOperator& op, const TestFunction& f) {
    const std::vector<double> values = evaluate_on_grid(op, f);
    const Eigen::VectorXd g = to_weighted(op.grid, values);
    const double denom = g.squaredNorm();
    if (!(denom > 0.0)) throw DomainError("test function has zero norm on the grid");
    return g.dot(op.matrix * g) / denom;
}

EigenfunctionResult eigenfunction(const DiscretizedOperator& op, int j) {
    if (j < 0 || static_cast<Eigen::Index>(j) >= op.matrix.rows())
        throw ParameterError("eigenfunction index out of range");
    const SpectrumResult top = top_eigenvalues(op, j + 2 <= static_cast<int>(op.matrix.rows())
                                                       ? j + 2
                                                       : j + 1,
                                               1e-11);
    EigenfunctionResult result;
    result.eigenvalue = top.eigenvalues[static_cast<std::size_t>(j)];
    if (static_cast<std::size_t>(j) + 1 < top.eigenvalues.size()) {
        const double gap = top.eigenvalues[j] - top.eigenvalues[j + 1];
        result.degenerate_warning = gap < top.residuals[j];
    }

    // Convert from weighted coordinates back to function values and fix the
    // L2 normalization on the grid.
    const Eigen::VectorXd& v = top.vectors[static_cast<std::size_t>(j)];
    std::vector<double> values(op.grid.node_count());
    for (std::size_t i = 0; i < values.size(); ++i)
        values[i] = v[static_cast<Eigen::Index>(i)] / std::sqrt(op.grid.weights[i]);
    double norm2 = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i)
        norm2 += op.grid.weights[i] * values[i] * values[i];
    const double scale = 1.0 / std::sqrt(norm2);
    for (double& x : values) x *= scale;
    for (const double x : values) {
        if (std::abs(x) > 1e-8) {
            if (x < 0.0)
                for (double& y : values) y = -y;
            break;
        }
    }
    result.fn = Tabulated{op.grid, std::move(values)};
    return result;
}

double interpolate(const Tabulated& f, double x) {
    const QuadratureGrid& grid = f.grid;
    if (grid.nodes.empty() || f.values.size() != grid.node_count())
        throw ParameterError("malformed tabulated function");
    if (grid.panel_offsets.size() < 2) throw ParameterError("grid lacks panel structure");
    // Anything outside the truncated domain is treated as decayed to zero.
    const double dom_lo =
        grid.sector == ParitySector::Full ? -grid.truncation_radius : 0.0;
    if (x < dom_lo || x > grid.truncation_radius) return 0.0;

    // Locate the panel whose node range brackets x.
    std::size_t panel = grid.panel_offsets.size() - 2;
    for (std::size_t p = 0; p + 1 < grid.panel_offsets.size(); ++p) {
        const std::size_t next = grid.panel_offsets[p + 1];
        if (next < grid.nodes.size() && grid.nodes[next] < x) continue;
        panel = p;
        break;
    }
    const std::size_t lo = grid.panel_offsets[panel];
    const std::size_t hi = grid.panel_offsets[panel + 1];

    // Barycentric Lagrange over the panel's Gauss nodes.
    double num = 0.0, den = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
        const double dx = x - grid.nodes[i];
        if (std::abs(dx) < 1e-300) return f.values[i];
        double w = 1.0;
        for (std::size_t j = lo; j < hi; ++j)
            if (j != i) w /= (grid.nodes[i] - grid.nodes[j]);
        const double c = w / dx;
        num += c * f.values[i];
        den += c;
    }
    return num / den;
}

}  // namespace aniso
