#include "anisospec/discretize.hpp"

#include <cmath>
#include <cstdio>

#include "anisospec/eigensolve.hpp"
#include "anisospec/errors.hpp"
#include "anisospec/quadrature.hpp"

namespace aniso {

namespace {

// Half-line panel boundaries on [0, X]: widths grow geometrically from the
// origin with total ratio capped at 5, so the ridge along x = y stays
// resolved where the eigenfunctions carry their mass.
std::vector<double> half_line_breaks(double X, int panels) {
    std::vector<double> breaks(panels + 1);
    if (panels == 1) {
        breaks = {0.0, X};
        return breaks;
    }
    const double q = std::pow(5.0, 1.0 / (panels - 1));
    const double w0 = X * (q - 1.0) / (std::pow(q, panels) - 1.0);
    breaks[0] = 0.0;
    double w = w0;
    for (int i = 1; i <= panels; ++i) {
        breaks[i] = breaks[i - 1] + w;
        w *= q;
    }
    breaks[panels] = X;  // absorb rounding
    return breaks;
}

void append_panel(QuadratureGrid& grid, const GaussRule& rule, double lo, double hi) {
    grid.panel_offsets.push_back(grid.nodes.size());
    const double c = 0.5 * (lo + hi);
    const double h = 0.5 * (hi - lo);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        grid.nodes.push_back(c + h * rule.nodes[i]);
        grid.weights.push_back(h * rule.weights[i]);
    }
}

QuadratureGrid half_line_grid(double X, int node_count) {
    // Distribute node_count nodes over panels of ~12 points each.
    const int panels = std::max(1, static_cast<int>(std::lround(node_count / 12.0)));
    const int base = node_count / panels;
    const int extra = node_count % panels;
    const std::vector<double> breaks = half_line_breaks(X, panels);

    QuadratureGrid grid;
    grid.nodes.reserve(node_count);
    grid.weights.reserve(node_count);
    GaussRule rule_lo = make_gauss_rule(base);
    GaussRule rule_hi = extra > 0 ? make_gauss_rule(base + 1) : rule_lo;
    for (int i = 0; i < panels; ++i)
        append_panel(grid, i < extra ? rule_hi : rule_lo, breaks[i], breaks[i + 1]);
    grid.panel_offsets.push_back(grid.nodes.size());
    grid.truncation_radius = X;
    return grid;
}

void verify_grid(const QuadratureGrid& grid, double lo, double hi) {
    double sum_w = 0.0, sum_x2 = 0.0;
    for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
        if (!(grid.weights[i] > 0.0)) throw InvariantViolation("nonpositive weight");
        if (i > 0 && !(grid.nodes[i] > grid.nodes[i - 1]))
            throw InvariantViolation("grid nodes not strictly increasing");
        sum_w += grid.weights[i];
        sum_x2 += grid.weights[i] * grid.nodes[i] * grid.nodes[i];
    }
    const double length = hi - lo;
    if (std::abs(sum_w - length) > 1e-10 * std::max(1.0, length))
        throw InvariantViolation("grid weights do not integrate the domain length");
    const double exact_x2 = (hi * hi * hi - lo * lo * lo) / 3.0;
    if (std::abs(sum_x2 - exact_x2) > 1e-8 * std::max(1.0, std::abs(exact_x2)))
        throw InvariantViolation("grid fails quadratic exactness check");
}

}  // namespace

const char* to_string(ParitySector s) {
    switch (s) {
        case ParitySector::Full: return "full";
        case ParitySector::Even: return "even";
        case ParitySector::Odd: return "odd";
    }
    return "?";
}

double QuadratureGrid::integrate(const std::vector<double>& values) const {
    if (values.size() != nodes.size())
        throw ParameterError("tabulated values do not match grid size");
    double sum = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) sum += weights[i] * values[i];
    return sum;
}

QuadratureGrid build_grid(ParitySector sector, double truncation_radius, int node_count) {
    if (!(truncation_radius > 0.0))
        throw ParameterError("truncation radius must be > 0");
    if (node_count < 8)
        throw ParameterError("node_count must be >= 8");
    if (sector == ParitySector::Full && node_count % 2 != 0)
        throw ParameterError("full-line grid needs an even node count");

    QuadratureGrid grid;
    if (sector == ParitySector::Full) {
        // Mirror the half-line panels so parity is an exact index map and the
        // full matrix block-diagonalizes into the half-line sectors.
        const QuadratureGrid half = half_line_grid(truncation_radius, node_count / 2);
        grid.truncation_radius = truncation_radius;
        const std::size_t nh = half.nodes.size();
        for (std::size_t p = half.panel_offsets.size() - 1; p > 0; --p) {
            grid.panel_offsets.push_back(grid.nodes.size());
            const std::size_t lo = half.panel_offsets[p - 1];
            const std::size_t hi = half.panel_offsets[p];
            for (std::size_t i = hi; i > lo; --i) {
                grid.nodes.push_back(-half.nodes[i - 1]);
                grid.weights.push_back(half.weights[i - 1]);
            }
        }
        for (std::size_t p = 0; p + 1 < half.panel_offsets.size(); ++p)
            grid.panel_offsets.push_back(nh + half.panel_offsets[p]);
        for (std::size_t i = 0; i < nh; ++i) {
            grid.nodes.push_back(half.nodes[i]);
            grid.weights.push_back(half.weights[i]);
        }
        grid.panel_offsets.push_back(grid.nodes.size());
        verify_grid(grid, -truncation_radius, truncation_radius);
    } else {
        grid = half_line_grid(truncation_radius, node_count);
        verify_grid(grid, 0.0, truncation_radius);
    }
    grid.sector = sector;
    return grid;
}

QuadratureGrid build_grid_from_breaks(const std::vector<double>& breaks, int order,
                                      ParitySector sector) {
    if (breaks.size() < 2) throw ParameterError("need at least two breakpoints");
    if (order < 2) throw ParameterError("panel order must be >= 2");
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
        if (!(breaks[i] < breaks[i + 1]))
            throw ParameterError("breakpoints must be strictly increasing");
    QuadratureGrid grid;
    const GaussRule rule = make_gauss_rule(order);
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
        append_panel(grid, rule, breaks[i], breaks[i + 1]);
    grid.panel_offsets.push_back(grid.nodes.size());
    grid.truncation_radius = std::max(std::abs(breaks.front()), std::abs(breaks.back()));
    grid.sector = sector;
    verify_grid(grid, breaks.front(), breaks.back());
    return grid;
}

DiscretizedOperator assemble(const KernelParams& p, ParitySector sector,
                             QuadratureGrid grid) {
    validate(p);
    if (grid.sector != sector)
        throw ParameterError("grid was built for a different parity sector");
    if (grid.nodes.empty()) throw ParameterError("empty grid");
    if (sector != ParitySector::Full && grid.nodes.front() < 0.0)
        throw ParameterError("parity-reduced grid must live on the half line");

    const Eigen::Index n = static_cast<Eigen::Index>(grid.node_count());
    std::vector<double> sqw(grid.node_count());
    for (std::size_t i = 0; i < sqw.size(); ++i) sqw[i] = std::sqrt(grid.weights[i]);

    DiscretizedOperator op;
    op.matrix.resize(n, n);
    const double sign = sector == ParitySector::Odd ? -1.0 : 1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double xi = grid.nodes[i];
        for (Eigen::Index j = i; j < n; ++j) {
            const double xj = grid.nodes[j];
            double k = eval_full(p, xi, xj);
            if (sector != ParitySector::Full) k += sign * eval_full(p, xi, -xj);
            const double entry = sqw[i] * k * sqw[j];
            op.matrix(i, j) = entry;
            op.matrix(j, i) = entry;
        }
    }
    op.grid = std::move(grid);
    op.params = p;
    op.sector = sector;
    return op;
}

double default_truncation_radius(const KernelParams& p) {
    validate(p);
    if (p.a <= 0.0) return 40.0;
    const double scale = std::pow(p.a, -2.0 / (1.0 + 2.0 * p.t));
    return std::max(40.0, 25.0 * scale);
}

int default_node_count(ParitySector sector, double truncation_radius, double T) {
    const double extent =
        sector == ParitySector::Full ? 2.0 * truncation_radius : truncation_radius;
    const double width = 1.4 * std::fmin(1.0, T);
    int panels = static_cast<int>(std::ceil(extent / width));
    if (sector == ParitySector::Full && panels % 2 != 0) ++panels;
    return 12 * panels;
}

std::pair<DiscretizedOperator, ConvergenceReport> refine_until(
    const KernelParams& p, ParitySector sector, double tol,
    const RefineOptions& options) {
    validate(p);
    if (!(tol > 0.0)) throw ParameterError("refinement tolerance must be > 0");
    if (options.track_k < 1) throw ParameterError("track_k must be >= 1");
    if (p.a > 0.0 && (p.a < 1e-4 || p.a > 0.3))
        std::fprintf(stderr,
                     "anisospec: warning: a = %g outside the desk-scale window "
                     "[1e-4, 0.3]; grids may be too coarse or too large\n",
                     p.a);

    ConvergenceReport report;
    double radius = default_truncation_radius(p);
    int nodes = static_cast<int>(
        std::lround(options.density_scale *
                    default_node_count(sector, radius, p.T)));
    if (sector == ParitySector::Full && nodes % 2 != 0) ++nodes;

    DiscretizedOperator op;
    std::vector<double> prev;
    for (int level = 0; level < options.max_levels; ++level) {
        if (static_cast<std::size_t>(nodes) > options.max_nodes) {
            const double best = prev.empty() ? 0.0 : prev[0];
            throw ConvergenceError(
                "refinement hit the node cap before reaching tolerance", best,
                report.levels.empty() ? 1.0 : report.levels.back().delta);
        }
        op = assemble(p, sector, build_grid(sector, radius, nodes));
        const EigenPairs pairs =
            top_eigenpairs(op.matrix, options.track_k, options.solver_tol);

        ConvergenceReport::Level entry;
        entry.node_count = nodes;
        entry.radius = radius;
        entry.eigenvalues = pairs.values;
        if (!prev.empty()) {
            double delta = 0.0;
            for (std::size_t j = 0; j < prev.size(); ++j)
                delta = std::max(delta, std::abs(pairs.values[j] - prev[j]));
            entry.delta = delta;
        }
        report.levels.push_back(entry);
        if (!prev.empty() && entry.delta < tol) {
            report.converged = true;
            report.final_delta = entry.delta;
            return {std::move(op), std::move(report)};
        }
        prev = pairs.values;
        nodes *= 2;
        radius *= options.radius_growth;
        if (sector == ParitySector::Full && nodes % 2 != 0) ++nodes;
    }
    throw ConvergenceError("refinement level cap reached before tolerance",
                           prev.empty() ? 0.0 : prev[0],
                           report.levels.empty() ? 1.0
                                                 : report.levels.back().delta);
}

}  // namespace aniso
