#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "anisospec/kernel.hpp"

namespace aniso {

// Invariant subspace selector. Even/Odd grids live on [0, X] with the kernel
// folded across the origin; Full lives on [-X, X] with mirrored panels so the
// discrete operator splits exactly into the two half-line blocks.
enum class ParitySector { Full, Even, Odd };

const char* to_string(ParitySector s);

struct QuadratureGrid {
    std::vector<double> nodes;    // strictly increasing
    std::vector<double> weights;  // all positive
    // panel i covers nodes [panel_offsets[i], panel_offsets[i+1]); kept so
    // interpolation and cut-aligned integrals can respect panel boundaries.
    std::vector<std::size_t> panel_offsets;
    double truncation_radius = 0.0;
    ParitySector sector = ParitySector::Full;

    std::size_t node_count() const { return nodes.size(); }
    // Integral of tabulated values against the grid weights.
    double integrate(const std::vector<double>& values) const;
};

// Composite Gauss-Legendre grid covering the sector domain with node_count
// nodes. Panel widths grow geometrically away from the origin (capped ratio),
// matching where the kernel ridge needs resolution. Polynomial exactness is
// verified at construction. node_count must be >= 8 (and even for Full).
QuadratureGrid build_grid(ParitySector sector, double truncation_radius, int node_count);

// Grid from explicit panel breakpoints (strictly increasing) with `order`
// Gauss nodes per panel. Lets callers align panel boundaries with cut points
// (e.g. +-H) so restricted integrals stay quadrature-exact.
QuadratureGrid build_grid_from_breaks(const std::vector<double>& breaks, int order,
                                      ParitySector sector = ParitySector::Full);

// Symmetric Nystrom matrix: entry (i,j) = sqrt(w_i) kappa(x_i,x_j) sqrt(w_j)
// with the sector kernel kappa. Shares the spectrum of the plain Nystrom
// matrix w_j kappa(x_i,x_j) through the diagonal similarity.
struct DiscretizedOperator {
    Eigen::MatrixXd matrix;
    QuadratureGrid grid;
    std::optional<KernelParams> params;  // absent for non-family kernels (sinc)
    ParitySector sector = ParitySector::Full;
};

DiscretizedOperator assemble(const KernelParams& p, ParitySector sector,
                             QuadratureGrid grid);

// Default truncation radius: max(40, 25 a^(-2/(1+2t))), following the
// extremizing scale H ~ a^(-2/(1+2t)) of the kernel family (2/5 at t = 2).
double default_truncation_radius(const KernelParams& p);

// Default node budget for a given radius: ~12 nodes per panel of width
// 1.4 min(1, T), doubled for the full line.
int default_node_count(ParitySector sector, double truncation_radius, double T);

struct RefineOptions {
    int track_k = 1;           // convergence is judged on eigenvalues 0..track_k-1
    int max_levels = 5;
    // Radius must outpace node doubling: the even-sector eigenfunctions carry
    // slowly decaying tails, so truncation error, not panel density, is
    // usually the binding error at the first level.
    double radius_growth = 1.35;
    std::size_t max_nodes = 9500;
    double density_scale = 1.0;  // multiplies the default node budget at level 0
    double solver_tol = 1e-11;
};

struct ConvergenceReport {
    struct Level {
        int node_count = 0;
        double radius = 0.0;
        std::vector<double> eigenvalues;  // the tracked top ones
        double delta = 0.0;               // max change vs previous level
    };
    std::vector<Level> levels;
    bool converged = false;
    double final_delta = 0.0;
};

// Doubles the node count and grows the truncation radius until the tracked
// eigenvalues change by less than tol between successive levels. Throws
// ConvergenceError (carrying the best estimate and last delta) when the level
// cap or the node cap is reached first; a = 0 is the documented failure mode,
// since the limiting spectrum is continuous there.
std::pair<DiscretizedOperator, ConvergenceReport> refine_until(
    const KernelParams& p, ParitySector sector, double tol,
    const RefineOptions& options = {});

}  // namespace aniso
