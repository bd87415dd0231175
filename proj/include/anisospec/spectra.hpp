#pragma once

#include <string>
#include <variant>
#include <vector>

#include "anisospec/discretize.hpp"

namespace aniso {

struct SpectrumResult {
    std::vector<double> eigenvalues;   // descending
    std::vector<double> deficiencies;  // 1 - E_j (meaningful at T = 1)
    std::vector<double> residuals;     // ||Mv - lambda v|| per pair
    std::vector<Eigen::VectorXd> vectors;
    std::string grid_meta;
    int iterations = 0;
};

// k largest eigenvalues of the discretized operator, residual-certified to
// tol * ||M||. Deterministic for fixed inputs. Ties are broken by the first
// sign change of the eigenvector (ascending).
SpectrumResult top_eigenvalues(const DiscretizedOperator& op, int k, double tol);

// Grid-converged largest eigenvalue via refine_until; second value is the
// last refinement delta, reported as the grid uncertainty.
std::pair<double, double> largest_eigenvalue(const KernelParams& p, ParitySector sector,
                                             double tol,
                                             const RefineOptions& options = {});

// Test functions for Rayleigh quotients. The Gaussian and truncated-linear
// variants are the odd trial functions x exp(-h^2 x^2 / 2) and
// x 1{|x| <= H}; both require the Odd sector. hH = 1 is the width convention.
struct GaussianOdd {
    double h = 1.0;
};
struct TruncatedLinear {
    double H = 1.0;
};
struct Tabulated {
    QuadratureGrid grid;
    std::vector<double> values;
};
using TestFunction = std::variant<GaussianOdd, TruncatedLinear, Tabulated>;

// <K f, f> / <f, f> through the grid quadrature. Never exceeds the top
// eigenvalue of the same discretized operator (variational principle holds
// exactly at the matrix level). Tabulated inputs must live on op's grid.
double rayleigh_quotient(const DiscretizedOperator& op, const TestFunction& f);

struct EigenfunctionResult {
    Tabulated fn;              // unit L2 norm on the grid
    double eigenvalue = 0.0;
    bool degenerate_warning = false;  // neighbor gap below the residual
};

// j-th eigenfunction (0-based, descending eigenvalues). Sign convention: the
// first node with |value| > 1e-8 is positive.
EigenfunctionResult eigenfunction(const DiscretizedOperator& op, int j);

// Barycentric Lagrange interpolation within the panel containing x; exact at
// the nodes and spectrally accurate for grid-resolved functions. Outside the
// grid returns 0.
double interpolate(const Tabulated& f, double x);

}  // namespace aniso
