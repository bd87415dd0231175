#pragma once

#include <utility>
#include <vector>

#include "anisospec/discretize.hpp"

namespace aniso {

// Power-law fit value = prefactor * a^exponent, least squares in log-log.
struct ExponentFit {
    double prefactor = 0.0;
    double exponent = 0.0;
    double rms_residual = 0.0;               // in log space
    std::pair<double, double> a_range{0.0, 0.0};
};

ExponentFit fit_exponent(const std::vector<std::pair<double, double>>& points);

// Grid-converged j-th deficiency 1 - E_j(a) of the kernel with confinement
// exponent t, per anisotropy value. j is 0-based within the sector.
std::vector<std::pair<double, double>> deficiency_sweep(
    double t, const std::vector<double>& a_values, ParitySector sector, int j,
    double tol = 1e-8);

// Dense matrix of the conjectured limit operator with symbol |s| + 4 x^4 on a
// periodic grid of n points (a power of two >= 64) over [-half_width,
// half_width]: a circulant |s| multiplier in the frequency basis plus the
// diagonal quartic in the spatial basis. Eigenvalues ascend; the relevant
// comparison values are the lowest few.
DiscretizedOperator widom_operator(int n, double half_width);

// Lowest eigenvalues of the widom operator, ascending, with a convergence
// check between (n, L) and (2n, 2L).
std::vector<double> widom_eigenvalues(int j_max, int n = 512, double half_width = 12.0);

// Exploratory comparison of rescaled deficiencies phi_j(a) a^(-2/5) against
// the widom operator eigenvalues. The paper leaves the even/odd/merged
// alignment open, so all three are reported; nothing is asserted.
struct WidomComparison {
    std::vector<double> a_values;                    // as given (descending)
    std::vector<double> mu;                          // ascending, j <= j_max
    // rescaled[j][i] = (1 - E_j(a_i)) * a_i^(-2/5) per alignment
    std::vector<std::vector<double>> rescaled_even;
    std::vector<std::vector<double>> rescaled_odd;
    std::vector<std::vector<double>> rescaled_merged;
    // Richardson extrapolation in a^(2/5) of the merged ratios (display only).
    std::vector<double> richardson_merged;
    // Relative gap |ratio - mu_j| / mu_j at the smallest a, merged alignment.
    std::vector<double> relative_gap_merged;
};

WidomComparison widom_compare(int j_max, const std::vector<double>& a_values,
                              double tol = 1e-7);

}  // namespace aniso
