#pragma once

#include <Eigen/Dense>
#include <complex>

#include "anisospec/rng.hpp"
#include "anisospec/spectra.hpp"

namespace aniso {

// Two orthogonal projectors and a unitary, the data of the abstract additive
// uncertainty principle. Real inputs are carried with zero imaginary parts.
struct ProjectorPair {
    Eigen::MatrixXcd P;
    Eigen::MatrixXcd R;
    Eigen::MatrixXcd V;
};

// Throws ParameterError unless P, R are self-adjoint idempotents and V is
// unitary, each to 1e-12.
void validate(const ProjectorPair& pair);

// ||RP|| computed as sqrt of the top eigenvalue of PRP; equals the cosine of
// the smallest principal angle between the two ranges.
double product_norm(const Eigen::MatrixXcd& P, const Eigen::MatrixXcd& R);

// Both sides of the three-vector inequality
//   q^2 = |<g,u>|^2 + |<g,v>|^2 <= 1 + |<u,v>|
// for unit vectors; returns (q^2, 1 + t) and asserts the inequality.
std::pair<double, double> pair_angle_bound(const Eigen::VectorXcd& u,
                                           const Eigen::VectorXcd& v,
                                           const Eigen::VectorXcd& g);

struct UPWitness {
    double b = 0.0;          // product norm in [0, 1], b^2 = ||P V*RV P||
    Eigen::VectorXcd f;      // the unit vector tested
    double lhs = 0.0;        // ||f-Pf||^2 + ||Vf-RVf||^2
    double slack = 0.0;      // lhs - (1 - b), must be >= -1e-12
    double term_space = 0.0;  // ||f-Pf||^2
    double term_freq = 0.0;   // ||Vf-RVf||^2
};

// Additive uncertainty principle check: ||f-Pf||^2 + ||Vf-RVf||^2 >= 1-b.
// Also checks that the larger of the two terms is >= (1-b)/2. Throws
// InvariantViolation if either fails beyond 1e-12.
UPWitness additive_up_check(const ProjectorPair& pair, const Eigen::VectorXcd& f);

// Nystrom matrix of the sinc kernel (1/pi) sin(y-x)/(y-x) on [-1,1], with
// the diagonal taken at the limit value 1/pi. Its top eigenvalue is the b^2
// of the time-and-band-limiting projector pair.
DiscretizedOperator sinc_operator(int n);

// Schur bound on the sinc operator: max over |x| <= 1 of
// (1/pi) Int_{-1}^{1} |sin(y-x)/(y-x)| dy.
double sinc_schur_bound();

enum class DichotomyCase { SpaceTail, FrequencyTail, Both };

struct DichotomyResult {
    DichotomyCase which = DichotomyCase::SpaceTail;
    double space_tail = 0.0;  // mass of |f|^2 beyond |x| >= H
    double freq_tail = 0.0;   // mass of |Ff|^2 beyond |s| >= h
};

// Concentration dichotomy for a unit-norm tabulated function: at least one of
// the two tail masses is >= 1/9 for any hH = 1. General (h, H) is reduced to
// the h = H = 1 case through the unitary rescaling g(x) = sqrt(H) f(Hx).
// Throws InvariantViolation if neither tail reaches 1/9 beyond tolerance,
// which would falsify the inequality or reveal a transform bug.
DichotomyResult concentration_dichotomy(const Tabulated& f, double h, double H);

// L2 residual, on a common frequency grid, between the transform of g(rx)
// (resampled onto a rescaled grid) and (1/r) (Fg)(s/r).
double fourier_scaling_check(const Tabulated& g, double r);

// Rotation-invariant random ensembles for the property suites. All draw
// exclusively from the given Rng, so runs replay deterministically.
Eigen::MatrixXcd random_unitary(Rng& rng, int dim, bool complex_field);
Eigen::MatrixXcd random_projector(Rng& rng, int dim, int rank, bool complex_field);
Eigen::VectorXcd random_unit_vector(Rng& rng, int dim, bool complex_field);

}  // namespace aniso
