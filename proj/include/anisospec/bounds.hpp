#pragma once

namespace aniso {

// Certified bracket for one anisotropy value at T = 1: a variational lower
// bound and a Schur upper bound for the odd sector, the uncertainty-principle
// upper bound for the full operator, and the grid eigenvalues they must
// sandwich.
struct BoundReport {
    double a = 0.0;
    double lower_odd = 0.0;        // variational value, certified E^o >= this
    double upper_odd = 0.0;        // Schur column sup, certified E^o <= this
    double upper_full = 0.0;       // 1 - a^(2/5)/12
    double upper_full_sqrt_form = 0.0;  // sharper intermediate sqrt(1 - a^(2/5)/6)
    bool up_proof_window = false;  // whether a^(2/5) <= 1/4 held (proof validity)
    double numeric_E_even = 0.0;
    double numeric_E_odd = 0.0;
    double unc_even = 0.0;
    double unc_odd = 0.0;
    bool sandwich_ok = false;
};

// Closed form of the angular integral
//   (1/2pi) Int_0^{2pi} sin^2(2phi) / (C^2 - A^2 sin^2(2phi)) dphi
// for C > A > 0, equal to (1/A^2)(C/B - 1) with B = sqrt(C^2 - A^2) but
// computed as 1/(B(C+B)), which keeps full precision when A << C.
double angular_integral_closed(double C, double A);

// Width of the optimal odd Gaussian trial function: lambda* a^(2/5) with
// lambda* = (15 sqrt(pi))^(1/5), the minimizer of
// (2/sqrt(pi)) lambda + (15/2) lambda^(-4).
double optimal_h(double a);

// Variational lower bound for the top odd eigenvalue at T = 1 using the
// trial function x exp(-h^2 x^2 / 2): returns (J1 - J2) / ||f||^2 with
// ||f||^2 = (sqrt(pi)/2) H^3, J2 = H^2, H = 1/h, and J1 evaluated by
// quadrature of its exponentially weighted integral form.
double variational_lower_odd(double a, double h);

// Analytic cap p(x) on the Schur column integral of the antisymmetrized
// kernel:
//   p(x) = (1 + a^2 x^4 / 2)^(-1/2) [1/2 + (1/pi) arctan(x / (2 sqrt(1 + a^2 x^4 / 2)))].
double schur_column_bound(double a, double x);

struct SchurUpperResult {
    double value = 0.0;  // sup_x of the column integral; upper bound for E^o
    double x_max = 0.0;  // maximizer
};

// Schur upper bound for the odd sector: the supremum over x >= 0 of
// Int |K'(x,y)| dy, computed by quadrature and maximized by golden-section
// search seeded at x* = (35/18)^(1/5) a^(-2/5) and guarded by a dense scan.
SchurUpperResult schur_upper_odd_detailed(double a);
double schur_upper_odd(double a);

// Uncertainty-principle upper bound for the full operator norm at T = 1:
// 1 - a^(2/5)/12, valid for a^(2/5) <= 1/4; outside that window the two-case
// derivation breaks and the call is rejected.
double up_upper_full(double a);

// Plain Schur test on the full kernel, Int K(0,y) dy: captures only an O(a)
// deficiency instead of O(a^(2/5)). Kept as a negative control.
double naive_schur_full(double a);

// Full pipeline for one a: all bounds above plus the grid eigenvalues, with
// sandwich_ok set when every inequality holds within the grid uncertainties.
BoundReport certify(double a, double eigen_tol = 1e-8);

}  // namespace aniso
