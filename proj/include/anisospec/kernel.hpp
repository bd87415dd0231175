#pragma once

namespace aniso {

// One member of the anisotropic kernel family
//
//     K(x, y) = (1/pi) / (T^2 + (x-y)^2 + a^2 (x^2+y^2)^t).
//
// a >= 0 is the anisotropy strength, T > 0 the temperature, t > 0 the
// confinement exponent. t = 2 is the physical case; several operations are
// only defined there and reject other values instead of guessing.
struct KernelParams {
    double a = 0.0;
    double T = 1.0;
    double t = 2.0;
};

// Throws ParameterError unless T > 0, a >= 0, t > 0.
void validate(const KernelParams& p);

// K(x, y). Strictly positive and symmetric in (x, y).
double eval_full(const KernelParams& p, double x, double y);

// Antisymmetrized kernel K'(x, y) = (1/2)[K(x,y) - K(x,-y)] in its
// single-fraction form
//
//     K'(x,y) = (1/2pi) * 4xy / [(1 + x^2 + y^2 + a^2(x^2+y^2)^2)^2 - 4x^2y^2],
//
// which avoids the cancellation of the two-fraction difference at large
// |x|, |y|. Defined only for T = 1, t = 2.
double eval_antisym(const KernelParams& p, double x, double y);

// K' at x = r cos(phi), y = r sin(phi):
//
//     (1/pi) r^2 sin(2 phi) / [(1 + r^2 + a^2 r^4)^2 - r^4 sin^2(2 phi)].
double eval_polar_antisym(const KernelParams& p, double r, double phi);

// Fourier symbol of the a = 0 convolution kernel: (1/T) exp(-T|s|).
// Its value at s = 0 is the norm of the a = 0 operator.
double eval_convolution_symbol(double T, double s);

// Converged quadrature of the squared kernel over the plane (the
// Hilbert-Schmidt norm squared). Diverges for a = 0, reported as a
// DomainError: the convolution case is not square-integrable.
// `resolution` scales the radial panel count; doubling it is the
// self-convergence check used by the tests.
double hs_norm_squared(const KernelParams& p, int resolution);

}  // namespace aniso
