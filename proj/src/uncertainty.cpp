#include "anisospec/uncertainty.hpp"

#include <cmath>

#include "anisospec/errors.hpp"
#include "anisospec/quadrature.hpp"

namespace aniso {

namespace {

constexpr double kPi = 3.141592653589793238462643;

double sinc(double d) {
    if (std::abs(d) < 1e-8) return 1.0 - d * d / 6.0;
    return std::sin(d) / d;
}

void require_projector(const Eigen::MatrixXcd& P, const char* name) {
    const double scale = std::max(1.0, P.cwiseAbs().maxCoeff());
    if ((P * P - P).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw ParameterError(std::string(name) + " is not idempotent");
    if ((P - P.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw ParameterError(std::string(name) + " is not self-adjoint");
}

double top_eigenvalue_hermitian(const Eigen::MatrixXcd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
    return solver.eigenvalues().maxCoeff();
}

// Unitary continuous Fourier transform of a tabulated function through the
// grid quadrature: (Ff)(s) = (1/sqrt(2pi)) sum_i w_i f_i exp(-i s x_i).
std::complex<double> transform_at(const Tabulated& f, double s) {
    std::complex<double> sum(0.0, 0.0);
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        const double phase = -s * f.grid.nodes[i];
        sum += f.grid.weights[i] * f.values[i] *
               std::complex<double>(std::cos(phase), std::sin(phase));
    }
    return sum / std::sqrt(2.0 * kPi);
}

// Mass of |Ff|^2 over [-S, S] by Gauss panels; used with Parseval to get the
// frequency tail without an infinite integral.
double frequency_inner_mass(const Tabulated& f, double S) {
    const std::vector<double> breaks = {-S, -0.5 * S, 0.0, 0.5 * S, S};
    const GaussRule rule = make_gauss_rule(24);
    double mass = 0.0;
    for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
        const double c = 0.5 * (breaks[p] + breaks[p + 1]);
        const double h = 0.5 * (breaks[p + 1] - breaks[p]);
        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
            mass += h * rule.weights[i] * std::norm(transform_at(f, c + h * rule.nodes[i]));
    }
    return mass;
}

}  // namespace

void validate(const ProjectorPair& pair) {
    if (pair.P.rows() != pair.P.cols() || pair.R.rows() != pair.R.cols() ||
        pair.V.rows() != pair.V.cols())
        throw ParameterError("projector pair matrices must be square");
    if (pair.P.rows() != pair.R.rows() || pair.P.rows() != pair.V.rows())
        throw ParameterError("projector pair dimensions disagree");
    require_projector(pair.P, "P");
    require_projector(pair.R, "R");
    const Eigen::MatrixXcd eye =
        Eigen::MatrixXcd::Identity(pair.V.rows(), pair.V.cols());
    if ((pair.V.adjoint() * pair.V - eye).cwiseAbs().maxCoeff() > 1e-12)
        throw ParameterError("V is not unitary");
}

double product_norm(const Eigen::MatrixXcd& P, const Eigen::MatrixXcd& R) {
    require_projector(P, "P");
    require_projector(R, "R");
    if (P.rows() != R.rows()) throw ParameterError("projector dimensions disagree");
    const double top = top_eigenvalue_hermitian(P * R * P);
    return std::sqrt(std::max(0.0, top));
}

std::pair<double, double> pair_angle_bound(const Eigen::VectorXcd& u,
                                           const Eigen::VectorXcd& v,
                                           const Eigen::VectorXcd& g) {
    for (const auto* w : {&u, &v, &g})
        if (std::abs(w->norm() - 1.0) > 1e-10)
            throw ParameterError("pair_angle_bound needs unit vectors");
    const double q2 = std::norm(g.dot(u)) + std::norm(g.dot(v));
    const double bound = 1.0 + std::abs(u.dot(v));
    if (q2 > bound + 1e-12)
        throw InvariantViolation("three-vector angle inequality failed");
    return {q2, bound};
}

UPWitness additive_up_check(const ProjectorPair& pair, const Eigen::VectorXcd& f) {
    validate(pair);
    if (f.size() != pair.P.rows())
        throw ParameterError("test vector dimension disagrees with the pair");
    if (std::abs(f.norm() - 1.0) > 1e-10)
        throw ParameterError("test vector must have unit norm");

    const Eigen::MatrixXcd Q = pair.V.adjoint() * pair.R * pair.V;
    const double b2 = top_eigenvalue_hermitian(pair.P * Q * pair.P);
    UPWitness w;
    w.b = std::sqrt(std::min(1.0, std::max(0.0, b2)));
    w.f = f;
    w.term_space = (f - pair.P * f).squaredNorm();
    const Eigen::VectorXcd vf = pair.V * f;
    w.term_freq = (vf - pair.R * vf).squaredNorm();
    w.lhs = w.term_space + w.term_freq;
    w.slack = w.lhs - (1.0 - w.b);
    if (w.slack < -1e-12)
        throw InvariantViolation("additive uncertainty principle slack went negative");
    if (std::max(w.term_space, w.term_freq) < 0.5 * (1.0 - w.b) - 1e-12)
        throw InvariantViolation("max-term corollary of the uncertainty principle failed");
    return w;
}

DiscretizedOperator sinc_operator(int n) {
    if (n < 16) throw ParameterError("sinc operator grid needs n >= 16");
    QuadratureGrid grid = build_grid(ParitySector::Full, 1.0, n % 2 == 0 ? n : n + 1);
    const Eigen::Index dim = static_cast<Eigen::Index>(grid.node_count());
    DiscretizedOperator op;
    op.matrix.resize(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        const double swi = std::sqrt(grid.weights[i]);
        for (Eigen::Index j = i; j < dim; ++j) {
            const double k = sinc(grid.nodes[i] - grid.nodes[j]) / kPi;
            const double entry = swi * k * std::sqrt(grid.weights[j]);
            op.matrix(i, j) = entry;
            op.matrix(j, i) = entry;
        }
    }
    op.grid = std::move(grid);
    op.sector = ParitySector::Full;
    return op;
}

double sinc_schur_bound() {
    const auto column = [&](double x) {
        const auto integrand = [&](double y) { return std::abs(sinc(y - x)); };
        return adaptive_integrate(integrand, -1.0, 1.0, 1e-13) / kPi;
    };
    // The column integral is smooth and even in x; a scan plus golden-section
    // pins the maximum without assuming where it sits.
    double best_x = 0.0, best = -1.0;
    for (int i = 0; i <= 200; ++i) {
        const double x = -1.0 + 2.0 * i / 200.0;
        const double v = column(x);
        if (v > best) {
            best = v;
            best_x = x;
        }
    }
    const double gr = 0.6180339887498948482;
    double a = std::max(-1.0, best_x - 0.02), b = std::min(1.0, best_x + 0.02);
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = column(c), fd = column(d);
    for (int it = 0; it < 80; ++it) {
        if (fc > fd) {
            b = d; d = c; fd = fc;
            c = b - gr * (b - a);
            fc = column(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + gr * (b - a);
            fd = column(d);
        }
    }
    return std::max(best, std::max(fc, fd));
}

DichotomyResult concentration_dichotomy(const Tabulated& f, double h, double H) {
    if (!(h > 0.0) || !(H > 0.0) || std::abs(h * H - 1.0) > 1e-12)
        throw ParameterError("concentration dichotomy requires h, H > 0 with hH = 1");
    if (f.values.size() != f.grid.node_count())
        throw ParameterError("malformed tabulated function");
    double norm2 = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i)
        norm2 += f.grid.weights[i] * f.values[i] * f.values[i];
    if (std::abs(norm2 - 1.0) > 1e-8)
        throw ParameterError("dichotomy input must be square-normalized on its grid");

    // Space tail: the rescaling g(x) = sqrt(H) f(Hx) maps node masses
    // one-to-one, so the mass beyond H can be summed on the native grid.
    double space_tail = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i)
        if (std::abs(f.grid.nodes[i]) >= H)
            space_tail += f.grid.weights[i] * f.values[i] * f.values[i];

    // Frequency tail of f beyond h = frequency tail of g beyond 1; computed
    // through Parseval as 1 - (mass of Fg over [-1, 1]).
    Tabulated g;
    g.grid = f.grid;
    const double sqrtH = std::sqrt(H);
    for (std::size_t i = 0; i < g.grid.nodes.size(); ++i) {
        g.grid.nodes[i] = f.grid.nodes[i] / H;
        g.grid.weights[i] = f.grid.weights[i] / H;
    }
    g.grid.truncation_radius = f.grid.truncation_radius / H;
    g.values.resize(f.values.size());
    for (std::size_t i = 0; i < f.values.size(); ++i) g.values[i] = sqrtH * f.values[i];
    const double inner = frequency_inner_mass(g, 1.0);
    const double freq_tail = std::max(0.0, norm2 - inner);

    DichotomyResult result;
    result.space_tail = space_tail;
    result.freq_tail = freq_tail;
    const double threshold = 1.0 / 9.0;
    const bool holds_space = space_tail >= threshold - 1e-9;
    const bool holds_freq = freq_tail >= threshold - 1e-9;
    if (holds_space && holds_freq)
        result.which = DichotomyCase::Both;
    else if (holds_space)
        result.which = DichotomyCase::SpaceTail;
    else if (holds_freq)
        result.which = DichotomyCase::FrequencyTail;
    else
        throw InvariantViolation(
            "concentration dichotomy failed: both tail masses below 1/9");
    return result;
}

double fourier_scaling_check(const Tabulated& g, double r) {
    if (!(r > 0.0)) throw ParameterError("scaling factor must be > 0");
    if (g.grid.sector != ParitySector::Full)
        throw ParameterError("scaling check expects a full-line tabulated function");

    // Left side: transform of x -> g(rx), resampled on a rescaled grid so the
    // two routes share no quadrature sums.
    Tabulated scaled;
    scaled.grid = build_grid(ParitySector::Full, g.grid.truncation_radius / r,
                             static_cast<int>(g.grid.node_count()));
    scaled.values.resize(scaled.grid.node_count());
    for (std::size_t i = 0; i < scaled.values.size(); ++i)
        scaled.values[i] = interpolate(g, r * scaled.grid.nodes[i]);

    // Common frequency grid: GL panels over [-S, S].
    const double S = 4.0 * std::max(1.0, r);
    const GaussRule rule = make_gauss_rule(32);
    const std::vector<double> breaks = {-S, -0.5 * S, 0.0, 0.5 * S, S};
    double resid2 = 0.0;
    for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
        const double c = 0.5 * (breaks[p] + breaks[p + 1]);
        const double half = 0.5 * (breaks[p + 1] - breaks[p]);
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double s = c + half * rule.nodes[i];
            const std::complex<double> lhs = transform_at(scaled, s);
            const std::complex<double> rhs = transform_at(g, s / r) / r;
            resid2 += half * rule.weights[i] * std::norm(lhs - rhs);
        }
    }
    return std::sqrt(resid2);
}

Eigen::MatrixXcd random_unitary(Rng& rng, int dim, bool complex_field) {
    Eigen::MatrixXcd gauss(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
            const double re = rng.gaussian();
            const double im = complex_field ? rng.gaussian() : 0.0;
            gauss(i, j) = std::complex<double>(re, im);
        }
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(gauss);
    Eigen::MatrixXcd q = qr.householderQ();
    // Normalize column phases against diag(R) so the draw is Haar.
    const Eigen::MatrixXcd rmat = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < dim; ++j) {
        const std::complex<double> d = rmat(j, j);
        if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
    }
    return q;
}

Eigen::MatrixXcd random_projector(Rng& rng, int dim, int rank, bool complex_field) {
    if (rank < 0 || rank > dim) throw ParameterError("projector rank out of range");
    const Eigen::MatrixXcd q = random_unitary(rng, dim, complex_field);
    const Eigen::MatrixXcd basis = q.leftCols(rank);
    return basis * basis.adjoint();
}

Eigen::VectorXcd random_unit_vector(Rng& rng, int dim, bool complex_field) {
    Eigen::VectorXcd v(dim);
    for (int i = 0; i < dim; ++i) {
        const double re = rng.gaussian();
        const double im = complex_field ? rng.gaussian() : 0.0;
        v[i] = std::complex<double>(re, im);
    }
    v.normalize();
    return v;
}

}  // namespace aniso
