#include "anisospec/eigensolve.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "anisospec/errors.hpp"
#include "anisospec/rng.hpp"

namespace aniso {

namespace {

// First index where consecutive entries change sign; used as a deterministic
// tie-break between degenerate eigenpairs.
int first_sign_change(const Eigen::VectorXd& v) {
    int prev = 0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double x = v[i];
        if (std::abs(x) <= 1e-12) continue;
        const int s = x > 0.0 ? 1 : -1;
        if (prev != 0 && s != prev) return static_cast<int>(i);
        prev = s;
    }
    return static_cast<int>(v.size());
}

void sort_pairs(EigenPairs& p) {
    std::vector<std::size_t> order(p.values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<int> sign_change(p.values.size());
    for (std::size_t i = 0; i < p.vectors.size(); ++i)
        sign_change[i] = first_sign_change(p.vectors[i]);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (p.values[a] != p.values[b]) return p.values[a] > p.values[b];
        return sign_change[a] < sign_change[b];
    });
    EigenPairs sorted;
    sorted.iterations = p.iterations;
    for (const std::size_t i : order) {
        sorted.values.push_back(p.values[i]);
        if (!p.vectors.empty()) sorted.vectors.push_back(p.vectors[i]);
        if (!p.residuals.empty()) sorted.residuals.push_back(p.residuals[i]);
    }
    p = std::move(sorted);
}

void certify_residuals(const Eigen::MatrixXd& m, EigenPairs& p) {
    p.residuals.clear();
    for (std::size_t i = 0; i < p.vectors.size(); ++i)
        p.residuals.push_back((m * p.vectors[i] - p.values[i] * p.vectors[i]).norm());
}

void fix_sign(Eigen::VectorXd& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v[i]) > 1e-8) {
            if (v[i] < 0.0) v = -v;
            return;
        }
    }
}

Eigen::VectorXd start_vector(Eigen::Index n, std::uint64_t salt) {
    Rng rng(0x414e49534fULL ^ salt);
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = rng.gaussian();
    v.normalize();
    return v;
}

EigenPairs dense_top_k(const Eigen::MatrixXd& m, int k) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
    EigenPairs p;
    const Eigen::Index n = m.rows();
    for (int i = 0; i < k; ++i) {
        const Eigen::Index j = n - 1 - i;  // Eigen returns ascending
        p.values.push_back(solver.eigenvalues()[j]);
        Eigen::VectorXd v = solver.eigenvectors().col(j);
        fix_sign(v);
        p.vectors.push_back(std::move(v));
    }
    sort_pairs(p);
    certify_residuals(m, p);
    return p;
}

// Lanczos with full reorthogonalization. When the Krylov space closes on an
// invariant subspace (breakdown), its Ritz pairs are exact; they are locked
// and the iteration restarts in the orthogonal complement, which is again
// invariant, so the three-term recurrence stays valid.
EigenPairs lanczos_top_k(const Eigen::MatrixXd& m, int k, double tol) {
    const Eigen::Index n = m.rows();
    const int budget = static_cast<int>(std::min<Eigen::Index>(n, 650));

    std::vector<double> locked_values;
    std::vector<Eigen::VectorXd> locked_vectors;
    int total_iterations = 0;
    double norm_estimate = 1.0;
    EigenPairs best;

    for (int restart = 0; restart < 6; ++restart) {
        std::vector<Eigen::VectorXd> basis;
        std::vector<double> alpha, beta;

        const auto project_out = [&](Eigen::VectorXd& v) {
            for (int pass = 0; pass < 2; ++pass) {
                for (const auto& q : locked_vectors) v -= q.dot(v) * q;
                for (const auto& q : basis) v -= q.dot(v) * q;
            }
        };

        Eigen::VectorXd v0 = start_vector(n, static_cast<std::uint64_t>(n) + 977u * restart);
        project_out(v0);
        if (v0.norm() < 1e-10) break;  // complement exhausted
        basis.push_back(v0.normalized());

        bool breakdown = false;
        while (total_iterations < budget) {
            ++total_iterations;
            const int it = static_cast<int>(basis.size()) - 1;
            Eigen::VectorXd w = m * basis[it];
            const double a = basis[it].dot(w);
            alpha.push_back(a);
            w -= a * basis[it];
            if (it > 0) w -= beta[it - 1] * basis[it - 1];
            project_out(w);
            const double b = w.norm();
            const int j = it + 1;
            breakdown = b < 1e-13 * std::max(1.0, norm_estimate);

            const int still_needed = k - static_cast<int>(locked_values.size());
            if (j >= still_needed &&
                (j % 5 == 0 || breakdown || total_iterations == budget)) {
                Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(j, j);
                for (int i = 0; i < j; ++i) tri(i, i) = alpha[i];
                for (int i = 0; i + 1 < j; ++i) {
                    tri(i, i + 1) = beta[i];
                    tri(i + 1, i) = beta[i];
                }
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(tri);
                norm_estimate = std::max({std::abs(solver.eigenvalues()[0]),
                                          std::abs(solver.eigenvalues()[j - 1]),
                                          norm_estimate});
                bool converged = true;
                for (int i = 0; i < still_needed && i < j; ++i) {
                    const double est =
                        b * std::abs(solver.eigenvectors()(j - 1, j - 1 - i));
                    if (est > tol * norm_estimate) converged = false;
                }
                if (converged || breakdown || total_iterations == budget) {
                    EigenPairs p;
                    p.iterations = total_iterations;
                    // Candidate set: locked pairs plus the Ritz pairs of the
                    // current run; the k largest of the union are returned.
                    const int take = breakdown ? j : std::min(still_needed, j);
                    for (int i = 0; i < take; ++i) {
                        p.values.push_back(solver.eigenvalues()[j - 1 - i]);
                        Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
                        for (int q = 0; q < j; ++q)
                            v += solver.eigenvectors()(q, j - 1 - i) * basis[q];
                        v.normalize();
                        fix_sign(v);
                        p.vectors.push_back(std::move(v));
                    }
                    if (breakdown && !converged) {
                        // Lock the exact invariant subspace and restart.
                        for (std::size_t i = 0; i < p.values.size(); ++i) {
                            locked_values.push_back(p.values[i]);
                            locked_vectors.push_back(p.vectors[i]);
                        }
                        break;
                    }
                    for (std::size_t i = 0; i < locked_values.size(); ++i) {
                        p.values.push_back(locked_values[i]);
                        p.vectors.push_back(locked_vectors[i]);
                    }
                    sort_pairs(p);
                    p.values.resize(std::min<std::size_t>(p.values.size(), k));
                    p.vectors.resize(p.values.size());
                    certify_residuals(m, p);
                    const bool certified =
                        static_cast<int>(p.values.size()) == k &&
                        std::all_of(p.residuals.begin(), p.residuals.end(), [&](double r) {
                            return r <= tol * std::max(1e-300, norm_estimate);
                        });
                    if (certified) {
                        p.iterations = total_iterations;
                        return p;
                    }
                    best = p;
                    if (total_iterations == budget)
                        throw ConvergenceError(
                            "lanczos iteration budget exhausted before residual target",
                            best.values.empty() ? 0.0 : best.values[0],
                            best.residuals.empty() ? 1.0 : best.residuals[0]);
                }
            }
            if (breakdown) break;
            beta.push_back(b);
            basis.push_back(w / b);
        }
        if (static_cast<int>(locked_values.size()) >= k) {
            EigenPairs p;
            p.iterations = total_iterations;
            p.values = locked_values;
            p.vectors = locked_vectors;
            sort_pairs(p);
            p.values.resize(k);
            p.vectors.resize(k);
            certify_residuals(m, p);
            return p;
        }
        if (total_iterations >= budget) break;
    }
    throw ConvergenceError("lanczos failed to certify requested eigenpairs",
                           best.values.empty() ? 0.0 : best.values[0],
                           best.residuals.empty() ? 1.0 : best.residuals[0]);
}

}  // namespace

EigenPairs top_eigenpairs(const Eigen::MatrixXd& m, int k, double tol) {
    if (m.rows() != m.cols()) throw ParameterError("matrix must be square");
    if (k < 1) throw ParameterError("need k >= 1 eigenpairs");
    if (k > m.rows()) throw ParameterError("k exceeds matrix dimension");
    if (!(tol > 0.0)) throw ParameterError("eigensolver tolerance must be > 0");
    if (m.rows() <= std::max<Eigen::Index>(128, 4 * k)) return dense_top_k(m, k);
    return lanczos_top_k(m, k, tol);
}

EigenPairs full_spectrum(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols()) throw ParameterError("matrix must be square");
    return dense_top_k(m, static_cast<int>(m.rows()));
}

}  // namespace aniso
