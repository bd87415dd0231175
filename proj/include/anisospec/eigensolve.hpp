#pragma once

#include <Eigen/Dense>
#include <vector>

namespace aniso {

struct EigenPairs {
    std::vector<double> values;             // descending
    std::vector<Eigen::VectorXd> vectors;   // unit norm, matching order
    std::vector<double> residuals;          // ||Mv - lambda v|| per pair
    int iterations = 0;
};

// k largest (algebraic) eigenpairs of a symmetric matrix. Small problems go
// through Eigen's dense solver; large ones through Lanczos with full
// reorthogonalization and a fixed internal start vector, so results are
// deterministic for fixed inputs. Residuals are computed explicitly from the
// returned pairs, never trusted from the iteration.
//
// Throws ConvergenceError (with the best estimate) if the iteration budget
// is exhausted before k pairs reach residual <= tol * ||M||.
EigenPairs top_eigenpairs(const Eigen::MatrixXd& m, int k, double tol);

// Full spectrum, descending, via Eigen's dense symmetric solver.
EigenPairs full_spectrum(const Eigen::MatrixXd& m);

}  // namespace aniso
