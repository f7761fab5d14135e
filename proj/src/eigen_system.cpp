#include "specssa/eigen_system.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "specssa/error.hpp"

namespace specssa {

namespace {

void fix_sign(Eigen::Ref<Eigen::VectorXd> v) {
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < v.size(); ++i) {
        if (std::abs(v(i)) > std::abs(v(best))) best = i;
    }
    if (v(best) < 0.0) v = -v;
}

} // namespace

EigenSystem eig_sym_descending(const Eigen::MatrixXd& symmetric) {
    const Eigen::Index k = symmetric.rows();
    if (k == 0 || symmetric.cols() != k) {
        throw Error(ErrorCode::DimensionMismatch, "eigendecomposition needs a non-empty square matrix");
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorCode::ConvergenceFailure, "symmetric eigensolver did not converge");
    }

    // Solver output is ascending; reverse into descending order.
    EigenSystem es;
    es.values.resize(static_cast<std::size_t>(k));
    es.vectors.resize(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
        es.values[static_cast<std::size_t>(i)] = solver.eigenvalues()(k - 1 - i);
        es.vectors.col(i) = solver.eigenvectors().col(k - 1 - i);
        fix_sign(es.vectors.col(i));
    }

    const double top = std::max(es.values.front(), 0.0);
    for (double& lambda : es.values) {
        if (lambda < 0.0) lambda = 0.0;
    }

    const double bound = 1e-9 * std::max(top, 1.0);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < k; ++i) {
        const Eigen::VectorXd v = es.vectors.col(i);
        const double r = (symmetric * v - es.values[static_cast<std::size_t>(i)] * v).norm();
        worst = std::max(worst, r);
    }
    es.max_residual = worst;
    if (!(worst <= bound)) {
        std::ostringstream msg;
        msg << "eigenpair residual " << worst << " exceeds bound " << bound;
        throw Error(ErrorCode::ConvergenceFailure, msg.str());
    }
    return es;
}

EigenSystem eig_sym_descending(const LaggedCovariance& covariance) {
    return eig_sym_descending(covariance.entries);
}

} // namespace specssa
