#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "specssa/embedding.hpp"

namespace specssa {

/// Eigenpairs of a lagged covariance, eigenvalues descending.
///
/// Eigenvector k is column k of `vectors`. Each eigenvector is sign-fixed so
/// that its entry of largest magnitude is positive (lowest index wins ties).
/// Round-off negatives are clamped to zero.
struct EigenSystem {
    std::vector<double> values;
    Eigen::MatrixXd vectors;
    double max_residual = 0.0;

    std::size_t size() const noexcept { return values.size(); }
    Eigen::VectorXd vector(std::size_t k) const { return vectors.col(static_cast<Eigen::Index>(k)); }
};

/// Full symmetric eigendecomposition. Throws Error(ConvergenceFailure) if any
/// pair misses the residual bound 1e-9 * max(lambda_1, 1).
EigenSystem eig_sym_descending(const LaggedCovariance& covariance);

/// Same contract on a bare symmetric matrix.
EigenSystem eig_sym_descending(const Eigen::MatrixXd& symmetric);

} // namespace specssa
