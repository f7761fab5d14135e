#pragma once

#include <cstddef>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "specssa/eigen_system.hpp"
#include "specssa/embedding.hpp"
#include "specssa/spectral.hpp"
#include "specssa/time_series.hpp"

namespace specssa {

enum class Provenance { FilterPath, MatrixPath };

std::string_view to_string(Provenance provenance) noexcept;

/// K additive components of a series, component k in row k.
struct ComponentSet {
    Eigen::MatrixXd components;  // K x N
    Provenance provenance = Provenance::MatrixPath;
    EmbeddingMode mode = EmbeddingMode::Standard;

    std::size_t count() const noexcept { return static_cast<std::size_t>(components.rows()); }
    std::size_t length() const noexcept { return static_cast<std::size_t>(components.cols()); }
    std::vector<double> component(std::size_t k) const;

    /// Sample-wise sum over all components.
    std::vector<double> sum() const;
    /// max_n |sum_k component_k[n] - series[n]|
    double reconstruction_error(const TimeSeries& series) const;
};

/// Rank-one piece sqrt(lambda_k) w v^T of the trajectory matrix.
struct ComponentMatrix {
    Eigen::VectorXd left;   // w, unit length when lambda > 0
    Eigen::VectorXd right;  // v
    double singular_value = 0.0;

    Eigen::MatrixXd dense() const { return singular_value * left * right.transpose(); }
};

/// Eigenvalues at or below this fraction of lambda_1 yield zero components.
inline constexpr double kRankDeficiencyFloor = 1e-12;

/// Zero-based component indices, one vector per group.
using Grouping = std::vector<std::vector<std::size_t>>;

/// Parses "1,2;3,4" (one-based, groups separated by ';') into a Grouping.
/// Throws Error(Parse) on malformed text.
Grouping parse_grouping(std::string_view text);

/// Throws Error(IndexOutOfRange) for indices >= count and Error(BadParams)
/// for overlapping groups.
void validate_grouping(const Grouping& grouping, std::size_t count);

/// Anti-diagonal averaging. Standard mode yields L + K - 1 samples; circulant
/// mode yields L samples averaged along wrapped anti-diagonals.
std::vector<double> hankelize(const Eigen::MatrixXd& matrix, EmbeddingMode mode);

ComponentMatrix component_matrix(const TrajectoryMatrix& trajectory,
                                 const EigenSystem& eigen, std::size_t k);

/// Conventional reconstruction: component k = hankelize(X_k).
/// Throws Error(DimensionMismatch) if the eigen system size differs from K.
ComponentSet ssa_components(const TimeSeries& series, const EmbeddingConfig& cfg,
                            const EigenSystem& eigen);

/// Frequency-domain reconstruction: component k = IDFT(F_k * xhat) / K.
/// Throws Error(BadParams) unless the mode is circulant and Error(GridMismatch)
/// unless the bank grid equals N.
ComponentSet filter_components(const TimeSeries& series, const FilterBank& bank,
                               EmbeddingMode mode);

std::vector<std::vector<double>> group_components(const ComponentSet& set,
                                                  const Grouping& grouping);

struct DetrendResult {
    std::vector<double> trend;
    std::vector<double> residual;
};

/// Sequential SSA step: reconstruct `trend_group` at window `trend_window`
/// and subtract it from the series. The default group is the leading
/// component.
DetrendResult sequential_detrend(const TimeSeries& series, std::size_t trend_window,
                                 const std::vector<std::size_t>& trend_group = {0},
                                 EmbeddingMode mode = EmbeddingMode::Standard);

} // namespace specssa
