#pragma once

#include <cstddef>
#include <string_view>

#include <Eigen/Dense>

#include "specssa/time_series.hpp"

namespace specssa {

enum class EmbeddingMode {
    /// Conventional Hankel trajectory matrix, L = N - K + 1, K <= N/2.
    Standard,
    /// Periodic boundary: rows wrap around the end of the series, L = N.
    Circulant,
};

std::string_view to_string(EmbeddingMode mode) noexcept;
EmbeddingMode parse_mode(std::string_view text);

struct EmbeddingConfig {
    std::size_t window = 0;
    EmbeddingMode mode = EmbeddingMode::Standard;

    /// Throws Error(WindowOutOfRange) if the window is not admissible for a
    /// series of the given length.
    void validate(std::size_t length) const;

    /// Row count of the trajectory matrix for a series of the given length.
    std::size_t rows(std::size_t length) const noexcept;
};

struct TrajectoryMatrix {
    Eigen::MatrixXd entries;  // L x K
    EmbeddingMode mode = EmbeddingMode::Standard;

    std::size_t rows() const noexcept { return static_cast<std::size_t>(entries.rows()); }
    std::size_t window() const noexcept { return static_cast<std::size_t>(entries.cols()); }
};

/// K x K Gram matrix of the trajectory matrix, symmetric by construction.
struct LaggedCovariance {
    Eigen::MatrixXd entries;

    std::size_t window() const noexcept { return static_cast<std::size_t>(entries.rows()); }
};

TrajectoryMatrix build_trajectory(const TimeSeries& series, const EmbeddingConfig& cfg);

/// C = X^T X. Each entry sums over rows in ascending order; only the upper
/// triangle is computed and then mirrored.
LaggedCovariance lagged_covariance(const TrajectoryMatrix& trajectory);

} // namespace specssa
