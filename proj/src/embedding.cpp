#include "specssa/embedding.hpp"

#include <string>

#include "specssa/error.hpp"

namespace specssa {

std::string_view to_string(EmbeddingMode mode) noexcept {
    return mode == EmbeddingMode::Circulant ? "circulant" : "standard";
}

EmbeddingMode parse_mode(std::string_view text) {
    if (text == "standard") return EmbeddingMode::Standard;
    if (text == "circulant") return EmbeddingMode::Circulant;
    throw Error(ErrorCode::BadParams, "unknown embedding mode '" + std::string(text) + "'");
}

void EmbeddingConfig::validate(std::size_t length) const {
    if (length < 2) {
        throw Error(ErrorCode::EmptySeries, "series needs at least 2 samples");
    }
    const std::size_t upper = mode == EmbeddingMode::Standard ? length / 2 : length;
    if (window < 2 || window > upper) {
        throw Error(ErrorCode::WindowOutOfRange,
                    "window " + std::to_string(window) + " outside [2, " + std::to_string(upper) +
                        "] for " + std::string(to_string(mode)) + " embedding of length " +
                        std::to_string(length));
    }
}

std::size_t EmbeddingConfig::rows(std::size_t length) const noexcept {
    return mode == EmbeddingMode::Standard ? length - window + 1 : length;
}

TrajectoryMatrix build_trajectory(const TimeSeries& series, const EmbeddingConfig& cfg) {
    const std::size_t n = series.size();
    cfg.validate(n);
    const std::size_t rows = cfg.rows(n);
    const std::size_t cols = cfg.window;

    TrajectoryMatrix out;
    out.mode = cfg.mode;
    out.entries.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            // Standard rows never reach past N-1, so the modulo only bites
            // in circulant mode.
            out.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                series[(i + j) % n];
        }
    }
    return out;
}

LaggedCovariance lagged_covariance(const TrajectoryMatrix& trajectory) {
    const Eigen::MatrixXd& x = trajectory.entries;
    const Eigen::Index k = x.cols();
    LaggedCovariance c;
    c.entries.resize(k, k);
    for (Eigen::Index a = 0; a < k; ++a) {
        for (Eigen::Index b = a; b < k; ++b) {
            double sum = 0.0;
            for (Eigen::Index i = 0; i < x.rows(); ++i) sum += x(i, a) * x(i, b);
            c.entries(a, b) = sum;
            c.entries(b, a) = sum;
        }
    }
    return c;
}

} // namespace specssa
