#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "specssa/eigen_system.hpp"
#include "specssa/time_series.hpp"

namespace specssa {

/// Transform conventions used throughout:
///
///   series:  xhat[a] = (1/sqrt(M)) * sum_j exp(+2 pi i a j / M) x[j]
///   filter:  vhat[a] =               sum_j exp(+2 pi i a j / M) v[j]
///
/// Inputs shorter than M are zero-padded. Filter vectors carry no
/// normalization so that |vhat|^2 sums to M for a unit vector.
struct Spectrum {
    std::vector<std::complex<double>> coefficients;

    std::size_t grid() const noexcept { return coefficients.size(); }
    std::complex<double> operator[](std::size_t a) const { return coefficients[a]; }
};

/// Direct O(M * len) evaluation over a cached table of the M roots of unity.
/// Phases are reduced modulo M exactly in integer arithmetic.
class Dft {
public:
    explicit Dft(std::size_t grid);

    std::size_t grid() const noexcept { return grid_; }

    /// Unnormalized forward sum: sum_j exp(+2 pi i a j / M) values[j].
    std::vector<std::complex<double>> forward_raw(std::span<const double> values) const;

    /// Real part of the inverse of the normalized series transform:
    /// x[n] = (1/sqrt(M)) sum_a exp(-2 pi i a n / M) coeffs[a], for n < length.
    /// `max_imag` receives the largest discarded imaginary residue.
    std::vector<double> inverse_real(std::span<const std::complex<double>> coeffs,
                                     std::size_t length, double* max_imag = nullptr) const;

private:
    std::size_t grid_;
    std::vector<std::complex<double>> roots_;
};

/// Throws Error(GridTooSmall) when values.size() > grid.
Spectrum dft(std::span<const double> values, std::size_t grid);

/// F[a] = |vhat[a]|^2 on an M-point grid. Throws Error(GridTooSmall) if M < K.
std::vector<double> filter_transfer(std::span<const double> eigenvector, std::size_t grid);

/// K non-negative transfer functions, one row per eigenvector.
struct FilterBank {
    Eigen::MatrixXd rows;  // K x M
    /// max_k |sum_a F[k][a] / M - 1|
    double normalization_deviation = 0.0;
    /// max_a |sum_k F[k][a] / K - 1|
    double completeness_deviation = 0.0;

    std::size_t window() const noexcept { return static_cast<std::size_t>(rows.rows()); }
    std::size_t grid() const noexcept { return static_cast<std::size_t>(rows.cols()); }
    std::vector<double> row(std::size_t k) const;
};

/// Deviations above this bound indicate a broken eigenbasis.
inline constexpr double kFilterIdentityLimit = 1e-6;

/// Builds the bank and measures both identities. Throws Error(GridTooSmall)
/// if M < K and Error(InvariantViolation) if either deviation exceeds
/// kFilterIdentityLimit.
FilterBank build_filter_bank(const EigenSystem& eigen, std::size_t grid);

/// P[a] = |xhat[a]|^2. Throws Error(GridTooSmall) if N > M.
std::vector<double> power_spectrum(const TimeSeries& series, std::size_t grid);

} // namespace specssa
