#include "specssa/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "specssa/error.hpp"

namespace specssa {

namespace {

void require_grid(std::size_t length, std::size_t grid) {
    if (grid == 0 || grid < length) {
        throw Error(ErrorCode::GridTooSmall, "grid " + std::to_string(grid) +
                                                 " smaller than input length " +
                                                 std::to_string(length));
    }
}

} // namespace

Dft::Dft(std::size_t grid) : grid_(grid), roots_(grid) {
    require_grid(1, grid);
    const double step = 2.0 * std::numbers::pi / static_cast<double>(grid);
    for (std::size_t m = 0; m < grid; ++m) {
        const double phase = step * static_cast<double>(m);
        roots_[m] = {std::cos(phase), std::sin(phase)};
    }
}

std::vector<std::complex<double>> Dft::forward_raw(std::span<const double> values) const {
    require_grid(values.size(), grid_);
    std::vector<std::complex<double>> out(grid_);
    for (std::size_t a = 0; a < grid_; ++a) {
        std::complex<double> sum{0.0, 0.0};
        std::size_t phase = 0;  // (a * j) mod M
        for (double x : values) {
            sum += roots_[phase] * x;
            phase += a;
            if (phase >= grid_) phase -= grid_;
        }
        out[a] = sum;
    }
    return out;
}

std::vector<double> Dft::inverse_real(std::span<const std::complex<double>> coeffs,
                                      std::size_t length, double* max_imag) const {
    if (coeffs.size() != grid_) {
        throw Error(ErrorCode::GridMismatch, "coefficient count differs from grid");
    }
    require_grid(length, grid_);
    const double scale = 1.0 / std::sqrt(static_cast<double>(grid_));
    std::vector<double> out(length);
    double worst = 0.0;
    for (std::size_t n = 0; n < length; ++n) {
        std::complex<double> sum{0.0, 0.0};
        std::size_t phase = 0;  // (a * n) mod M
        for (std::size_t a = 0; a < grid_; ++a) {
            sum += std::conj(roots_[phase]) * coeffs[a];
            phase += n;
            if (phase >= grid_) phase -= grid_;
        }
        out[n] = sum.real() * scale;
        worst = std::max(worst, std::abs(sum.imag()) * scale);
    }
    if (max_imag) *max_imag = worst;
    return out;
}

Spectrum dft(std::span<const double> values, std::size_t grid) {
    require_grid(values.size(), grid);
    Spectrum s;
    s.coefficients = Dft(grid).forward_raw(values);
    const double scale = 1.0 / std::sqrt(static_cast<double>(grid));
    for (auto& c : s.coefficients) c *= scale;
    return s;
}

std::vector<double> filter_transfer(std::span<const double> eigenvector, std::size_t grid) {
    require_grid(eigenvector.size(), grid);
    const auto vhat = Dft(grid).forward_raw(eigenvector);
    std::vector<double> f(grid);
    std::transform(vhat.begin(), vhat.end(), f.begin(),
                   [](std::complex<double> c) { return std::norm(c); });
    return f;
}

std::vector<double> FilterBank::row(std::size_t k) const {
    const auto r = rows.row(static_cast<Eigen::Index>(k));
    return {r.begin(), r.end()};
}

FilterBank build_filter_bank(const EigenSystem& eigen, std::size_t grid) {
    const std::size_t k = eigen.size();
    require_grid(k, grid);
    const Dft transform(grid);

    FilterBank bank;
    bank.rows.resize(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(grid));
    std::vector<double> v(k);
    for (std::size_t r = 0; r < k; ++r) {
        for (std::size_t j = 0; j < k; ++j) {
            v[j] = eigen.vectors(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(r));
        }
        const auto vhat = transform.forward_raw(v);
        for (std::size_t a = 0; a < grid; ++a) {
            bank.rows(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(a)) = std::norm(vhat[a]);
        }
    }

    const double m = static_cast<double>(grid);
    const double kd = static_cast<double>(k);
    for (Eigen::Index r = 0; r < bank.rows.rows(); ++r) {
        bank.normalization_deviation =
            std::max(bank.normalization_deviation, std::abs(bank.rows.row(r).sum() / m - 1.0));
    }
    for (Eigen::Index a = 0; a < bank.rows.cols(); ++a) {
        bank.completeness_deviation =
            std::max(bank.completeness_deviation, std::abs(bank.rows.col(a).sum() / kd - 1.0));
    }
    if (!(bank.normalization_deviation <= kFilterIdentityLimit) ||
        !(bank.completeness_deviation <= kFilterIdentityLimit)) {
        throw Error(ErrorCode::InvariantViolation,
                    "filter bank identities broken: normalization deviation " +
                        std::to_string(bank.normalization_deviation) + ", completeness deviation " +
                        std::to_string(bank.completeness_deviation));
    }
    return bank;
}

std::vector<double> power_spectrum(const TimeSeries& series, std::size_t grid) {
    const Spectrum s = dft(series.values(), grid);
    std::vector<double> p(grid);
    std::transform(s.coefficients.begin(), s.coefficients.end(), p.begin(),
                   [](std::complex<double> c) { return std::norm(c); });
    return p;
}

} // namespace specssa
