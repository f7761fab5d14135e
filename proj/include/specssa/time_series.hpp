#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace specssa {

/// Real-valued sampled sequence with at least two finite samples.
class TimeSeries {
public:
    /// Throws Error(EmptySeries) for fewer than two samples and
    /// Error(BadParams) if any sample is NaN or infinite.
    explicit TimeSeries(std::vector<double> values);

    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t n) const { return values_[n]; }
    std::span<const double> values() const noexcept { return values_; }
    const std::vector<double>& vector() const noexcept { return values_; }

    /// Largest absolute sample; zero for an all-zero series.
    double max_abs() const noexcept;

private:
    std::vector<double> values_;
};

} // namespace specssa
