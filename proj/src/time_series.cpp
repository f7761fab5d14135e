#include "specssa/time_series.hpp"

#include <cmath>
#include <string>

#include "specssa/error.hpp"

namespace specssa {

TimeSeries::TimeSeries(std::vector<double> values) : values_(std::move(values)) {
    if (values_.size() < 2) {
        throw Error(ErrorCode::EmptySeries,
                    "series needs at least 2 samples, got " + std::to_string(values_.size()));
    }
    for (std::size_t n = 0; n < values_.size(); ++n) {
        if (!std::isfinite(values_[n])) {
            throw Error(ErrorCode::BadParams, "non-finite sample at index " + std::to_string(n));
        }
    }
}

double TimeSeries::max_abs() const noexcept {
    double m = 0.0;
    for (double x : values_) m = std::max(m, std::abs(x));
    return m;
}

} // namespace specssa
