#include "specssa/schematic.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "specssa/error.hpp"

namespace specssa {

double GaussianSource::uniform() {
    constexpr double kScale = 1.0 / 9007199254740992.0;  // 2^-53
    return static_cast<double>(engine_() >> 11) * kScale;
}

double GaussianSource::next() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

TimeSeries generate_schematic(const SchematicParams& params) {
    if (params.length < 2) throw Error(ErrorCode::BadParams, "schematic length must be >= 2");
    if (!(params.noise >= 0.0) || !std::isfinite(params.noise)) {
        throw Error(ErrorCode::BadParams, "noise level must be finite and non-negative");
    }
    for (double b : params.periods) {
        if (!(b > 0.0) || !std::isfinite(b)) throw Error(ErrorCode::BadParams, "periods must be positive");
    }

    GaussianSource noise(params.seed);
    std::vector<double> x(params.length);
    for (std::size_t n = 0; n < params.length; ++n) {
        double sum = 0.0;
        for (std::size_t i = 0; i < params.periods.size(); ++i) {
            sum += params.amplitudes[i] *
                   std::sin(2.0 * std::numbers::pi * static_cast<double>(n) / params.periods[i]);
        }
        // Draw unconditionally so the noise sequence does not depend on sigma.
        const double g = noise.next();
        x[n] = sum + params.noise * g;
    }
    return TimeSeries(std::move(x));
}

} // namespace specssa
