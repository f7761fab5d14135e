#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <random>

#include "specssa/time_series.hpp"

namespace specssa {

/// Standard normal deviates from a pinned 64-bit Mersenne Twister and the
/// polar-free Box-Muller transform:
///
///   u1 = 1 - (next() >> 11) * 2^-53      in (0, 1]
///   u2 =     (next() >> 11) * 2^-53      in [0, 1)
///   r  = sqrt(-2 ln u1)
///   z0 = r cos(2 pi u2),  z1 = r sin(2 pi u2)
///
/// z0 is returned first, z1 on the following call. std::mt19937_64 output is
/// fixed by the standard, so a seed reproduces the same deviates on every
/// conforming toolchain (up to libm rounding of log/cos/sin).
class GaussianSource {
public:
    explicit GaussianSource(std::uint64_t seed) : engine_(seed) {}

    double next();

private:
    double uniform();

    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// x[n] = sum_i amplitude[i] sin(2 pi n / period[i]) + noise * g[n].
struct SchematicParams {
    std::array<double, 4> amplitudes{1.44, 1.04, 1.04, 0.8};
    std::array<double, 4> periods{29.9, 9.7, 8.9, 4.9};
    std::size_t length = 300;
    double noise = 1.0;
    std::uint64_t seed = 20150101;
};

/// Throws Error(BadParams) for non-positive periods, negative noise or
/// length < 2.
TimeSeries generate_schematic(const SchematicParams& params);

} // namespace specssa
