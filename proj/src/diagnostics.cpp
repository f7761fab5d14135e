#include "specssa/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "specssa/error.hpp"

namespace specssa {

std::vector<double> SpectrumDecomposition::component_power() const {
    const Eigen::VectorXd s = rows.rowwise().sum();
    return {s.begin(), s.end()};
}

SpectrumDecomposition decompose_spectrum(const FilterBank& bank, const std::vector<double>& power) {
    if (bank.grid() != power.size()) {
        throw Error(ErrorCode::GridMismatch, "filter grid " + std::to_string(bank.grid()) +
                                                 " differs from spectrum grid " +
                                                 std::to_string(power.size()));
    }
    const Eigen::Index k = bank.rows.rows();
    const Eigen::Index m = bank.rows.cols();
    SpectrumDecomposition sd;
    sd.power = power;
    sd.rows.resize(k, m);
    for (Eigen::Index a = 0; a < m; ++a) {
        const double p = power[static_cast<std::size_t>(a)];
        double column = 0.0;
        for (Eigen::Index r = 0; r < k; ++r) {
            sd.rows(r, a) = bank.rows(r, a) * p / static_cast<double>(k);
            column += sd.rows(r, a);
        }
        sd.additivity_deviation = std::max(sd.additivity_deviation, std::abs(column - p));
    }
    return sd;
}

double IdentityResiduals::max() const noexcept {
    double worst = 0.0;
    for (double r : residuals) worst = std::max(worst, r);
    return worst;
}

IdentityResiduals eigenvalue_identity(const EigenSystem& eigen, const FilterBank& bank,
                                      const std::vector<double>& power, EmbeddingMode mode,
                                      std::size_t series_length) {
    if (bank.grid() != power.size() || bank.window() != eigen.size()) {
        throw Error(ErrorCode::GridMismatch, "eigen system, filter bank and spectrum disagree in size");
    }
    IdentityResiduals out;
    out.exact = mode == EmbeddingMode::Circulant && bank.grid() == series_length;
    const double scale = std::max(eigen.values.front(), std::numeric_limits<double>::min());
    const Eigen::Map<const Eigen::VectorXd> p(power.data(), static_cast<Eigen::Index>(power.size()));
    out.residuals.resize(eigen.size());
    for (std::size_t k = 0; k < eigen.size(); ++k) {
        const double spectral = bank.rows.row(static_cast<Eigen::Index>(k)).dot(p);
        out.residuals[k] = std::abs(eigen.values[k] - spectral) / scale;
    }
    return out;
}

std::vector<std::size_t> PeakSet::integration_bins(std::size_t i) const {
    std::vector<std::size_t> bins = peaks.at(i).bins;
    const std::size_t half = bins.size();
    for (std::size_t b = 0; b < half; ++b) {
        const std::size_t a = bins[b];
        if (a != 0 && 2 * a != grid) bins.push_back(grid - a);
    }
    std::sort(bins.begin(), bins.end());
    return bins;
}

std::string peak_label(std::size_t index) {
    std::string label;
    std::size_t n = index + 1;
    while (n > 0) {
        label.insert(label.begin(), static_cast<char>('A' + (n - 1) % 26));
        n = (n - 1) / 26;
    }
    return label;
}

PeakSet detect_peaks(const std::vector<double>& power, const PeakParams& params) {
    if (!(params.prominence > 0.0 && params.prominence <= 1.0) || params.half_width == 0) {
        throw Error(ErrorCode::BadParams, "peak prominence must lie in (0, 1] and half-width >= 1");
    }
    for (double p : power) {
        if (!(p >= 0.0)) throw Error(ErrorCode::BadParams, "power spectrum must be non-negative");
    }

    PeakSet set;
    set.grid = power.size();
    set.params = params;
    const std::size_t m = power.size();
    if (m < 2) return set;

    const double top = *std::max_element(power.begin(), power.end());
    if (top <= 0.0) return set;
    const double threshold = params.prominence * top;
    const std::size_t half = m / 2;

    std::vector<std::size_t> maxima;
    for (std::size_t a = 1; a <= half; ++a) {
        const double p = power[a];
        if (p > power[a - 1] && p > power[(a + 1) % m] && p >= threshold) maxima.push_back(a);
    }

    const std::size_t w = params.half_width;
    for (std::size_t i = 0; i < maxima.size(); ++i) {
        const std::size_t centre = maxima[i];
        Peak peak;
        peak.label = peak_label(i);
        peak.bin = centre;
        const std::size_t lo = centre > w ? centre - w : 0;
        const std::size_t hi = std::min(half, centre + w);
        for (std::size_t a = lo; a <= hi; ++a) {
            if (i > 0 && 2 * a <= maxima[i - 1] + centre) continue;
            if (i + 1 < maxima.size() && 2 * a >= centre + maxima[i + 1]) continue;
            peak.bins.push_back(a);
        }
        set.peaks.push_back(std::move(peak));
    }
    return set;
}

StrengthTable peak_strengths(const SpectrumDecomposition& decomposition, const PeakSet& peaks) {
    if (peaks.grid != decomposition.grid()) {
        throw Error(ErrorCode::GridMismatch, "peak grid " + std::to_string(peaks.grid) +
                                                 " differs from decomposition grid " +
                                                 std::to_string(decomposition.grid()));
    }
    const Eigen::Index k = decomposition.rows.rows();
    const Eigen::Index count = static_cast<Eigen::Index>(peaks.size());
    StrengthTable table;
    table.window = static_cast<std::size_t>(k);
    table.absolute = Eigen::MatrixXd::Zero(count, k);
    table.relative = Eigen::MatrixXd::Zero(count, k);
    table.empty.assign(peaks.size(), false);
    for (Eigen::Index i = 0; i < count; ++i) {
        table.labels.push_back(peaks.peaks[static_cast<std::size_t>(i)].label);
        for (std::size_t a : peaks.integration_bins(static_cast<std::size_t>(i))) {
            table.absolute.row(i) += decomposition.rows.col(static_cast<Eigen::Index>(a)).transpose();
        }
        const double total = table.absolute.row(i).sum();
        if (total > 0.0) {
            table.relative.row(i) = table.absolute.row(i) / total;
        } else {
            table.empty[static_cast<std::size_t>(i)] = true;
        }
    }
    return table;
}

double filter_similarity(const FilterBank& bank, std::size_t a, std::size_t b) {
    const auto ra = bank.rows.row(static_cast<Eigen::Index>(a));
    const auto rb = bank.rows.row(static_cast<Eigen::Index>(b));
    const double na = ra.norm();
    const double nb = rb.norm();
    if (na == 0.0 || nb == 0.0) return 0.0;
    return ra.dot(rb) / (na * nb);
}

std::vector<std::pair<std::size_t, std::size_t>> detect_pairs(const EigenSystem& eigen,
                                                              const FilterBank& bank,
                                                              const PairParams& params) {
    if (!(params.gap > 0.0 && params.gap < 1.0) ||
        !(params.similarity > 0.0 && params.similarity < 1.0)) {
        throw Error(ErrorCode::BadParams, "pair thresholds must lie in (0, 1)");
    }
    if (!(params.floor >= 0.0) || !std::isfinite(params.floor)) {
        throw Error(ErrorCode::BadParams, "pair floor must be finite and non-negative");
    }
    if (bank.window() != eigen.size()) {
        throw Error(ErrorCode::DimensionMismatch, "filter bank and eigen system disagree in size");
    }
    double trace = 0.0;
    for (double lambda : eigen.values) trace += lambda;
    const double floor = params.floor * trace / static_cast<double>(eigen.size());

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::size_t k = 0;
    while (k + 1 < eigen.size()) {
        const double lead = eigen.values[k];
        const double next = eigen.values[k + 1];
        const bool close = lead > 0.0 && next >= floor && (lead - next) / lead <= params.gap;
        if (close && filter_similarity(bank, k, k + 1) >= params.similarity) {
            pairs.emplace_back(k, k + 1);
            k += 2;
        } else {
            ++k;
        }
    }
    return pairs;
}

std::size_t resolve_grid(std::size_t series_length, std::size_t override_grid) {
    if (override_grid == 0) return series_length;
    if (override_grid < series_length) {
        throw Error(ErrorCode::GridTooSmall, "grid " + std::to_string(override_grid) +
                                                 " smaller than series length " +
                                                 std::to_string(series_length));
    }
    return override_grid;
}

WindowReport analyze_window(const TimeSeries& series, std::size_t window,
                            const DiagnosticsConfig& config, const PeakSet& peaks) {
    const EmbeddingConfig cfg{window, config.mode};
    const std::size_t grid = resolve_grid(series.size(), config.grid);
    const auto power = power_spectrum(series, grid);

    WindowReport report;
    report.window = window;
    report.eigen = eig_sym_descending(lagged_covariance(build_trajectory(series, cfg)));
    report.bank = build_filter_bank(report.eigen, grid);
    report.decomposition = decompose_spectrum(report.bank, power);
    report.identity = eigenvalue_identity(report.eigen, report.bank, power, config.mode, series.size());
    report.pairs = detect_pairs(report.eigen, report.bank, config.pairs);
    report.strengths = peak_strengths(report.decomposition, peaks);
    return report;
}

ScanResult scan_window(const TimeSeries& series, const std::vector<std::size_t>& windows,
                       const DiagnosticsConfig& config) {
    if (windows.empty()) throw Error(ErrorCode::BadParams, "window list is empty");
    ScanResult result;
    result.grid = resolve_grid(series.size(), config.grid);
    result.peaks = detect_peaks(power_spectrum(series, result.grid), config.peaks);
    for (std::size_t window : windows) {
        ScanEntry entry;
        entry.window = window;
        try {
            entry.report = analyze_window(series, window, config, result.peaks);
        } catch (const Error& e) {
            entry.error = std::string(to_string(e.code())) + ": " + e.what();
        }
        result.entries.push_back(std::move(entry));
    }
    return result;
}

} // namespace specssa
