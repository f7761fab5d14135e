#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "specssa/eigen_system.hpp"
#include "specssa/embedding.hpp"
#include "specssa/spectral.hpp"
#include "specssa/time_series.hpp"

namespace specssa {

/// Row k holds F_k[a] * P[a] / K. Columns sum to P.
struct SpectrumDecomposition {
    Eigen::MatrixXd rows;  // K x M
    std::vector<double> power;
    /// max_a |sum_k rows[k][a] - P[a]|
    double additivity_deviation = 0.0;

    std::size_t window() const noexcept { return static_cast<std::size_t>(rows.rows()); }
    std::size_t grid() const noexcept { return static_cast<std::size_t>(rows.cols()); }
    /// sum_a rows[k][a] for every k.
    std::vector<double> component_power() const;
};

/// Throws Error(GridMismatch) if the bank grid differs from power.size().
SpectrumDecomposition decompose_spectrum(const FilterBank& bank, const std::vector<double>& power);

struct IdentityResiduals {
    /// |lambda_k - sum_a F_k[a] P[a]| / max(lambda_1, tiny)
    std::vector<double> residuals;
    /// False unless the embedding was circulant with M = N, where the
    /// identity holds exactly. Otherwise the residuals are informational.
    bool exact = false;

    double max() const noexcept;
};

IdentityResiduals eigenvalue_identity(const EigenSystem& eigen, const FilterBank& bank,
                                      const std::vector<double>& power, EmbeddingMode mode,
                                      std::size_t series_length);

struct PeakParams {
    double prominence = 0.1;
    std::size_t half_width = 2;
};

struct Peak {
    std::string label;
    std::size_t bin = 0;
    /// Half-spectrum bins (all <= M/2), ascending, contains `bin`.
    std::vector<std::size_t> bins;
};

struct PeakSet {
    std::vector<Peak> peaks;
    std::size_t grid = 0;
    PeakParams params;

    std::size_t size() const noexcept { return peaks.size(); }
    /// Half-spectrum neighborhood plus the conjugate bins M - a (a != 0, M/2).
    std::vector<std::size_t> integration_bins(std::size_t i) const;
};

/// Spreadsheet-style labels: A..Z, AA, AB, ...
std::string peak_label(std::size_t index);

/// Strict local maxima in [1, M/2] at or above prominence * max(P).
/// Neighborhoods are +-half_width bins, cut at the midpoint between adjacent
/// peaks (a bin exactly on the midpoint belongs to neither).
/// Throws Error(BadParams) for prominence outside (0, 1] or half_width == 0.
PeakSet detect_peaks(const std::vector<double>& power, const PeakParams& params = {});

struct StrengthTable {
    std::vector<std::string> labels;
    Eigen::MatrixXd absolute;  // peaks x K
    Eigen::MatrixXd relative;  // peaks x K, rows sum to one
    /// True where a peak's total strength is zero and its relative row is all zero.
    std::vector<bool> empty;
    std::size_t window = 0;
};

/// Throws Error(GridMismatch) if the peak set and decomposition grids differ.
StrengthTable peak_strengths(const SpectrumDecomposition& decomposition, const PeakSet& peaks);

struct PairParams {
    double gap = 0.15;
    double similarity = 0.9;
    /// Both members must reach floor * mean eigenvalue (trace / K); 1 is the
    /// Kaiser rule, 0 disables the floor.
    double floor = 1.0;
};

/// Greedy left-to-right pairing of consecutive eigenvalues (k, k+1) with a
/// small relative gap and similar filter rows. Returns zero-based indices.
/// Throws Error(BadParams) unless gap and similarity lie in (0, 1) and the
/// floor is finite and non-negative.
std::vector<std::pair<std::size_t, std::size_t>> detect_pairs(const EigenSystem& eigen,
                                                              const FilterBank& bank,
                                                              const PairParams& params = {});

/// Cosine similarity of two filter rows; zero if either row vanishes.
double filter_similarity(const FilterBank& bank, std::size_t a, std::size_t b);

struct DiagnosticsConfig {
    EmbeddingMode mode = EmbeddingMode::Standard;
    /// Grid override; zero selects the series length.
    std::size_t grid = 0;
    PeakParams peaks;
    PairParams pairs;
};

/// Resolves the spectrum grid for a series: the override if given, else N.
/// Throws Error(GridTooSmall) if the override is below N.
std::size_t resolve_grid(std::size_t series_length, std::size_t override_grid);

/// Everything the diagnostics pipeline produces for a single window.
struct WindowReport {
    std::size_t window = 0;
    EigenSystem eigen;
    FilterBank bank;
    SpectrumDecomposition decomposition;
    IdentityResiduals identity;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    StrengthTable strengths;
};

/// Full pipeline at one window with a caller-supplied peak set.
WindowReport analyze_window(const TimeSeries& series, std::size_t window,
                            const DiagnosticsConfig& config, const PeakSet& peaks);

struct ScanEntry {
    std::size_t window = 0;
    std::optional<WindowReport> report;
    std::string error;
};

struct ScanResult {
    PeakSet peaks;
    std::size_t grid = 0;
    std::vector<ScanEntry> entries;
};

/// Runs analyze_window for every K with one peak set detected from the
/// full-series spectrum. A failing K is recorded and the sweep continues.
ScanResult scan_window(const TimeSeries& series, const std::vector<std::size_t>& windows,
                       const DiagnosticsConfig& config);

} // namespace specssa
