#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "specssa/diagnostics.hpp"
#include "specssa/error.hpp"
#include "specssa/schematic.hpp"

using namespace specssa;

namespace {

FilterBank allpass_bank(std::size_t grid) {
    EigenSystem es;
    es.values = {1.0};
    es.vectors = Eigen::MatrixXd::Ones(1, 1);
    return build_filter_bank(es, grid);
}

struct Run {
    EigenSystem eigen;
    FilterBank bank;
    std::vector<double> power;
};

Run run(const TimeSeries& s, std::size_t k, EmbeddingMode mode) {
    Run r;
    r.eigen = eig_sym_descending(lagged_covariance(build_trajectory(s, {k, mode})));
    r.bank = build_filter_bank(r.eigen, s.size());
    r.power = power_spectrum(s, s.size());
    return r;
}

// Indices of the two largest entries of a row, ascending.
std::pair<std::size_t, std::size_t> top_two(const Eigen::RowVectorXd& row) {
    std::vector<std::size_t> idx(static_cast<std::size_t>(row.size()));
    std::iota(idx.begin(), idx.end(), 0);
    std::partial_sort(idx.begin(), idx.begin() + 2, idx.end(),
                      [&](std::size_t a, std::size_t b) { return row(a) > row(b); });
    return {std::min(idx[0], idx[1]), std::max(idx[0], idx[1])};
}

} // namespace

TEST_CASE("spectrum decomposition with an all-pass bank is the spectrum") {
    const std::vector<double> p{4, 1, 0.5, 1};
    const auto sd = decompose_spectrum(allpass_bank(4), p);
    for (std::size_t a = 0; a < 4; ++a) CHECK(sd.rows(0, a) == doctest::Approx(p[a]));
    CHECK(sd.additivity_deviation <= 1e-15);

    const auto zero = decompose_spectrum(allpass_bank(4), std::vector<double>(4, 0.0));
    CHECK(zero.rows.isZero());
    CHECK_THROWS_AS(decompose_spectrum(allpass_bank(4), std::vector<double>(5, 1.0)), Error);
}

TEST_CASE("spectrum decomposition is additive and sums to the signal energy") {
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 20; ++trial) {
        const bool circ = trial % 2 == 0;
        const std::size_t n = 16 + rng() % 80;
        const std::size_t k = 2 + rng() % (n / 2 - 1);
        const auto x = oracle::random_series(rng, n, 5.0);
        const TimeSeries s(x);
        const auto r = run(s, k, circ ? EmbeddingMode::Circulant : EmbeddingMode::Standard);
        const auto sd = decompose_spectrum(r.bank, r.power);
        const double top = *std::max_element(r.power.begin(), r.power.end());
        for (Eigen::Index a = 0; a < sd.rows.cols(); ++a)
            CHECK(std::abs(sd.rows.col(a).sum() - r.power[a]) <= 1e-9 * top);
        double energy = 0.0;
        for (double v : x) energy += v * v;
        const auto per_k = sd.component_power();
        CHECK(std::abs(std::accumulate(per_k.begin(), per_k.end(), 0.0) - energy) <= 1e-9 * energy);
    }
}

TEST_CASE("noiseless schematic: filters 3-6 carry the close B/C tones at K = 80") {
    SchematicParams p;
    p.noise = 0.0;
    const auto s = generate_schematic(p);
    const auto peaks = detect_peaks(power_spectrum(s, 300));
    REQUIRE(peaks.size() == 4);
    for (auto mode : {EmbeddingMode::Standard, EmbeddingMode::Circulant}) {
        const auto r = run(s, 80, mode);
        const auto sd = decompose_spectrum(r.bank, r.power);
        double total = 0.0, carried = 0.0;
        for (std::size_t i : {1, 2}) {
            for (std::size_t a : peaks.integration_bins(i)) {
                total += r.power[a];
                for (Eigen::Index k = 2; k < 6; ++k) carried += sd.rows(k, a);
            }
        }
        CHECK(carried / total >= 0.9);
    }
}

TEST_CASE("eigenvalue identity") {
    const TimeSeries zero(std::vector<double>(10, 0.0));
    const auto z = run(zero, 3, EmbeddingMode::Circulant);
    const auto zr = eigenvalue_identity(z.eigen, z.bank, z.power, EmbeddingMode::Circulant, 10);
    CHECK(zr.max() == 0.0);
    CHECK(zr.exact);

    std::mt19937_64 rng(103);
    const auto x = oracle::random_series(rng, 24);
    const TimeSeries s(x);
    const auto r = run(s, 6, EmbeddingMode::Circulant);
    const auto res = eigenvalue_identity(r.eigen, r.bank, r.power, EmbeddingMode::Circulant, 24);
    CHECK(res.exact);
    CHECK(res.max() <= 1e-9);

    // Independent route: long-double transforms of eigenvectors and series.
    const auto p = oracle::naive_power(x, 24);
    for (std::size_t k = 0; k < 6; ++k) {
        const Eigen::VectorXd v = r.eigen.vector(k);
        const auto vhat = oracle::naive_dft(std::vector<double>(v.begin(), v.end()), 24, false);
        double spectral = 0.0;
        for (std::size_t a = 0; a < 24; ++a) spectral += std::norm(vhat[a]) * p[a];
        CHECK(std::abs(spectral - r.eigen.values[k]) <= 1e-9 * r.eigen.values[0]);
    }

    const auto std_run = run(s, 6, EmbeddingMode::Standard);
    const auto approx = eigenvalue_identity(std_run.eigen, std_run.bank, std_run.power, EmbeddingMode::Standard, 24);
    CHECK_FALSE(approx.exact);
    CHECK(approx.residuals.size() == 6);
}

TEST_CASE("peak labels") {
    CHECK(peak_label(0) == "A");
    CHECK(peak_label(25) == "Z");
    CHECK(peak_label(26) == "AA");
    CHECK(peak_label(27) == "AB");
}

TEST_CASE("peak detection basics") {
    CHECK(detect_peaks(std::vector<double>(16, 2.0)).size() == 0);
    CHECK(detect_peaks(std::vector<double>(16, 0.0)).size() == 0);

    std::vector<double> tone(32);
    for (std::size_t n = 0; n < 32; ++n) tone[n] = std::sin(2.0 * std::numbers::pi * n / 8.0);
    const auto peaks = detect_peaks(power_spectrum(TimeSeries(tone), 32));
    REQUIRE(peaks.size() == 1);
    CHECK(peaks.peaks[0].bin == 4);
    CHECK(peaks.peaks[0].label == "A");
    CHECK(peaks.peaks[0].bins == std::vector<std::size_t>{2, 3, 4, 5, 6});
    CHECK(peaks.integration_bins(0) == std::vector<std::size_t>{2, 3, 4, 5, 6, 26, 27, 28, 29, 30});

    CHECK_THROWS_AS(detect_peaks(tone, {0.0, 2}), Error);
    CHECK_THROWS_AS(detect_peaks(tone, {1.5, 2}), Error);
    CHECK_THROWS_AS(detect_peaks(tone, {0.5, 0}), Error);
    CHECK_THROWS_AS(detect_peaks({1.0, -1.0, 0.5}, {0.5, 1}), Error);
}

TEST_CASE("noiseless schematic spectrum has four peaks at the tone bins") {
    SchematicParams p;
    p.noise = 0.0;
    const auto s = generate_schematic(p);
    const auto peaks = detect_peaks(power_spectrum(s, 300));
    // Oracle: bins nearest 300 / period that are strict local maxima of the
    // long-double spectrum.
    const auto ref = oracle::naive_power(s.vector(), 300);
    std::vector<std::size_t> expected;
    for (double b : p.periods) {
        const auto bin = static_cast<std::size_t>(std::lround(300.0 / b));
        CHECK(ref[bin] > ref[bin - 1]);
        CHECK(ref[bin] > ref[bin + 1]);
        expected.push_back(bin);
    }
    CHECK(expected == std::vector<std::size_t>{10, 31, 34, 61});
    REQUIRE(peaks.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(peaks.peaks[i].bin == expected[i]);
        CHECK(peaks.peaks[i].label == peak_label(i));
    }
    // B and C are three bins apart: the shared bins are split at the midpoint.
    CHECK(peaks.peaks[1].bins == std::vector<std::size_t>{29, 30, 31, 32});
    CHECK(peaks.peaks[2].bins == std::vector<std::size_t>{33, 34, 35, 36});
}

TEST_CASE("peak neighborhoods are disjoint, centred and scale invariant") {
    std::mt19937_64 rng(107);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t m = 8 + rng() % 120;
        std::vector<double> p(m);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (auto& v : p) v = u(rng);
        const PeakParams params{0.05 + 0.5 * u(rng), 1 + rng() % 5};
        const auto peaks = detect_peaks(p, params);
        std::vector<std::size_t> seen;
        for (const auto& pk : peaks.peaks) {
            CHECK(std::find(pk.bins.begin(), pk.bins.end(), pk.bin) != pk.bins.end());
            for (std::size_t a : pk.bins) {
                CHECK(a <= m / 2);
                CHECK(std::find(seen.begin(), seen.end(), a) == seen.end());
                seen.push_back(a);
            }
        }
        std::vector<double> scaled(p);
        for (auto& v : scaled) v *= 1e6;
        const auto again = detect_peaks(scaled, params);
        REQUIRE(again.size() == peaks.size());
        for (std::size_t i = 0; i < peaks.size(); ++i) CHECK(again.peaks[i].bins == peaks.peaks[i].bins);
    }
}

TEST_CASE("strength tables") {
    std::vector<double> tone(32);
    for (std::size_t n = 0; n < 32; ++n) tone[n] = std::sin(2.0 * std::numbers::pi * n / 8.0);
    const auto p = power_spectrum(TimeSeries(tone), 32);
    const auto peaks = detect_peaks(p);
    const auto single = peak_strengths(decompose_spectrum(allpass_bank(32), p), peaks);
    CHECK(single.relative(0, 0) == doctest::Approx(1.0));
    CHECK(single.absolute(0, 0) == doctest::Approx(16.0));

    // A peak set built on a spectrum the decomposition never saw has zero strength.
    auto empty_peaks = peaks;
    const auto zero = peak_strengths(decompose_spectrum(allpass_bank(32), std::vector<double>(32, 0.0)), empty_peaks);
    CHECK(zero.empty[0]);
    CHECK(zero.relative.isZero());

    auto wrong = peaks;
    wrong.grid = 30;
    CHECK_THROWS_AS(peak_strengths(decompose_spectrum(allpass_bank(32), p), wrong), Error);

    std::mt19937_64 rng(109);
    for (int trial = 0; trial < 10; ++trial) {
        const auto x = oracle::random_series(rng, 64);
        std::vector<double> scaled(x);
        for (auto& v : scaled) v *= 37.5;
        const auto r1 = run(TimeSeries(x), 10, EmbeddingMode::Circulant);
        const auto r2 = run(TimeSeries(scaled), 10, EmbeddingMode::Circulant);
        const auto pk = detect_peaks(r1.power, {0.3, 2});
        const auto t1 = peak_strengths(decompose_spectrum(r1.bank, r1.power), pk);
        const auto t2 = peak_strengths(decompose_spectrum(r2.bank, r2.power), pk);
        for (Eigen::Index i = 0; i < t1.relative.rows(); ++i) {
            CHECK(t1.relative.row(i).sum() == doctest::Approx(1.0).epsilon(1e-9));
            CHECK((t1.absolute.row(i).array() >= 0.0).all());
        }
        CHECK((t1.relative - t2.relative).cwiseAbs().maxCoeff() <= 1e-9);
    }
}

TEST_CASE("seeded schematic at K = 120: paired filters dominate the isolated peaks") {
    const auto s = generate_schematic({});
    const auto r = run(s, 120, EmbeddingMode::Circulant);
    const auto peaks = detect_peaks(r.power);
    REQUIRE(peaks.size() == 4);
    const auto t = peak_strengths(decompose_spectrum(r.bank, r.power), peaks);
    CHECK(top_two(t.relative.row(0)) == std::pair<std::size_t, std::size_t>{0, 1});
    CHECK(top_two(t.relative.row(3)) == std::pair<std::size_t, std::size_t>{6, 7});
}

TEST_CASE("pair detection") {
    // Exactly degenerate pair with identical filters.
    EigenSystem es;
    es.values = {2.0, 2.0, 0.1};
    es.vectors = Eigen::MatrixXd::Identity(3, 3);
    const auto bank = build_filter_bank(es, 6);
    CHECK(filter_similarity(bank, 0, 1) == doctest::Approx(1.0));
    const auto pairs = detect_pairs(es, bank);
    REQUIRE(pairs.size() == 1);
    CHECK(pairs[0] == std::pair<std::size_t, std::size_t>{0, 1});

    CHECK_THROWS_AS(detect_pairs(es, bank, {0.0, 0.9}), Error);
    CHECK_THROWS_AS(detect_pairs(es, bank, {0.1, 1.0}), Error);
    CHECK_THROWS_AS(detect_pairs(es, bank, {0.1, 0.9, -1.0}), Error);

    std::vector<double> x(160);
    for (std::size_t n = 0; n < 160; ++n)
        x[n] = std::sin(2.0 * std::numbers::pi * n / 16.0) + 0.5 * std::sin(2.0 * std::numbers::pi * n / 5.0);
    const auto two = run(TimeSeries(x), 40, EmbeddingMode::Circulant);
    const auto found = detect_pairs(two.eigen, two.bank);
    REQUIRE(found.size() == 2);
    CHECK(found[0] == std::pair<std::size_t, std::size_t>{0, 1});
    CHECK(found[1] == std::pair<std::size_t, std::size_t>{2, 3});

    GaussianSource g(7);
    std::vector<double> w(200);
    for (auto& v : w) v = g.next();
    const auto noise = run(TimeSeries(w), 40, EmbeddingMode::Circulant);
    CHECK_NOTHROW(detect_pairs(noise.eigen, noise.bank));
}

TEST_CASE("grid resolution") {
    CHECK(resolve_grid(100, 0) == 100);
    CHECK(resolve_grid(100, 256) == 256);
    CHECK_THROWS_AS(resolve_grid(100, 50), Error);
}

TEST_CASE("window scan shares one peak set and survives bad windows") {
    const auto s = generate_schematic({});
    DiagnosticsConfig config;
    const auto scan = scan_window(s, {40, 80, 200, 120}, config);
    CHECK(scan.grid == 300);
    CHECK(scan.peaks.size() == 4);
    REQUIRE(scan.entries.size() == 4);
    CHECK(scan.entries[2].window == 200);
    CHECK_FALSE(scan.entries[2].report.has_value());
    CHECK(scan.entries[2].error.find("WindowOutOfRange") != std::string::npos);
    for (std::size_t i : {0, 1, 3}) {
        REQUIRE(scan.entries[i].report.has_value());
        const auto& r = *scan.entries[i].report;
        CHECK(r.window == scan.entries[i].window);
        CHECK(r.strengths.labels.size() == 4);
        CHECK(r.strengths.relative.cols() == static_cast<Eigen::Index>(r.window));
    }
    CHECK_THROWS_AS(scan_window(s, {}, config), Error);
}
