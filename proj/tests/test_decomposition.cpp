#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "specssa/decomposition.hpp"
#include "specssa/diagnostics.hpp"
#include "specssa/error.hpp"
#include "specssa/schematic.hpp"

using namespace specssa;

namespace {

struct Pipeline {
    EmbeddingConfig cfg;
    EigenSystem eigen;
    ComponentSet matrix;
};

Pipeline run_matrix_path(const TimeSeries& s, std::size_t k, EmbeddingMode mode) {
    Pipeline p;
    p.cfg = {k, mode};
    p.eigen = eig_sym_descending(lagged_covariance(build_trajectory(s, p.cfg)));
    p.matrix = ssa_components(s, p.cfg, p.eigen);
    return p;
}

std::vector<double> tone(std::size_t n, double period, double amplitude = 1.0) {
    std::vector<double> x(n);
    for (std::size_t t = 0; t < n; ++t) x[t] = amplitude * std::sin(2.0 * std::numbers::pi * t / period);
    return x;
}

} // namespace

TEST_CASE("hankelize examples") {
    Eigen::MatrixXd hankel(3, 2);
    hankel << 1, 2, 2, 3, 3, 4;
    CHECK(hankelize(hankel, EmbeddingMode::Standard) == std::vector<double>{1, 2, 3, 4});

    Eigen::MatrixXd cross(2, 2);
    cross << 0, 2, 2, 0;
    CHECK(hankelize(cross, EmbeddingMode::Standard) == std::vector<double>{0, 2, 0});

    CHECK(hankelize(Eigen::MatrixXd::Ones(4, 2), EmbeddingMode::Circulant) ==
          std::vector<double>{1, 1, 1, 1});
}

TEST_CASE("hankelize matches the enumeration oracle") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::Index rows = 2 + rng() % 12, cols = 1 + rng() % 6;
        Eigen::MatrixXd m(rows, cols);
        for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = static_cast<double>(rng() % 1000) - 500.0;
        for (bool circ : {false, true}) {
            const auto got = hankelize(m, circ ? EmbeddingMode::Circulant : EmbeddingMode::Standard);
            const auto want = oracle::brute_hankelize(m, circ);
            REQUIRE(got.size() == want.size());
            for (std::size_t n = 0; n < got.size(); ++n) CHECK(got[n] == doctest::Approx(want[n]).epsilon(1e-13));
        }
    }
}

TEST_CASE("constant series is a single rank-one component") {
    const TimeSeries s({1, 1, 1, 1});
    const auto p = run_matrix_path(s, 2, EmbeddingMode::Standard);
    for (std::size_t n = 0; n < 4; ++n) {
        CHECK(p.matrix.components(0, n) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(p.matrix.components(1, n) == 0.0);
    }
    CHECK(p.matrix.provenance == Provenance::MatrixPath);
}

TEST_CASE("component matrix has a unit left vector and rank one") {
    std::mt19937_64 rng(43);
    const TimeSeries s(oracle::random_series(rng, 30));
    const EmbeddingConfig cfg{6, EmbeddingMode::Standard};
    const auto x = build_trajectory(s, cfg);
    const auto es = eig_sym_descending(lagged_covariance(x));
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(x.entries.rows(), x.entries.cols());
    for (std::size_t k = 0; k < 6; ++k) {
        const auto cm = component_matrix(x, es, k);
        CHECK(cm.left.norm() == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(cm.singular_value == doctest::Approx(std::sqrt(es.values[k])));
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(cm.dense());
        CHECK(svd.singularValues()(1) <= 1e-10 * svd.singularValues()(0));
        sum += cm.dense();
    }
    CHECK((sum - x.entries).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("matrix path matches dense oracle and sums to the series") {
    std::mt19937_64 rng(47);
    for (int trial = 0; trial < 20; ++trial) {
        const bool circ = trial % 2 == 1;
        const std::size_t n = 10 + rng() % 50;
        const std::size_t k = 2 + rng() % ((circ ? n : n / 2) - 1);
        const auto x = oracle::random_series(rng, n, 10.0);
        const TimeSeries s(x);
        const auto p = run_matrix_path(s, k, circ ? EmbeddingMode::Circulant : EmbeddingMode::Standard);
        CHECK(p.matrix.reconstruction_error(s) <= 1e-10 * s.max_abs());
        for (std::size_t c = 0; c < k; ++c) {
            const auto want = oracle::brute_component(x, p.eigen.vector(c), circ);
            const auto got = p.matrix.component(c);
            for (std::size_t t = 0; t < n; ++t) CHECK(std::abs(got[t] - want[t]) <= 1e-10 * s.max_abs());
        }
    }
}

TEST_CASE("pure tone is carried by the leading pair") {
    const TimeSeries s(tone(32, 8.0));
    const auto p = run_matrix_path(s, 8, EmbeddingMode::Circulant);
    for (std::size_t k = 2; k < 8; ++k) CHECK(p.eigen.values[k] <= 1e-10 * p.eigen.values[0]);
    const auto pair = group_components(p.matrix, {{0, 1}}).front();
    for (std::size_t t = 0; t < 32; ++t) CHECK(std::abs(pair[t] - s[t]) <= 1e-8);
}

TEST_CASE("eigen system of the wrong size is rejected") {
    const TimeSeries s({1, 2, 3, 4, 5, 6});
    const auto es = eig_sym_descending(lagged_covariance(build_trajectory(s, {3, EmbeddingMode::Standard})));
    try {
        ssa_components(s, {2, EmbeddingMode::Standard}, es);
        FAIL("expected DimensionMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DimensionMismatch);
    }
}

TEST_CASE("filter path with an all-pass single tap returns the series") {
    const TimeSeries s({0.5, -1.0, 2.0, 3.5, -0.25});
    EigenSystem es;
    es.values = {1.0};
    es.vectors = Eigen::MatrixXd::Ones(1, 1);
    const auto bank = build_filter_bank(es, 5);
    const auto set = filter_components(s, bank, EmbeddingMode::Circulant);
    CHECK(set.provenance == Provenance::FilterPath);
    for (std::size_t t = 0; t < 5; ++t) CHECK(set.components(0, t) == doctest::Approx(s[t]).epsilon(1e-13));
}

TEST_CASE("filter path with the identity basis splits the series evenly") {
    std::mt19937_64 rng(53);
    const TimeSeries s(oracle::random_series(rng, 12));
    EigenSystem es;
    es.values.assign(4, 1.0);
    es.vectors = Eigen::MatrixXd::Identity(4, 4);
    const auto set = filter_components(s, build_filter_bank(es, 12), EmbeddingMode::Circulant);
    for (std::size_t k = 0; k < 4; ++k)
        for (std::size_t t = 0; t < 12; ++t) CHECK(std::abs(set.components(k, t) - s[t] / 4.0) <= 1e-13);
}

TEST_CASE("filter path preconditions") {
    const TimeSeries s({1, 2, 3, 4, 5, 6});
    const auto es = eig_sym_descending(lagged_covariance(build_trajectory(s, {2, EmbeddingMode::Circulant})));
    auto code_of = [&](const FilterBank& bank, EmbeddingMode mode) {
        try {
            filter_components(s, bank, mode);
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::Io;
    };
    CHECK(code_of(build_filter_bank(es, 8), EmbeddingMode::Circulant) == ErrorCode::GridMismatch);
    CHECK(code_of(build_filter_bank(es, 6), EmbeddingMode::Standard) == ErrorCode::BadParams);
}

TEST_CASE("filter path equals matrix path in circulant mode") {
    std::mt19937_64 rng(59);
    const TimeSeries s(oracle::random_series(rng, 32));
    const auto p = run_matrix_path(s, 8, EmbeddingMode::Circulant);
    const auto filtered = filter_components(s, build_filter_bank(p.eigen, 32), EmbeddingMode::Circulant);
    CHECK((filtered.components - p.matrix.components).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK(filtered.reconstruction_error(s) <= 1e-10 * s.max_abs());
}

TEST_CASE("filter path does not shift the phase of a tone") {
    const std::size_t n = 48;
    const TimeSeries s(tone(n, 48.0 / 5.0, 2.0));  // exactly 5 cycles
    EmbeddingConfig cfg{7, EmbeddingMode::Circulant};
    std::mt19937_64 rng(61);
    // Any orthonormal basis works; use a random one to exercise general filters.
    Eigen::MatrixXd a(7, 7);
    std::normal_distribution<double> g;
    for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = g(rng);
    EigenSystem es;
    es.vectors = Eigen::HouseholderQR<Eigen::MatrixXd>(a).householderQ() * Eigen::MatrixXd::Identity(7, 7);
    es.values.assign(7, 1.0);
    const auto bank = build_filter_bank(es, n);
    const auto set = filter_components(s, bank, cfg.mode);
    for (std::size_t k = 0; k < 7; ++k) {
        const double gain = bank.rows(k, 5) / 7.0;
        for (std::size_t t = 0; t < n; ++t) CHECK(std::abs(set.components(k, t) - gain * s[t]) <= 1e-12);
    }
}

TEST_CASE("grouping") {
    std::mt19937_64 rng(67);
    const TimeSeries s(oracle::random_series(rng, 24));
    const auto p = run_matrix_path(s, 6, EmbeddingMode::Standard);

    const auto all = group_components(p.matrix, {{0, 1, 2, 3, 4, 5}}).front();
    for (std::size_t t = 0; t < 24; ++t) CHECK(std::abs(all[t] - s[t]) <= 1e-10 * s.max_abs());

    const auto singles = group_components(p.matrix, {{0}, {1}, {2}, {3}, {4}, {5}});
    for (std::size_t k = 0; k < 6; ++k) CHECK(singles[k] == p.matrix.component(k));

    // Group-then-reconstruct equals reconstruct-then-sum.
    const auto x = build_trajectory(s, p.cfg);
    const Eigen::MatrixXd grouped = component_matrix(x, p.eigen, 1).dense() + component_matrix(x, p.eigen, 3).dense();
    const auto via_matrix = hankelize(grouped, EmbeddingMode::Standard);
    const auto via_series = group_components(p.matrix, {{1, 3}}).front();
    for (std::size_t t = 0; t < 24; ++t) CHECK(via_matrix[t] == doctest::Approx(via_series[t]).epsilon(1e-12));

    auto code_of = [&](const Grouping& g) {
        try {
            group_components(p.matrix, g);
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::Io;
    };
    CHECK(code_of({{6}}) == ErrorCode::IndexOutOfRange);
    CHECK(code_of({{0, 1}, {1}}) == ErrorCode::BadParams);
}

TEST_CASE("grouping text") {
    CHECK(parse_grouping("1,2;3,4") == Grouping{{0, 1}, {2, 3}});
    CHECK(parse_grouping(" 1-3 ; 5 ") == Grouping{{0, 1, 2}, {4}});
    CHECK_THROWS_AS(parse_grouping("0"), Error);
    CHECK_THROWS_AS(parse_grouping("1,,2"), Error);
    CHECK_THROWS_AS(parse_grouping("1;"), Error);
    CHECK_THROWS_AS(parse_grouping("3-1"), Error);
}

TEST_CASE("leading pair of the schematic signal isolates the slow tone") {
    const auto s = generate_schematic({});
    const auto p = run_matrix_path(s, 120, EmbeddingMode::Standard);
    const auto a = group_components(p.matrix, {{0, 1}}).front();
    const auto peaks = detect_peaks(oracle::naive_power(s.vector(), 300));
    REQUIRE(peaks.size() >= 1);
    REQUIRE(peaks.peaks[0].bin == 10);
    const auto pa = oracle::naive_power(a, 300);
    const double total = std::accumulate(pa.begin(), pa.end(), 0.0);
    double band = 0.0;
    for (std::size_t bin : peaks.integration_bins(0)) band += pa[bin];
    CHECK((total - band) / total < 0.05);
}

TEST_CASE("sequential detrend") {
    const TimeSeries zero(std::vector<double>(20, 0.0));
    const auto z = sequential_detrend(zero, 5);
    for (std::size_t t = 0; t < 20; ++t) {
        CHECK(z.trend[t] == 0.0);
        CHECK(z.residual[t] == 0.0);
    }

    std::mt19937_64 rng(71);
    const TimeSeries r(oracle::random_series(rng, 30));
    const auto full = sequential_detrend(r, 5, {0, 1, 2, 3, 4});
    for (double v : full.residual) CHECK(std::abs(v) <= 1e-10 * r.max_abs());

    std::vector<double> x(200);
    for (std::size_t n = 0; n < 200; ++n) x[n] = n / 200.0 + std::sin(2.0 * std::numbers::pi * n / 10.0);
    const TimeSeries ramp(x);
    const auto d = sequential_detrend(ramp, 40);
    for (std::size_t t = 0; t < 200; ++t) CHECK(d.trend[t] + d.residual[t] == doctest::Approx(x[t]));
    const auto before = oracle::naive_power(x, 200);
    const auto after = oracle::naive_power(d.residual, 200);
    const double low_before = before[0] + before[1] + before[2];
    const double low_after = after[0] + after[1] + after[2];
    CHECK(low_after <= 0.1 * low_before);
}
