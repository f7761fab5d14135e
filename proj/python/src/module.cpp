#include <sstream>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "specssa/cli.hpp"
#include "specssa/decomposition.hpp"
#include "specssa/diagnostics.hpp"
#include "specssa/error.hpp"
#include "specssa/schematic.hpp"

namespace py = pybind11;
using namespace specssa;

namespace {

EmbeddingConfig config(const TimeSeries& s, std::size_t window, const std::string& mode) {
    EmbeddingConfig cfg{window, parse_mode(mode)};
    cfg.validate(s.size());
    return cfg;
}

EigenSystem eigen_of(const TimeSeries& s, const EmbeddingConfig& cfg) {
    return eig_sym_descending(lagged_covariance(build_trajectory(s, cfg)));
}

py::dict peaks_dict(const PeakSet& peaks) {
    py::list list;
    for (std::size_t i = 0; i < peaks.size(); ++i) {
        py::dict p;
        p["label"] = peaks.peaks[i].label;
        p["bin"] = peaks.peaks[i].bin;
        p["bins"] = peaks.peaks[i].bins;
        p["integration_bins"] = peaks.integration_bins(i);
        list.append(p);
    }
    py::dict d;
    d["grid"] = peaks.grid;
    d["peaks"] = list;
    return d;
}

py::list one_based(const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
    py::list out;
    for (auto [a, b] : pairs) out.append(py::make_tuple(a + 1, b + 1));
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Singular spectrum analysis with a filter-bank view of the power spectrum.";

    static py::handle error_type =
        py::exception<specssa::Error>(m, "SpecssaError", PyExc_RuntimeError).release();
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const specssa::Error& e) {
            py::object inst = py::reinterpret_borrow<py::object>(error_type)(e.what());
            inst.attr("code") = std::string(to_string(e.code()));
            PyErr_SetObject(error_type.ptr(), inst.ptr());
        }
    });

    m.def(
        "schematic",
        [](std::size_t length, double noise, std::uint64_t seed, std::array<double, 4> amplitudes,
           std::array<double, 4> periods) {
            SchematicParams p;
            p.length = length;
            p.noise = noise;
            p.seed = seed;
            p.amplitudes = amplitudes;
            p.periods = periods;
            return generate_schematic(p).vector();
        },
        py::arg("length") = 300, py::arg("noise") = 1.0, py::arg("seed") = SchematicParams{}.seed,
        py::arg("amplitudes") = SchematicParams{}.amplitudes, py::arg("periods") = SchematicParams{}.periods,
        "Four-tone test signal plus seeded Gaussian noise.");

    m.def(
        "gaussian",
        [](std::uint64_t seed, std::size_t count) {
            GaussianSource g(seed);
            std::vector<double> out(count);
            for (auto& v : out) v = g.next();
            return out;
        },
        py::arg("seed"), py::arg("count"));

    m.def(
        "trajectory",
        [](std::vector<double> x, std::size_t window, const std::string& mode) {
            const TimeSeries s(std::move(x));
            return build_trajectory(s, config(s, window, mode)).entries;
        },
        py::arg("x"), py::arg("window"), py::arg("mode") = "standard");

    m.def(
        "eigen",
        [](std::vector<double> x, std::size_t window, const std::string& mode) {
            const TimeSeries s(std::move(x));
            const auto e = eigen_of(s, config(s, window, mode));
            return py::make_tuple(e.values, e.vectors);
        },
        py::arg("x"), py::arg("window"), py::arg("mode") = "standard",
        "Descending eigenvalues and eigenvectors (columns) of the lagged covariance.");

    m.def(
        "power_spectrum",
        [](std::vector<double> x, std::size_t grid) {
            const TimeSeries s(std::move(x));
            return power_spectrum(s, resolve_grid(s.size(), grid));
        },
        py::arg("x"), py::arg("grid") = 0);

    m.def(
        "filter_bank",
        [](std::vector<double> x, std::size_t window, const std::string& mode, std::size_t grid) {
            const TimeSeries s(std::move(x));
            const auto cfg = config(s, window, mode);
            return build_filter_bank(eigen_of(s, cfg), grid ? grid : s.size()).rows;
        },
        py::arg("x"), py::arg("window"), py::arg("mode") = "standard", py::arg("grid") = 0,
        "K x M matrix of squared eigenvector transfer functions.");

    m.def(
        "components",
        [](std::vector<double> x, std::size_t window, const std::string& mode, const std::string& path) {
            const TimeSeries s(std::move(x));
            const auto cfg = config(s, window, mode);
            const auto eigen = eigen_of(s, cfg);
            if (path == "matrix") return ssa_components(s, cfg, eigen).components;
            if (path == "filter") {
                return filter_components(s, build_filter_bank(eigen, s.size()), cfg.mode).components;
            }
            throw specssa::Error(ErrorCode::BadParams, "path must be 'matrix' or 'filter'");
        },
        py::arg("x"), py::arg("window"), py::arg("mode") = "standard", py::arg("path") = "matrix");

    m.def(
        "group",
        [](std::vector<double> x, std::size_t window, const std::string& groups, const std::string& mode) {
            const TimeSeries s(std::move(x));
            const auto cfg = config(s, window, mode);
            const auto set = ssa_components(s, cfg, eigen_of(s, cfg));
            const auto grouping = parse_grouping(groups);
            validate_grouping(grouping, set.count());
            return group_components(set, grouping);
        },
        py::arg("x"), py::arg("window"), py::arg("groups"), py::arg("mode") = "standard",
        "Sums of components for one-based groups such as '1,2;3-4'.");

    m.def(
        "decompose_spectrum",
        [](std::vector<double> x, std::size_t window, const std::string& mode, std::size_t grid) {
            const TimeSeries s(std::move(x));
            const auto cfg = config(s, window, mode);
            const std::size_t m_ = resolve_grid(s.size(), grid);
            return decompose_spectrum(build_filter_bank(eigen_of(s, cfg), m_), power_spectrum(s, m_)).rows;
        },
        py::arg("x"), py::arg("window"), py::arg("mode") = "standard", py::arg("grid") = 0,
        "Rows F_k P / K; columns sum to the power spectrum.");

    m.def(
        "detect_peaks",
        [](std::vector<double> power, double prominence, std::size_t half_width) {
            return peaks_dict(detect_peaks(power, {prominence, half_width}));
        },
        py::arg("power"), py::arg("prominence") = 0.1, py::arg("half_width") = 2);

    m.def(
        "analyze",
        [](std::vector<double> x, std::size_t window, const std::string& mode, std::size_t grid,
           double prominence, std::size_t half_width, double pair_gap, double pair_similarity,
           double pair_floor) {
            const TimeSeries s(std::move(x));
            DiagnosticsConfig cfg;
            cfg.mode = parse_mode(mode);
            cfg.grid = grid;
            cfg.peaks = {prominence, half_width};
            cfg.pairs = {pair_gap, pair_similarity, pair_floor};
            const auto peaks = detect_peaks(power_spectrum(s, resolve_grid(s.size(), grid)), cfg.peaks);
            const auto r = analyze_window(s, window, cfg, peaks);
            py::dict d;
            d["window"] = r.window;
            d["eigenvalues"] = r.eigen.values;
            d["pairs"] = one_based(r.pairs);
            d["peaks"] = peaks_dict(peaks);
            d["absolute"] = r.strengths.absolute;
            d["relative"] = r.strengths.relative;
            d["labels"] = r.strengths.labels;
            d["identity_residuals"] = r.identity.residuals;
            d["identity_exact"] = r.identity.exact;
            return d;
        },
        py::arg("x"), py::arg("window"), py::arg("mode") = "standard", py::arg("grid") = 0,
        py::arg("prominence") = 0.1, py::arg("half_width") = 2, py::arg("pair_gap") = 0.15,
        py::arg("pair_similarity") = 0.9, py::arg("pair_floor") = 1.0,
        "Eigenvalues, pairs and peak strength tables at one window.");

    m.def(
        "detrend",
        [](std::vector<double> x, std::size_t window, std::vector<std::size_t> group, const std::string& mode) {
            for (auto& g : group) {
                if (g == 0) throw specssa::Error(ErrorCode::IndexOutOfRange, "group indices are one-based");
                --g;
            }
            const auto r = sequential_detrend(TimeSeries(std::move(x)), window, group, parse_mode(mode));
            return py::make_tuple(r.trend, r.residual);
        },
        py::arg("x"), py::arg("window"), py::arg("group") = std::vector<std::size_t>{1},
        py::arg("mode") = "standard", "Returns (trend, residual).");

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            const int rc = cli::run(args, out, err);
            return py::make_tuple(rc, out.str(), err.str());
        },
        py::arg("args"), "Runs the command-line front-end in-process: (exit code, stdout, stderr).");
}
