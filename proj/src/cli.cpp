#include "specssa/cli.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "specssa/csv.hpp"
#include "specssa/decomposition.hpp"
#include "specssa/diagnostics.hpp"
#include "specssa/error.hpp"
#include "specssa/schematic.hpp"

namespace specssa::cli {

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

struct Options {
    std::string input;
    bool gen = false;
    SchematicParams schematic;
    std::vector<double> amplitudes;
    std::vector<double> periods;
    std::string windows;
    std::string mode = "standard";
    std::size_t grid = 0;
    std::string group;
    PeakParams peaks;
    PairParams pairs;
    std::string out = "out";
    std::string format = "csv,json";
};

struct Formats {
    bool csv = false;
    bool json = false;
};

Formats parse_formats(const std::string& text) {
    Formats f;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item == "csv") f.csv = true;
        else if (item == "json") f.json = true;
        else throw Error(ErrorCode::BadParams, "unknown output format '" + item + "'");
    }
    if (!f.csv && !f.json) throw Error(ErrorCode::BadParams, "no output format selected");
    return f;
}

std::vector<std::size_t> parse_windows(const std::string& text) {
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t k = 0;
        auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), k);
        if (ec != std::errc{} || ptr != item.data() + item.size()) {
            throw Error(ErrorCode::Parse, "bad window length '" + item + "'");
        }
        out.push_back(k);
    }
    if (out.empty()) throw Error(ErrorCode::BadParams, "window list is empty");
    return out;
}

std::size_t single_window(const Options& o) {
    if (o.windows.empty()) throw Error(ErrorCode::BadParams, "-K/--window is required");
    const auto ks = parse_windows(o.windows);
    if (ks.size() != 1) throw Error(ErrorCode::BadParams, "this command takes a single window length");
    return ks.front();
}

SchematicParams schematic_params(const Options& o) {
    SchematicParams p = o.schematic;
    if (!o.amplitudes.empty()) {
        if (o.amplitudes.size() != 4) throw Error(ErrorCode::BadParams, "--amplitudes needs 4 values");
        std::copy(o.amplitudes.begin(), o.amplitudes.end(), p.amplitudes.begin());
    }
    if (!o.periods.empty()) {
        if (o.periods.size() != 4) throw Error(ErrorCode::BadParams, "--periods needs 4 values");
        std::copy(o.periods.begin(), o.periods.end(), p.periods.begin());
    }
    return p;
}

TimeSeries load_series(const Options& o, std::ostream& err) {
    if (o.gen == !o.input.empty()) {
        throw Error(ErrorCode::BadParams, "exactly one of --input or --gen is required");
    }
    if (o.gen) return generate_schematic(schematic_params(o));
    auto csv = io::read_series(fs::path(o.input));
    for (const auto& w : csv.warnings) err << "warning: " << o.input << ": " << w << '\n';
    return TimeSeries(std::move(csv.values));
}

Json config_echo(const std::string& command, const Options& o) {
    Json c;
    c["command"] = command;
    if (o.gen || command == "gen") {
        const auto p = schematic_params(o);
        c["source"] = {{"generator", "schematic"},
                       {"amplitudes", p.amplitudes},
                       {"periods", p.periods},
                       {"length", p.length},
                       {"noise", p.noise},
                       {"seed", p.seed}};
    } else {
        c["source"] = {{"input", o.input}};
    }
    if (command == "gen") return c;
    c["window"] = o.windows;
    c["mode"] = o.mode;
    c["grid"] = o.grid;
    c["group"] = o.group;
    c["peaks"] = {{"prominence", o.peaks.prominence}, {"half_width", o.peaks.half_width}};
    c["pairs"] = {{"gap", o.pairs.gap}, {"similarity", o.pairs.similarity}, {"floor", o.pairs.floor}};
    return c;
}

Json matrix_json(const Eigen::MatrixXd& m) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

Json pairs_json(const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
    Json out = Json::array();
    for (auto [a, b] : pairs) out.push_back({a + 1, b + 1});
    return out;
}

Json peaks_json(const PeakSet& peaks) {
    Json out = Json::array();
    for (std::size_t i = 0; i < peaks.size(); ++i) {
        const auto& p = peaks.peaks[i];
        out.push_back({{"label", p.label}, {"bin", p.bin}, {"bins", p.bins}});
    }
    return out;
}

Json strength_json(const StrengthTable& t, const PeakSet& peaks) {
    Json out;
    out["window"] = t.window;
    out["labels"] = t.labels;
    Json bins = Json::array();
    for (const auto& p : peaks.peaks) bins.push_back(p.bin);
    out["peak_bins"] = bins;
    out["absolute"] = matrix_json(t.absolute);
    out["relative"] = matrix_json(t.relative);
    out["empty"] = t.empty;
    return out;
}

// Fields shared by every analysis report.
void fill_report(Json& j, const WindowReport& r, const PeakSet& peaks) {
    j["eigenvalues"] = r.eigen.values;
    j["pairs"] = pairs_json(r.pairs);
    j["invariant_deviations"] = {
        {"eigen_residual", r.eigen.max_residual},
        {"filter_normalization", r.bank.normalization_deviation},
        {"filter_completeness", r.bank.completeness_deviation},
        {"spectrum_additivity", r.decomposition.additivity_deviation},
        {"eigenvalue_identity", r.identity.max()},
        {"eigenvalue_identity_exact", r.identity.exact},
    };
    j["strength_table"] = strength_json(r.strengths, peaks);
    j["per_component_power"] = r.decomposition.component_power();
}

std::vector<std::string> index_header(const std::string& first, std::size_t count,
                                      std::size_t base = 0) {
    std::vector<std::string> h{first};
    for (std::size_t i = 0; i < count; ++i) h.push_back(std::to_string(i + base));
    return h;
}

// Prefixes each row with its one-based component index.
Eigen::MatrixXd with_index_column(const Eigen::MatrixXd& m) {
    Eigen::MatrixXd out(m.rows(), m.cols() + 1);
    for (Eigen::Index r = 0; r < m.rows(); ++r) out(r, 0) = static_cast<double>(r + 1);
    out.rightCols(m.cols()) = m;
    return out;
}

void write_json(const fs::path& path, const Json& j) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
    out << j.dump(2) << '\n';
    if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

fs::path prepare_out(const Options& o) {
    const fs::path dir(o.out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create output directory " + dir.string() + ": " + ec.message());
    return dir;
}

DiagnosticsConfig diagnostics_config(const Options& o) {
    DiagnosticsConfig c;
    c.mode = parse_mode(o.mode);
    c.grid = o.grid;
    c.peaks = o.peaks;
    c.pairs = o.pairs;
    return c;
}

struct Analysis {
    TimeSeries series;
    DiagnosticsConfig config;
    PeakSet peaks;
    WindowReport report;
};

Analysis analyze(const Options& o, std::ostream& err) {
    TimeSeries series = load_series(o, err);
    const auto config = diagnostics_config(o);
    const std::size_t window = single_window(o);
    EmbeddingConfig{window, config.mode}.validate(series.size());
    const std::size_t grid = resolve_grid(series.size(), config.grid);
    PeakSet peaks = detect_peaks(power_spectrum(series, grid), config.peaks);
    WindowReport report = analyze_window(series, window, config, peaks);
    return {std::move(series), config, std::move(peaks), std::move(report)};
}

int cmd_gen(const Options& o, std::ostream& out) {
    const Formats f = parse_formats(o.format);
    const auto dir = prepare_out(o);
    const auto series = generate_schematic(schematic_params(o));
    if (f.csv) io::write_series(dir / "series.csv", series.vector());
    if (f.json) {
        Json j;
        j["config"] = config_echo("gen", o);
        j["series"] = series.vector();
        write_json(dir / "series.json", j);
    }
    out << "generated " << series.size() << " samples into " << dir.string() << '\n';
    return kExitOk;
}

int cmd_decompose(const Options& o, std::ostream& out, std::ostream& err) {
    const Formats f = parse_formats(o.format);
    const auto a = analyze(o, err);
    const EmbeddingConfig cfg{a.report.window, a.config.mode};
    const auto matrix_set = ssa_components(a.series, cfg, a.report.eigen);

    std::optional<ComponentSet> filter_set;
    if (cfg.mode == EmbeddingMode::Circulant && a.report.bank.grid() == a.series.size()) {
        filter_set = filter_components(a.series, a.report.bank, cfg.mode);
    }

    std::optional<Grouping> grouping;
    if (!o.group.empty()) {
        grouping = parse_grouping(o.group);
        validate_grouping(*grouping, matrix_set.count());
    }

    const double scale = a.series.max_abs();
    const double tolerance = 1e-10 * scale;
    const double matrix_error = matrix_set.reconstruction_error(a.series);

    Json recon;
    recon["tolerance"] = tolerance;
    recon["matrix_path_max_error"] = matrix_error;
    bool ok = matrix_error <= tolerance;
    if (filter_set) {
        const double filter_error = filter_set->reconstruction_error(a.series);
        const double gap = (filter_set->components - matrix_set.components).cwiseAbs().maxCoeff();
        recon["filter_path_max_error"] = filter_error;
        recon["path_max_difference"] = gap;
        ok = ok && filter_error <= tolerance;
    }
    recon["ok"] = ok;

    const auto dir = prepare_out(o);
    if (f.csv) {
        io::write_matrix(dir / "components.csv", with_index_column(matrix_set.components),
                         index_header("k", matrix_set.length()));
        if (filter_set) {
            io::write_matrix(dir / "components_filter.csv", with_index_column(filter_set->components),
                             index_header("k", filter_set->length()));
        }
        if (grouping) {
            const auto grouped = group_components(matrix_set, *grouping);
            Eigen::MatrixXd g(static_cast<Eigen::Index>(grouped.size()),
                              static_cast<Eigen::Index>(a.series.size()));
            for (std::size_t i = 0; i < grouped.size(); ++i) {
                g.row(static_cast<Eigen::Index>(i)) =
                    Eigen::Map<const Eigen::RowVectorXd>(grouped[i].data(), g.cols());
            }
            io::write_matrix(dir / "grouped.csv", with_index_column(g), index_header("group", g.cols()));
        }
    }
    if (f.json) {
        Json j;
        j["config"] = config_echo("decompose", o);
        fill_report(j, a.report, a.peaks);
        j["reconstruction"] = recon;
        write_json(dir / "report.json", j);
    }
    out << "decompose: K=" << a.report.window << " mode=" << to_string(cfg.mode)
        << " max reconstruction error " << matrix_error << " (tolerance " << tolerance << ")"
        << (ok ? "" : " FAILED") << '\n';
    return ok ? kExitOk : kExitDomainBase + static_cast<int>(ErrorCode::InvariantViolation);
}

int cmd_spectrum(const Options& o, std::ostream& out, std::ostream& err) {
    const Formats f = parse_formats(o.format);
    const auto a = analyze(o, err);
    const auto dir = prepare_out(o);
    const auto& sd = a.report.decomposition;
    if (f.csv) {
        io::write_series(dir / "power_spectrum.csv", sd.power, "power");
        io::write_matrix(dir / "filters.csv", with_index_column(a.report.bank.rows),
                         index_header("k", a.report.bank.grid()));
        io::write_matrix(dir / "spectrum_decomposition.csv", with_index_column(sd.rows),
                         index_header("k", sd.grid()));
    }
    if (f.json) {
        Json j;
        j["config"] = config_echo("spectrum", o);
        fill_report(j, a.report, a.peaks);
        j["power_spectrum"] = sd.power;
        j["spectrum_decomposition"] = matrix_json(sd.rows);
        write_json(dir / "report.json", j);
    }
    out << "spectrum: K=" << sd.window() << " grid=" << sd.grid() << " additivity deviation "
        << sd.additivity_deviation << '\n';
    return kExitOk;
}

void write_strength_csv(const fs::path& dir, const std::string& suffix, const StrengthTable& t) {
    std::vector<std::string> header{"peak"};
    for (std::size_t k = 0; k < t.window; ++k) header.push_back(std::to_string(k + 1));
    for (const auto* which : {"relative", "absolute"}) {
        const auto& m = std::string(which) == "relative" ? t.relative : t.absolute;
        std::ofstream csv(dir / ("strengths_" + std::string(which) + suffix + ".csv"),
                          std::ios::binary | std::ios::trunc);
        if (!csv) throw Error(ErrorCode::Io, "cannot write strength table in " + dir.string());
        for (std::size_t i = 0; i < header.size(); ++i) csv << (i ? "," : "") << header[i];
        csv << '\n';
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            csv << t.labels[static_cast<std::size_t>(r)];
            for (Eigen::Index c = 0; c < m.cols(); ++c) csv << ',' << io::format_double(m(r, c));
            csv << '\n';
        }
    }
}

int cmd_diag(const Options& o, std::ostream& out, std::ostream& err) {
    const Formats f = parse_formats(o.format);
    const auto a = analyze(o, err);
    const auto dir = prepare_out(o);
    if (f.csv) {
        io::write_series(dir / "eigenvalues.csv", a.report.eigen.values, "eigenvalue");
        io::write_series(dir / "identity_residuals.csv", a.report.identity.residuals, "residual");
        write_strength_csv(dir, "", a.report.strengths);
    }
    if (f.json) {
        Json j;
        j["config"] = config_echo("diag", o);
        fill_report(j, a.report, a.peaks);
        j["peaks"] = peaks_json(a.peaks);
        j["identity_residuals"] = a.report.identity.residuals;
        write_json(dir / "report.json", j);
    }
    out << "diag: K=" << a.report.window << " pairs=" << a.report.pairs.size()
        << " peaks=" << a.peaks.size() << " identity residual " << a.report.identity.max()
        << (a.report.identity.exact ? "" : " (approximate)") << '\n';
    return kExitOk;
}

int cmd_scan(const Options& o, std::ostream& out, std::ostream& err) {
    const Formats f = parse_formats(o.format);
    const TimeSeries series = load_series(o, err);
    if (o.windows.empty()) throw Error(ErrorCode::BadParams, "-K/--window is required");
    const auto windows = parse_windows(o.windows);
    const auto result = scan_window(series, windows, diagnostics_config(o));
    const auto dir = prepare_out(o);

    Json reports = Json::array();
    std::size_t failed = 0;
    for (const auto& entry : result.entries) {
        Json r;
        r["window"] = entry.window;
        r["ok"] = entry.report.has_value();
        if (entry.report) {
            fill_report(r, *entry.report, result.peaks);
            if (f.csv) {
                const std::string suffix = "_K" + std::to_string(entry.window);
                io::write_series(dir / ("eigenvalues" + suffix + ".csv"), entry.report->eigen.values,
                                 "eigenvalue");
                write_strength_csv(dir, suffix, entry.report->strengths);
            }
        } else {
            ++failed;
            r["error"] = entry.error;
            err << "scan: K=" << entry.window << " failed: " << entry.error << '\n';
        }
        reports.push_back(std::move(r));
    }
    if (f.json) {
        Json j;
        j["config"] = config_echo("scan", o);
        j["grid"] = result.grid;
        j["peaks"] = peaks_json(result.peaks);
        j["reports"] = std::move(reports);
        write_json(dir / "report.json", j);
    }
    out << "scan: " << result.entries.size() - failed << " of " << result.entries.size()
        << " windows completed\n";
    return kExitOk;
}

int cmd_detrend(const Options& o, std::ostream& out, std::ostream& err) {
    const Formats f = parse_formats(o.format);
    const TimeSeries series = load_series(o, err);
    const std::size_t window = single_window(o);
    const EmbeddingMode mode = parse_mode(o.mode);
    std::vector<std::size_t> group{0};
    if (!o.group.empty()) {
        const auto g = parse_grouping(o.group);
        if (g.size() != 1) throw Error(ErrorCode::BadParams, "detrend takes a single trend group");
        group = g.front();
    }
    const auto result = sequential_detrend(series, window, group, mode);
    const auto dir = prepare_out(o);
    if (f.csv) {
        io::write_series(dir / "trend.csv", result.trend, "trend");
        io::write_series(dir / "residual.csv", result.residual, "residual");
    }
    if (f.json) {
        Json j;
        j["config"] = config_echo("detrend", o);
        Json g = Json::array();
        for (std::size_t k : group) g.push_back(k + 1);
        j["trend_group"] = g;
        j["trend"] = result.trend;
        j["residual"] = result.residual;
        write_json(dir / "report.json", j);
    }
    out << "detrend: K=" << window << " wrote trend and residual (" << series.size() << " samples)\n";
    return kExitOk;
}

int exit_code(ErrorCode code) {
    switch (code) {
    case ErrorCode::Io: return kExitIo;
    case ErrorCode::Parse: return kExitParse;
    default: return kExitDomainBase + static_cast<int>(code);
    }
}

void report_error(std::ostream& err, const std::string& code, int status, const std::string& message) {
    Json j;
    j["error"] = {{"code", code}, {"exit_code", status}, {"message", message}};
    err << j.dump() << '\n';
}

const char* kExitCodeHelp = R"(Exit codes:
  0   success
  2   usage error (bad or missing flags)
  3   I/O error
  4   parse error (input CSV, window list, grouping)
  10  EmptySeries          15  InvariantViolation
  11  WindowOutOfRange     16  DimensionMismatch
  12  ConvergenceFailure   17  IndexOutOfRange
  13  GridTooSmall         18  BadParams
  14  GridMismatch         70  internal error
On failure a JSON error record is written to stderr.)";

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Singular spectrum analysis with filter-bank power-spectrum diagnostics", "specssa"};
    app.footer(kExitCodeHelp);
    app.require_subcommand(1);

    auto add_source = [&](CLI::App* sub) {
        sub->add_option("--input", o.input, "CSV file, one sample per line");
        sub->add_flag("--gen", o.gen, "Use the built-in schematic four-tone signal as input");
    };
    auto add_generator = [&](CLI::App* sub) {
        sub->add_option("--seed", o.schematic.seed, "Noise seed for the schematic signal")
            ->capture_default_str();
        sub->add_option("--length", o.schematic.length, "Schematic signal length")->capture_default_str();
        sub->add_option("--noise", o.schematic.noise, "Noise standard deviation")->capture_default_str();
        sub->add_option("--amplitudes", o.amplitudes, "Four tone amplitudes")->delimiter(',');
        sub->add_option("--periods", o.periods, "Four tone periods in samples")->delimiter(',');
    };
    auto add_analysis = [&](CLI::App* sub, bool group) {
        sub->add_option("-K,--window", o.windows, "Window length (comma list for scan)");
        sub->add_option("--mode", o.mode, "Embedding mode")
            ->check(CLI::IsMember({"standard", "circulant"}))
            ->capture_default_str();
        sub->add_option("--grid", o.grid, "Spectrum grid size (default: series length)");
        if (group) sub->add_option("--group", o.group, "Component groups, e.g. \"1,2;3,4\"");
        sub->add_option("--peaks-prominence", o.peaks.prominence, "Minimum peak height relative to max")
            ->capture_default_str();
        sub->add_option("--peaks-halfwidth", o.peaks.half_width, "Peak neighborhood half-width in bins")
            ->capture_default_str();
        sub->add_option("--pair-gap", o.pairs.gap, "Maximum relative eigenvalue gap for a pair")
            ->capture_default_str();
        sub->add_option("--pair-sim", o.pairs.similarity, "Minimum filter cosine similarity for a pair")
            ->capture_default_str();
        sub->add_option("--pair-floor", o.pairs.floor,
                        "Pair only eigenvalues >= floor * mean eigenvalue (0 disables)")
            ->capture_default_str();
    };
    auto add_output = [&](CLI::App* sub) {
        sub->add_option("--out", o.out, "Output directory")->capture_default_str();
        sub->add_option("--format", o.format, "Output formats: csv, json or csv,json")->capture_default_str();
    };

    auto* gen = app.add_subcommand("gen", "Write the schematic four-tone series");
    add_generator(gen);
    add_output(gen);

    std::vector<std::pair<CLI::App*, std::string>> commands{{gen, "gen"}};
    const std::vector<std::pair<std::string, std::string>> analysis{
        {"decompose", "Decompose a series into K additive components"},
        {"spectrum", "Decompose the power spectrum through the filter bank"},
        {"diag", "Eigenvalues, pairs, identity residuals and peak strengths"},
        {"scan", "Diagnostics over a list of window lengths"},
        {"detrend", "Sequential SSA: subtract a trend group"},
    };
    for (const auto& [name, description] : analysis) {
        auto* sub = app.add_subcommand(name, description);
        add_source(sub);
        add_generator(sub);
        add_analysis(sub, name == "decompose" || name == "detrend");
        add_output(sub);
        commands.emplace_back(sub, name);
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        report_error(err, "Usage", kExitUsage, e.what());
        return kExitUsage;
    }

    try {
        for (const auto& [sub, name] : commands) {
            if (!sub->parsed()) continue;
            if (name == "gen") return cmd_gen(o, out);
            if (name == "decompose") return cmd_decompose(o, out, err);
            if (name == "spectrum") return cmd_spectrum(o, out, err);
            if (name == "diag") return cmd_diag(o, out, err);
            if (name == "scan") return cmd_scan(o, out, err);
            if (name == "detrend") return cmd_detrend(o, out, err);
        }
    } catch (const Error& e) {
        const int status = exit_code(e.code());
        report_error(err, std::string(to_string(e.code())), status, e.what());
        return status;
    } catch (const std::exception& e) {
        report_error(err, "Internal", kExitInternal, e.what());
        return kExitInternal;
    }
    return kExitUsage;
}

} // namespace specssa::cli
