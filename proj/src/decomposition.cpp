#include "specssa/decomposition.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <set>
#include <string>

#include "specssa/error.hpp"

namespace specssa {

std::string_view to_string(Provenance provenance) noexcept {
    return provenance == Provenance::FilterPath ? "filter-path" : "matrix-path";
}

std::vector<double> ComponentSet::component(std::size_t k) const {
    const auto r = components.row(static_cast<Eigen::Index>(k));
    return {r.begin(), r.end()};
}

std::vector<double> ComponentSet::sum() const {
    const Eigen::VectorXd s = components.colwise().sum().transpose();
    return {s.begin(), s.end()};
}

double ComponentSet::reconstruction_error(const TimeSeries& series) const {
    const auto s = sum();
    double worst = 0.0;
    for (std::size_t n = 0; n < s.size(); ++n) worst = std::max(worst, std::abs(s[n] - series[n]));
    return worst;
}

namespace {

std::size_t parse_index(std::string_view token, std::string_view whole) {
    std::size_t value = 0;
    const auto* first = token.data();
    const auto* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || value == 0) {
        throw Error(ErrorCode::Parse, "bad component index '" + std::string(token) +
                                          "' in grouping '" + std::string(whole) + "'");
    }
    return value - 1;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

template <typename F>
void split(std::string_view text, char sep, F&& each) {
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        each(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
}

// Rank-one reconstruction of u v^T without forming the matrix.
std::vector<double> hankelize_outer(const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                                    EmbeddingMode mode) {
    const Eigen::Index rows = u.size();
    const Eigen::Index cols = v.size();
    if (mode == EmbeddingMode::Circulant) {
        std::vector<double> out(static_cast<std::size_t>(rows), 0.0);
        for (Eigen::Index n = 0; n < rows; ++n) {
            double sum = 0.0;
            for (Eigen::Index j = 0; j < cols; ++j) {
                sum += u(((n - j) % rows + rows) % rows) * v(j);
            }
            out[static_cast<std::size_t>(n)] = sum / static_cast<double>(cols);
        }
        return out;
    }
    const Eigen::Index length = rows + cols - 1;
    std::vector<double> out(static_cast<std::size_t>(length), 0.0);
    for (Eigen::Index n = 0; n < length; ++n) {
        const Eigen::Index jlo = std::max<Eigen::Index>(0, n - rows + 1);
        const Eigen::Index jhi = std::min<Eigen::Index>(cols - 1, n);
        double sum = 0.0;
        for (Eigen::Index j = jlo; j <= jhi; ++j) sum += u(n - j) * v(j);
        out[static_cast<std::size_t>(n)] = sum / static_cast<double>(jhi - jlo + 1);
    }
    return out;
}

} // namespace

Grouping parse_grouping(std::string_view text) {
    Grouping groups;
    split(text, ';', [&](std::string_view group_text) {
        group_text = trim(group_text);
        if (group_text.empty()) {
            throw Error(ErrorCode::Parse, "empty group in '" + std::string(text) + "'");
        }
        std::vector<std::size_t> group;
        split(group_text, ',', [&](std::string_view item) {
            item = trim(item);
            const auto dash = item.find('-');
            if (dash == std::string_view::npos) {
                group.push_back(parse_index(item, text));
                return;
            }
            const std::size_t lo = parse_index(trim(item.substr(0, dash)), text);
            const std::size_t hi = parse_index(trim(item.substr(dash + 1)), text);
            if (hi < lo) throw Error(ErrorCode::Parse, "descending range in '" + std::string(text) + "'");
            for (std::size_t i = lo; i <= hi; ++i) group.push_back(i);
        });
        groups.push_back(std::move(group));
    });
    return groups;
}

void validate_grouping(const Grouping& grouping, std::size_t count) {
    std::set<std::size_t> seen;
    for (const auto& group : grouping) {
        for (std::size_t k : group) {
            if (k >= count) {
                throw Error(ErrorCode::IndexOutOfRange, "component " + std::to_string(k + 1) +
                                                            " out of range 1.." + std::to_string(count));
            }
            if (!seen.insert(k).second) {
                throw Error(ErrorCode::BadParams,
                            "component " + std::to_string(k + 1) + " appears in more than one group");
            }
        }
    }
}

std::vector<double> hankelize(const Eigen::MatrixXd& matrix, EmbeddingMode mode) {
    const Eigen::Index rows = matrix.rows();
    const Eigen::Index cols = matrix.cols();
    if (rows == 0 || cols == 0) return {};
    if (mode == EmbeddingMode::Circulant) {
        std::vector<double> out(static_cast<std::size_t>(rows), 0.0);
        for (Eigen::Index n = 0; n < rows; ++n) {
            double sum = 0.0;
            for (Eigen::Index j = 0; j < cols; ++j) sum += matrix(((n - j) % rows + rows) % rows, j);
            out[static_cast<std::size_t>(n)] = sum / static_cast<double>(cols);
        }
        return out;
    }
    const Eigen::Index length = rows + cols - 1;
    std::vector<double> out(static_cast<std::size_t>(length), 0.0);
    for (Eigen::Index n = 0; n < length; ++n) {
        const Eigen::Index jlo = std::max<Eigen::Index>(0, n - rows + 1);
        const Eigen::Index jhi = std::min<Eigen::Index>(cols - 1, n);
        double sum = 0.0;
        for (Eigen::Index j = jlo; j <= jhi; ++j) sum += matrix(n - j, j);
        out[static_cast<std::size_t>(n)] = sum / static_cast<double>(jhi - jlo + 1);
    }
    return out;
}

ComponentMatrix component_matrix(const TrajectoryMatrix& trajectory, const EigenSystem& eigen,
                                 std::size_t k) {
    if (eigen.size() != trajectory.window() || k >= eigen.size()) {
        throw Error(ErrorCode::DimensionMismatch, "eigen system does not match trajectory window");
    }
    ComponentMatrix cm;
    cm.right = eigen.vector(k);
    const double lambda = eigen.values[k];
    if (lambda <= kRankDeficiencyFloor * eigen.values.front() || lambda <= 0.0) {
        cm.left = Eigen::VectorXd::Zero(trajectory.entries.rows());
        return cm;
    }
    cm.singular_value = std::sqrt(lambda);
    cm.left = trajectory.entries * cm.right / cm.singular_value;
    return cm;
}

ComponentSet ssa_components(const TimeSeries& series, const EmbeddingConfig& cfg,
                            const EigenSystem& eigen) {
    const TrajectoryMatrix x = build_trajectory(series, cfg);
    if (eigen.size() != cfg.window) {
        throw Error(ErrorCode::DimensionMismatch, "eigen system has " + std::to_string(eigen.size()) +
                                                      " pairs for window " + std::to_string(cfg.window));
    }
    const std::size_t n = series.size();
    ComponentSet set;
    set.provenance = Provenance::MatrixPath;
    set.mode = cfg.mode;
    set.components = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(cfg.window),
                                           static_cast<Eigen::Index>(n));
    const double floor = kRankDeficiencyFloor * eigen.values.front();
    for (std::size_t k = 0; k < cfg.window; ++k) {
        const double lambda = eigen.values[k];
        if (lambda <= floor || lambda <= 0.0) continue;
        const Eigen::VectorXd v = eigen.vector(k);
        // sqrt(lambda) w = X v
        const Eigen::VectorXd u = x.entries * v;
        const auto series_k = hankelize_outer(u, v, cfg.mode);
        for (std::size_t t = 0; t < n; ++t) {
            set.components(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(t)) = series_k[t];
        }
    }
    return set;
}

ComponentSet filter_components(const TimeSeries& series, const FilterBank& bank,
                               EmbeddingMode mode) {
    if (mode != EmbeddingMode::Circulant) {
        throw Error(ErrorCode::BadParams, "filter-path decomposition requires circulant embedding");
    }
    const std::size_t n = series.size();
    if (bank.grid() != n) {
        throw Error(ErrorCode::GridMismatch, "filter grid " + std::to_string(bank.grid()) +
                                                 " differs from series length " + std::to_string(n));
    }
    const std::size_t k = bank.window();
    const Dft transform(n);
    const Spectrum xhat = dft(series.values(), n);
    const double tolerance = 1e-10 * series.max_abs();

    ComponentSet set;
    set.provenance = Provenance::FilterPath;
    set.mode = mode;
    set.components.resize(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(n));
    std::vector<std::complex<double>> filtered(n);
    for (std::size_t r = 0; r < k; ++r) {
        for (std::size_t a = 0; a < n; ++a) {
            filtered[a] = bank.rows(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(a)) *
                          xhat[a] / static_cast<double>(k);
        }
        double imag = 0.0;
        const auto series_k = transform.inverse_real(filtered, n, &imag);
        if (imag > tolerance) {
            throw Error(ErrorCode::InvariantViolation,
                        "filtered component " + std::to_string(r + 1) + " has imaginary residue " +
                            std::to_string(imag));
        }
        for (std::size_t t = 0; t < n; ++t) {
            set.components(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(t)) = series_k[t];
        }
    }
    return set;
}

std::vector<std::vector<double>> group_components(const ComponentSet& set, const Grouping& grouping) {
    validate_grouping(grouping, set.count());
    std::vector<std::vector<double>> out;
    out.reserve(grouping.size());
    for (const auto& group : grouping) {
        Eigen::VectorXd s = Eigen::VectorXd::Zero(set.components.cols());
        for (std::size_t k : group) s += set.components.row(static_cast<Eigen::Index>(k)).transpose();
        out.emplace_back(s.begin(), s.end());
    }
    return out;
}

DetrendResult sequential_detrend(const TimeSeries& series, std::size_t trend_window,
                                 const std::vector<std::size_t>& trend_group, EmbeddingMode mode) {
    const EmbeddingConfig cfg{trend_window, mode};
    const auto eigen = eig_sym_descending(lagged_covariance(build_trajectory(series, cfg)));
    const auto set = ssa_components(series, cfg, eigen);

    DetrendResult result;
    result.trend = group_components(set, Grouping{trend_group}).front();
    result.residual.resize(series.size());
    for (std::size_t n = 0; n < series.size(); ++n) result.residual[n] = series[n] - result.trend[n];
    return result;
}

} // namespace specssa
