#include "specssa/csv.hpp"

#include <cerrno>
#include <cstdio>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "specssa/error.hpp"

namespace specssa::io {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\"");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\"");
    return s.substr(first, last - first + 1);
}

bool parse_double(const std::string& text, double& value) {
    if (text.empty()) return false;
    errno = 0;
    char* end = nullptr;
    value = std::strtod(text.c_str(), &end);
    // ERANGE on underflow still yields the nearest representable value.
    const bool range_ok = errno == 0 || (errno == ERANGE && std::abs(value) < 1.0);
    return range_ok && end == text.c_str() + text.size();
}

std::vector<std::string> split_fields(const std::string& line) {
    const char sep = line.find(',') != std::string::npos ? ',' : (line.find(';') != std::string::npos ? ';' : '\t');
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, sep)) fields.push_back(trim(field));
    if (fields.empty()) fields.emplace_back();
    return fields;
}

} // namespace

CsvSeries read_series(std::istream& in) {
    CsvSeries out;
    std::string line;
    std::size_t line_no = 0;
    bool first_content = true;
    bool warned_columns = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split_fields(line);
        double value = 0.0;
        const bool ok = parse_double(fields.back(), value);
        if (!ok) {
            if (first_content) {
                first_content = false;
                continue;  // header
            }
            throw Error(ErrorCode::Parse, "line " + std::to_string(line_no) + ": cannot parse sample '" +
                                              fields.back() + "'");
        }
        first_content = false;
        if (fields.size() > 1 && !warned_columns) {
            out.warnings.push_back("ignoring " + std::to_string(fields.size() - 1) +
                                   " leading column(s); using the last field as the sample");
            warned_columns = true;
        }
        out.values.push_back(value);
    }
    return out;
}

CsvSeries read_series(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
    return read_series(in);
}

std::string format_double(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

void write_series(std::ostream& out, const std::vector<double>& values, const std::string& header) {
    if (!header.empty()) out << header << '\n';
    for (double v : values) out << format_double(v) << '\n';
}

void write_series(const std::filesystem::path& path, const std::vector<double>& values,
                  const std::string& header) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
    write_series(out, values, header);
    if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

void write_matrix(std::ostream& out, const Eigen::MatrixXd& matrix,
                  const std::vector<std::string>& header) {
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    if (!header.empty()) out << '\n';
    for (Eigen::Index r = 0; r < matrix.rows(); ++r) {
        for (Eigen::Index c = 0; c < matrix.cols(); ++c) {
            out << (c ? "," : "") << format_double(matrix(r, c));
        }
        out << '\n';
    }
}

void write_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& matrix,
                  const std::vector<std::string>& header) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
    write_matrix(out, matrix, header);
    if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

} // namespace specssa::io
