#pragma once

#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace specssa::io {

struct CsvSeries {
    std::vector<double> values;
    std::vector<std::string> warnings;
};

/// One sample per line. A non-numeric first line is taken as a header. When
/// a line has several fields the last one is the sample and a single warning
/// notes that the leading columns were ignored. Blank lines are skipped.
/// Throws Error(Parse) on a non-numeric sample.
CsvSeries read_series(std::istream& in);
CsvSeries read_series(const std::filesystem::path& path);

/// 17 significant digits; parses back to the identical double.
std::string format_double(double value);

void write_series(std::ostream& out, const std::vector<double>& values,
                  const std::string& header = "value");
void write_series(const std::filesystem::path& path, const std::vector<double>& values,
                  const std::string& header = "value");

/// One matrix row per line, comma separated, with an optional header line.
void write_matrix(std::ostream& out, const Eigen::MatrixXd& matrix,
                  const std::vector<std::string>& header = {});
void write_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& matrix,
                  const std::vector<std::string>& header = {});

} // namespace specssa::io
