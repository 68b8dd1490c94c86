#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace crowdyn::csv {

// Numeric CSV with optional leading `#` comment lines. Values are written with
// 17 significant digits, so parse → format reproduces the bytes.
struct Table {
    std::vector<std::string> comments;  // text after "# "
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    std::size_t column(std::string_view name) const;  // throws std::out_of_range
    std::vector<double> column_values(std::string_view name) const;
    void add_row(std::vector<double> row);  // throws std::invalid_argument on width mismatch
};

std::string format_number(double x);
std::string format(const Table& t);
Table parse(std::string_view text);  // throws std::invalid_argument

void write(const std::filesystem::path& path, const Table& t);  // throws IoError
Table read(const std::filesystem::path& path);                    // throws IoError

} // namespace crowdyn::csv
