#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace kinmarket {

/// Numeric table with a header row. Values are written with 17 significant
/// digits, so reading a file back reproduces every double exactly.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    std::size_t column(const std::string& name) const;
};

std::string format_double(double value);

void write_csv(const std::filesystem::path& path, const CsvTable& table);
CsvTable read_csv(const std::filesystem::path& path);

} // namespace kinmarket
