#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

namespace pilotfeas::cli {

// Shortest round-trip decimal form, identical on every run and thread count.
std::string fmt(double v);
std::string fmt(std::int64_t v);
std::string fmt(std::uint64_t v);

// RFC-4180 CSV writer. Every file starts with a provenance comment line
// recording the config hash and the effective seed, then the header row.
class CsvFile {
public:
    CsvFile(const std::string& path, const std::vector<std::string>& header,
            std::uint64_t config_hash, std::uint64_t seed);

    void row(const std::vector<std::string>& cells);

private:
    std::ofstream out_;
    std::size_t columns_;
    std::string path_;
};

} // namespace pilotfeas::cli
