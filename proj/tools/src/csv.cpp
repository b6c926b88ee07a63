#include "csv.hpp"

#include <charconv>
#include <stdexcept>

namespace pilotfeas::cli {

namespace {

// Quote per RFC 4180 only when the cell contains a comma, quote, or newline.
std::string escape(const std::string& cell) {
    if (cell.find_first_of(",\"\r\n") == std::string::npos) return cell;
    std::string quoted = "\"";
    for (const char c : cell) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

std::string hex16(std::uint64_t v) {
    static const char digits[] = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[static_cast<std::size_t>(i)] = digits[v & 0xF];
        v >>= 4;
    }
    return s;
}

} // namespace

std::string fmt(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string fmt(std::int64_t v) { return std::to_string(v); }
std::string fmt(std::uint64_t v) { return std::to_string(v); }

CsvFile::CsvFile(const std::string& path, const std::vector<std::string>& header,
                 std::uint64_t config_hash, std::uint64_t seed)
    : out_(path), columns_(header.size()), path_(path) {
    if (!out_) throw std::runtime_error("cannot open output file: " + path);
    out_ << "# config=" << hex16(config_hash) << " seed=" << seed << "\n";
    row(header);
}

void CsvFile::row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_)
        throw std::logic_error("csv row width mismatch in " + path_);
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        out_ << escape(cells[i]);
    }
    out_ << "\n";
    if (!out_) throw std::runtime_error("write failure on " + path_);
}

} // namespace pilotfeas::cli
