#include "rfclust/csv.hpp"

#include <charconv>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include "rfclust/version.hpp"

namespace rfclust {

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& text) {
    double value = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc{} || res.ptr != end) {
        throw std::runtime_error("not a number: '" + text + "'");
    }
    return value;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

std::string join_csv(const std::vector<std::string>& fields) {
    std::string line;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) line += ',';
        line += fields[i];
    }
    return line;
}

std::string provenance_line(std::uint64_t master_seed) {
    return "# rfclust " + std::string(kVersion) + " seed=" + std::to_string(master_seed);
}

std::size_t CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    throw std::runtime_error("missing column '" + name + "'");
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path.string());
    CsvTable table;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        if (!have_header) {
            table.header = split_csv_line(line);
            have_header = true;
        } else {
            table.rows.push_back(split_csv_line(line));
        }
    }
    return table;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::uint64_t master_seed)
    : out_(path) {
    if (!out_) throw std::runtime_error("cannot open file for writing: " + path.string());
    out_ << provenance_line(master_seed) << '\n';
}

void CsvWriter::header(const std::vector<std::string>& names) { out_ << join_csv(names) << '\n'; }

void CsvWriter::row(const std::vector<std::string>& fields) { out_ << join_csv(fields) << '\n'; }

}  // namespace rfclust
