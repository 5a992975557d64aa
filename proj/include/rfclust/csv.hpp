#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace rfclust {

// Shortest round-trip decimal representation (std::to_chars). All file
// output goes through this so repeated runs are byte-identical.
std::string format_double(double value);

double parse_double(const std::string& text);

std::vector<std::string> split_csv_line(const std::string& line);

std::string join_csv(const std::vector<std::string>& fields);

// First line of every output file: "# rfclust <version> seed=<seed>".
std::string provenance_line(std::uint64_t master_seed);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    // Column index by header name; throws std::runtime_error if absent.
    std::size_t column(const std::string& name) const;
};

// Reads a CSV file, skipping '#' comment lines. Throws std::runtime_error
// with the path in the message if the file cannot be opened.
CsvTable read_csv(const std::filesystem::path& path);

class CsvWriter {
  public:
    CsvWriter(const std::filesystem::path& path, std::uint64_t master_seed);

    void header(const std::vector<std::string>& names);
    void row(const std::vector<std::string>& fields);

  private:
    std::ofstream out_;
};

}  // namespace rfclust
