#pragma once

#include <string>
#include <vector>

namespace mrnet {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;  // every row has header.size() cells
};

// Reads a comma-separated file with a header row. Cells are plain tokens
// (no quoting); trailing carriage returns are stripped. Ragged rows raise
// DataError naming the offending line.
CsvTable readCsv(const std::string& path);

// Shortest deterministic round-trip formatting for doubles (%.17g).
std::string formatDouble(double v);

// Parses a floating-point cell; failure raises DataError naming the file,
// 1-based line, and column header.
double parseDoubleCell(const std::string& cell, const std::string& path, std::size_t line,
                       const std::string& column);

// Writes content to path atomically: temp file in the same directory, then
// rename. No partial file is left behind on failure.
void writeFileAtomic(const std::string& path, const std::string& content);

}  // namespace mrnet
