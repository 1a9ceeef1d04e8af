#pragma once
// Dataset plumbing for the CLI: a tabular record with string metadata that
// serializes to CSV (1-D curves) or JSON (surfaces, reports) and parses back
// bit-identically. Doubles are written with 17 significant digits.

#include <map>
#include <string>
#include <vector>

namespace symroof::output {

inline constexpr const char* kSchemaVersion = "symroof/1";

struct OutputRecord {
  std::string schema = kSchemaVersion;
  std::string command;  // echo of the producing invocation
  std::map<std::string, std::string> metadata;  // seed, tolerances, timestamps
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;  // each row matches columns in length

  void addRow(std::vector<double> row);
  bool operator==(const OutputRecord& other) const = default;
};

// Shortest representation that round-trips the double exactly.
std::string format_double(double x);

std::string to_csv(const OutputRecord& record);
std::string to_json(const OutputRecord& record);

// Parsers reject records whose schema field is missing or unknown and rows
// whose length disagrees with the header.
OutputRecord from_csv(const std::string& text);
OutputRecord from_json(const std::string& text);

// Writes text to path; throws std::runtime_error when the file is unwritable.
void write_file(const std::string& path, const std::string& text);

}  // namespace symroof::output
