#include "symroof/output.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace symroof::output {
namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
  const std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  parts.push_back(cur);
  return parts;
}

double parse_double(const std::string& s) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::runtime_error("output: malformed number '" + s + "'");
    return v;
  } catch (const std::invalid_argument&) {
    throw std::runtime_error("output: malformed number '" + s + "'");
  } catch (const std::out_of_range&) {
    throw std::runtime_error("output: number out of range '" + s + "'");
  }
}

}  // namespace

void OutputRecord::addRow(std::vector<double> row) {
  if (row.size() != columns.size())
    throw std::invalid_argument("output: row length disagrees with the header");
  rows.push_back(std::move(row));
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string to_csv(const OutputRecord& record) {
  std::ostringstream out;
  out << "# schema=" << record.schema << "\n";
  out << "# command=" << record.command << "\n";
  for (const auto& [key, value] : record.metadata) out << "# " << key << "=" << value << "\n";
  for (std::size_t i = 0; i < record.columns.size(); ++i)
    out << (i ? "," : "") << record.columns[i];
  out << "\n";
  for (const auto& row : record.rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << format_double(row[i]);
    out << "\n";
  }
  return out.str();
}

OutputRecord from_csv(const std::string& text) {
  OutputRecord record;
  record.schema.clear();
  std::istringstream in(text);
  std::string line;
  bool haveHeader = false;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string body = trim(line.substr(1));
      const std::size_t eq = body.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = trim(body.substr(0, eq));
      const std::string value = body.substr(eq + 1);
      if (key == "schema")
        record.schema = value;
      else if (key == "command")
        record.command = value;
      else
        record.metadata[key] = value;
      continue;
    }
    if (!haveHeader) {
      for (const std::string& name : split(line, ',')) record.columns.push_back(trim(name));
      haveHeader = true;
      continue;
    }
    const std::vector<std::string> cells = split(line, ',');
    if (cells.size() != record.columns.size())
      throw std::runtime_error("output: CSV row length disagrees with the header");
    std::vector<double> row;
    row.reserve(cells.size());
    for (const std::string& cell : cells) row.push_back(parse_double(trim(cell)));
    record.rows.push_back(std::move(row));
  }
  if (record.schema != kSchemaVersion)
    throw std::runtime_error("output: missing or unknown schema version in CSV");
  if (!haveHeader) throw std::runtime_error("output: CSV has no header row");
  return record;
}

std::string to_json(const OutputRecord& record) {
  json j;
  j["schema"] = record.schema;
  j["command"] = record.command;
  j["metadata"] = record.metadata;
  j["columns"] = record.columns;
  // Rows as strings to keep the 17-digit round-trip independent of the JSON
  // library's float printer.
  json rows = json::array();
  for (const auto& row : record.rows) {
    json r = json::array();
    for (double v : row) r.push_back(format_double(v));
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return j.dump(2) + "\n";
}

OutputRecord from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    OutputRecord record;
    record.schema = j.value("schema", "");
    if (record.schema != kSchemaVersion)
      throw std::runtime_error("output: missing or unknown schema version in JSON");
    record.command = j.value("command", "");
    if (j.contains("metadata"))
      for (const auto& [key, value] : j.at("metadata").items())
        record.metadata[key] = value.get<std::string>();
    for (const auto& name : j.at("columns")) record.columns.push_back(name.get<std::string>());
    for (const auto& row : j.at("rows")) {
      std::vector<double> r;
      for (const auto& cell : row) r.push_back(parse_double(cell.get<std::string>()));
      if (r.size() != record.columns.size())
        throw std::runtime_error("output: JSON row length disagrees with the header");
      record.rows.push_back(std::move(r));
    }
    return record;
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("output: invalid JSON record: ") + e.what());
  }
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("output: cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("output: short write to '" + path + "'");
}

}  // namespace symroof::output
