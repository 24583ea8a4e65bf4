#include "osfs/trace_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string_view>
#include <system_error>
#include <vector>

namespace osfs {

namespace {

char sniff_delimiter(const std::string& header) {
  for (char c : header) {
    if (c == ',' || c == ';' || c == '\t') return c;
  }
  return ',';
}

std::vector<std::string> split_line(const std::string& line, char delim) {
  std::vector<std::string> cells;
  std::size_t begin = 0;
  while (true) {
    const auto end = line.find(delim, begin);
    std::string cell = line.substr(begin, end == std::string::npos ? end : end - begin);
    if (!cell.empty() && cell.back() == '\r') cell.pop_back();
    cells.push_back(std::move(cell));
    if (end == std::string::npos) break;
    begin = end + 1;
  }
  return cells;
}

double parse_cell(const std::string& cell, std::int64_t line_no, const std::string& column) {
  if (cell.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::string_view sv = cell;
  if (sv.front() == '+') sv.remove_prefix(1);
  double value = 0.0;
  const auto* begin = sv.data();
  const auto* end = sv.data() + sv.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) {
    throw std::runtime_error("line " + std::to_string(line_no) + ", column '" + column +
                             "': non-numeric cell '" + cell + "'");
  }
  return value;
}

void format_cell(std::string& out, double value) {
  if (std::isnan(value)) return;  // missing -> empty cell
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
  out.append(buf, ptr);
}

}  // namespace

TraceWindow load_trace(const std::filesystem::path& path, const std::string& target_name) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open trace file: " + path.string());
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("trace file is empty: " + path.string());
  }
  const char delim = sniff_delimiter(line);
  const auto header = split_line(line, delim);

  std::size_t target_col = header.size();
  std::vector<std::string> names;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == target_name) {
      if (target_col != header.size()) {
        throw std::runtime_error("target column appears twice: " + target_name);
      }
      target_col = i;
    } else {
      names.push_back(header[i]);
    }
  }
  if (target_col == header.size()) {
    throw std::runtime_error("target column not found: " + target_name);
  }

  TraceWindow window{FeatureCatalog(std::move(names))};
  std::int64_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;  // tolerate a trailing newline
    const auto cells = split_line(line, delim);
    if (cells.size() != header.size()) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": expected " +
                               std::to_string(header.size()) + " cells, got " +
                               std::to_string(cells.size()));
    }
    Sample s;
    s.t = window.length() + 1;
    s.values.reserve(header.size() - 1);
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const double v = parse_cell(cells[i], line_no, header[i]);
      if (i == target_col) {
        if (!std::isnan(v)) s.target = v;
      } else {
        s.values.push_back(v);
      }
    }
    window.append(s);
  }
  return window;
}

void write_trace(const TraceWindow& window, const std::filesystem::path& path,
                 const std::string& target_name) {
  if (window.catalog().index_of(target_name)) {
    throw std::invalid_argument("write_trace: target name collides with a feature: " +
                                target_name);
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot write trace file: " + path.string());
  }
  std::string line;
  for (const auto& name : window.catalog().names()) {
    line += name;
    line += ',';
  }
  line += target_name;
  line += '\n';
  out << line;

  for (std::int64_t i = 1; i <= window.length(); ++i) {
    line.clear();
    const Sample s = window.row(i);
    for (double v : s.values) {
      format_cell(line, v);
      line += ',';
    }
    if (s.target) format_cell(line, *s.target);
    line += '\n';
    out << line;
  }
  if (!out) {
    throw std::runtime_error("write failed: " + path.string());
  }
}

}  // namespace osfs
