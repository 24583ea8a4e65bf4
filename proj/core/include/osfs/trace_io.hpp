#pragma once

#include <filesystem>
#include <string>

#include "osfs/types.hpp"

namespace osfs {

/// Reads a delimited text table (first row = column names, empty cell =
/// missing). The column named `target_name` becomes the target; everything
/// else forms the catalog in file order. Comma, semicolon and tab delimiters
/// are auto-detected from the header.
TraceWindow load_trace(const std::filesystem::path& path, const std::string& target_name);

/// Writes the window back out (comma-delimited, shortest round-trip number
/// formatting) with the target as a final column. load_trace on the result
/// reproduces the window bit-exactly.
void write_trace(const TraceWindow& window, const std::filesystem::path& path,
                 const std::string& target_name = "target");

}  // namespace osfs
