#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace epos {

/// Writes to a sibling temporary file and renames it over `path`, so readers
/// never observe a partial file. Creates missing parent directories.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);
std::string read_file(const std::filesystem::path& path);

/// Shortest round-trip decimal ("%.17g").
std::string format_double(double x);
/// Exact hexadecimal float text ("%a") and its inverse.
std::string hex_double(double x);
double parse_hex_double(const std::string& s);

}  // namespace epos
