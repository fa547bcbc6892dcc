#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "lsgd/linalg.hpp"

namespace lsgd::io {

/// Shortest-safe round-trip text for a double: 17 significant digits,
/// "nan"/"inf"/"-inf" for non-finite values.
std::string format_double(double x);
/// Parses format_double output (and ordinary decimal text). Throws
/// DomainError on trailing garbage.
double parse_double(std::string_view text);

/// Writes to `path.tmp` then renames over `path`. Throws FileError.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

/// One scalar per line; blank lines ignored.
Vector read_vector_file(const std::filesystem::path& path);
/// First line n, then n rows of n whitespace-separated reals.
DenseMatrix read_matrix_file(const std::filesystem::path& path);

}  // namespace lsgd::io
