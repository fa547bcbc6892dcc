#include "lsgd/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <system_error>

#include "lsgd/errors.hpp"

namespace lsgd::io {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<double> parse_numbers(std::string_view line) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos < line.size()) {
    const auto start = line.find_first_not_of(" \t\r", pos);
    if (start == std::string_view::npos) break;
    auto end = line.find_first_of(" \t\r", start);
    if (end == std::string_view::npos) end = line.size();
    out.push_back(parse_double(line.substr(start, end - start)));
    pos = end;
  }
  return out;
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

double parse_double(std::string_view text) {
  text = trim(text);
  if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (text == "inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double x = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    throw DomainError("cannot parse number '" + std::string(text) + "'");
  return x;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw FileError("cannot open '" + tmp.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw FileError("write failed for '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw FileError("cannot move output into place at '" + path.string() + "'");
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Vector read_vector_file(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  std::vector<double> values;
  std::istringstream lines(text);
  for (std::string line; std::getline(lines, line);) {
    if (trim(line).empty()) continue;
    const auto nums = parse_numbers(line);
    if (nums.size() != 1)
      throw DomainError("'" + path.string() + "': expected one scalar per line");
    values.push_back(nums.front());
  }
  if (values.empty()) throw DomainError("'" + path.string() + "': no values");
  return Vector(std::move(values));
}

DenseMatrix read_matrix_file(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  std::istringstream lines(text);
  std::vector<std::vector<double>> rows;
  for (std::string line; std::getline(lines, line);) {
    if (trim(line).empty()) continue;
    rows.push_back(parse_numbers(line));
  }
  if (rows.empty() || rows.front().size() != 1)
    throw DomainError("'" + path.string() + "': first line must hold the dimension n");
  const double nd = rows.front().front();
  if (!(nd >= 1.0) || nd != std::floor(nd))
    throw DomainError("'" + path.string() + "': invalid dimension");
  const auto n = static_cast<std::size_t>(nd);
  if (rows.size() != n + 1)
    throw DomainError("'" + path.string() + "': expected " + std::to_string(n) + " matrix rows");
  DenseMatrix m(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    if (rows[r + 1].size() != n)
      throw DomainError("'" + path.string() + "': row " + std::to_string(r + 1) + " needs " +
                        std::to_string(n) + " entries");
    for (std::size_t c = 0; c < n; ++c) {
      if (!std::isfinite(rows[r + 1][c])) throw DomainError("'" + path.string() + "': non-finite entry");
      m(r, c) = rows[r + 1][c];
    }
  }
  return m;
}

}  // namespace lsgd::io
