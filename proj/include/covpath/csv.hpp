#pragma once

#include <charconv>
#include <fstream>
#include <string>
#include <system_error>

#include "covpath/errors.hpp"

namespace covpath {

/// Shortest decimal form that parses back to exactly the same double.
inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text) {
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc())
    throw ConfigError("not a number: " + std::string(text));
  return v;
}

/// Line-oriented CSV writer with deterministic byte output.
class CsvFile {
 public:
  explicit CsvFile(const std::string& path)
      : out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw ConfigError("cannot open for writing: " + path);
  }

  CsvFile& cell(const std::string& text) {
    if (!first_) out_ << ',';
    out_ << text;
    first_ = false;
    return *this;
  }

  CsvFile& cell(double v) { return cell(format_double(v)); }
  CsvFile& cell(int v) { return cell(std::to_string(v)); }

  void end_row() {
    out_ << '\n';
    first_ = true;
  }

 private:
  std::ofstream out_;
  bool first_ = true;
};

}  // namespace covpath
