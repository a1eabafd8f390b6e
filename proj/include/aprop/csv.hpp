#pragma once

#include <string>
#include <vector>

namespace aprop {

// Shortest round-trip style with 17 significant digits, '.' separator.
std::string format_double(double v);

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  void row(const std::vector<std::string>& cells);
  std::string str() const { return buf_; }
  void write(const std::string& path) const;  // LF line endings

 private:
  void line(const std::vector<std::string>& cells);
  std::size_t width_;
  std::string buf_;
};

}  // namespace aprop
