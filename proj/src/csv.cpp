#include "aprop/csv.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

#include "aprop/errors.hpp"

namespace aprop {

std::string format_double(double v) {
  if (v == 0) return "0";
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

CsvWriter::CsvWriter(std::vector<std::string> header) : width_(header.size()) { line(header); }

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != width_) throw DomainError("csv row width mismatch");
  line(cells);
}

void CsvWriter::line(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) buf_ += ',';
    buf_ += cells[i];
  }
  buf_ += '\n';
}

void CsvWriter::write(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << buf_;
}

}  // namespace aprop
