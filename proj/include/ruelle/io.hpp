#pragma once

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace ruelle {

// Fixed shortest-roundtrip formatting so repeated runs emit identical bytes.
inline std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header) {
    for (std::size_t i = 0; i < header.size(); ++i)
      line_ += (i ? "," : "") + header[i];
    line_ += '\n';
    cols_ = header.size();
  }

  void row(const std::vector<std::string>& cells) {
    if (cells.size() != cols_)
      throw std::invalid_argument("CsvWriter: column count mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i)
      line_ += (i ? "," : "") + cells[i];
    line_ += '\n';
  }

  const std::string& text() const { return line_; }

  void save(const std::string& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("CsvWriter: cannot open " + path);
    os << line_;
  }

 private:
  std::string line_;
  std::size_t cols_ = 0;
};

// Standalone SVG polyline plot with the data embedded as a comment.
void svg_line_plot(const std::string& path, const std::string& title,
                   const std::vector<double>& x,
                   const std::vector<std::vector<double>>& series,
                   const std::vector<std::string>& labels);

}  // namespace ruelle
