#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "gmim/common.hpp"

// Text-file plumbing shared by the dataset loader, the diffusion cache and
// the run-directory writers. Formats are plain TSV, LF line endings.

namespace gmim::io {

inline std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find('\t', start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

inline std::vector<std::string> read_lines(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw io_error(file.string() + ": cannot open file");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

inline long parse_long(const std::string& token, const std::filesystem::path& file, std::size_t lineno) {
  char* end = nullptr;
  errno = 0;
  long v = std::strtol(token.c_str(), &end, 10);
  if (errno != 0 || end == token.c_str() || *end != '\0')
    throw io_error(file.string() + ":" + std::to_string(lineno) + ": expected integer, got \"" + token + "\"");
  return v;
}

inline double parse_double(const std::string& token, const std::filesystem::path& file, std::size_t lineno) {
  char* end = nullptr;
  errno = 0;
  double v = std::strtod(token.c_str(), &end);
  if (end == token.c_str() || *end != '\0')
    throw io_error(file.string() + ":" + std::to_string(lineno) + ": expected number, got \"" + token + "\"");
  return v;
}

inline std::ofstream open_out(const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw io_error(file.string() + ": cannot open for writing");
  return out;
}

inline void write_matrix_tsv(const Matrix& m, const std::filesystem::path& file) {
  std::ofstream out = open_out(file);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << '\t';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

inline std::vector<int> read_labels_tsv(const std::filesystem::path& file) {
  std::vector<int> labels;
  const auto lines = read_lines(file);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) {
      if (i + 1 == lines.size()) break;  // trailing newline
      throw io_error(file.string() + ":" + std::to_string(i + 1) + ": empty line");
    }
    long v = parse_long(lines[i], file, i + 1);
    if (v < 0) throw io_error(file.string() + ":" + std::to_string(i + 1) + ": negative label");
    labels.push_back(static_cast<int>(v));
  }
  return labels;
}

inline void write_labels_tsv(const std::vector<int>& labels, const std::filesystem::path& file) {
  std::ofstream out = open_out(file);
  for (int v : labels) out << v << '\n';
}

}  // namespace gmim::io
