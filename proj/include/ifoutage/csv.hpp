#pragma once

// CSV plumbing shared by the CLI and tests: deterministic number formatting,
// the channel file format, and spectrum serialization.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ifoutage/channel.hpp"

namespace ifoutage {

// Fixed "%.12g" formatting with '.' decimal separator, independent of locale.
inline std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

inline std::string spectrum_to_string(const SpectrumD& s) {
  std::string out;
  for (std::size_t i = 0; i < s.d().size(); ++i) {
    if (i) out += ';';
    out += fmt_double(s.d()[i]);
  }
  return out;
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (const char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace detail

// Channel file format: a "nr,nt" header line, the dimensions, a
// "row,col,re,im" header line, then one entry per line (0-based indices;
// missing entries are zero).
inline ComplexChannel read_channel_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open channel file: " + path);
  std::string line;
  if (!std::getline(in, line) || detail::split_csv_line(line)[0] != "nr")
    throw std::invalid_argument("channel file: expected 'nr,nt' header");
  if (!std::getline(in, line))
    throw std::invalid_argument("channel file: missing dimensions");
  const auto dims = detail::split_csv_line(line);
  if (dims.size() != 2)
    throw std::invalid_argument("channel file: malformed dimensions");
  const int nr = std::stoi(dims[0]);
  const int nt = std::stoi(dims[1]);
  if (nr < 1 || nt < 1)
    throw std::invalid_argument("channel file: dimensions must be >= 1");
  if (!std::getline(in, line) || detail::split_csv_line(line)[0] != "row")
    throw std::invalid_argument("channel file: expected 'row,col,re,im' header");
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(nr, nt);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = detail::split_csv_line(line);
    if (f.size() != 4)
      throw std::invalid_argument("channel file: malformed entry line");
    const int r = std::stoi(f[0]);
    const int c = std::stoi(f[1]);
    if (r < 0 || r >= nr || c < 0 || c >= nt)
      throw std::invalid_argument("channel file: index out of range");
    h(r, c) = std::complex<double>(std::stod(f[2]), std::stod(f[3]));
  }
  return ComplexChannel(std::move(h));
}

inline void write_channel_csv(const std::string& path,
                              const ComplexChannel& h) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write channel file: " + path);
  out << "nr,nt\n" << h.n_r() << ',' << h.n_t() << "\nrow,col,re,im\n";
  for (int r = 0; r < h.n_r(); ++r)
    for (int c = 0; c < h.n_t(); ++c)
      out << r << ',' << c << ',' << fmt_double(h.entries()(r, c).real())
          << ',' << fmt_double(h.entries()(r, c).imag()) << '\n';
}

}  // namespace ifoutage
