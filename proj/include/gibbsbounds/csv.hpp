#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gibbsbounds/geometry.hpp"
#include "gibbsbounds/interval.hpp"

namespace gibbsbounds {

// Shortest round-trip decimal form; keeps CSV output byte-stable.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// Pattern CSV: header x1,...,xd then one point per row.
inline std::string pattern_to_csv(const PointPattern& pattern) {
  std::string out;
  for (int a = 0; a < pattern.dim(); ++a) {
    if (a) out += ',';
    out += 'x';
    out += std::to_string(a + 1);
  }
  out += '\n';
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    const auto p = pattern.point(i);
    for (int a = 0; a < pattern.dim(); ++a) {
      if (a) out += ',';
      out += format_double(p[a]);
    }
    out += '\n';
  }
  return out;
}

inline PointPattern pattern_from_csv(const std::string& text, Window window) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("pattern CSV: missing header");
  PointPattern pat(std::move(window));
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::vector<double> x;
    std::size_t start = 0;
    while (start <= line.size()) {
      const std::size_t comma = line.find(',', start);
      const std::string_view field(line.data() + start,
                                   (comma == std::string::npos ? line.size() : comma) - start);
      double v = 0.0;
      const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
      if (res.ec != std::errc{})
        throw std::invalid_argument("pattern CSV: bad number at row " + std::to_string(row));
      x.push_back(v);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (static_cast<int>(x.size()) != pat.dim())
      throw std::invalid_argument("pattern CSV: wrong column count at row " + std::to_string(row));
    pat.add(x);
  }
  return pat;
}

// Band CSV: t,lower,upper plus estimate,std_err columns when present.
inline std::string band_to_csv(const CurveBand& band) {
  band.validate();
  const bool with_est = !band.estimate.empty();
  std::string out = with_est ? "t,lower,upper,estimate,std_err\n" : "t,lower,upper\n";
  for (std::size_t i = 0; i < band.abscissae.size(); ++i) {
    out += format_double(band.abscissae[i]);
    out += ',';
    out += format_double(band.bands[i].lower);
    out += ',';
    out += format_double(band.bands[i].upper);
    if (with_est) {
      out += ',';
      out += format_double(band.estimate[i]);
      out += ',';
      out += band.std_err.empty() ? "nan" : format_double(band.std_err[i]);
    }
    out += '\n';
  }
  return out;
}

// Estimate-only curve CSV: t,estimate,std_err.
inline std::string curve_to_csv(std::span<const double> t, std::span<const double> estimate,
                                std::span<const double> std_err) {
  std::string out = "t,estimate,std_err\n";
  for (std::size_t i = 0; i < t.size(); ++i) {
    out += format_double(t[i]);
    out += ',';
    out += format_double(estimate[i]);
    out += ',';
    out += std_err.empty() ? "nan" : format_double(std_err[i]);
    out += '\n';
  }
  return out;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace gibbsbounds
