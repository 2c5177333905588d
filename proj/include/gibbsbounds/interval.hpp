#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace gibbsbounds {

// Ordered pair of reals; the universal bound-result type.
struct Interval {
  double lower = 0.0;
  double upper = 0.0;

  Interval() = default;
  Interval(double lo, double up) : lower(lo), upper(up) {
    if (!(lower <= upper)) throw std::invalid_argument("Interval: lower must be <= upper");
  }

  double width() const { return upper - lower; }
  bool contains(double v) const { return lower <= v && v <= upper; }
  bool is_point() const { return lower == upper; }
};

// Per-abscissa interval band with optional empirical estimate and standard
// error columns (empty or the same length as the grid).
struct CurveBand {
  std::vector<double> abscissae;
  std::vector<Interval> bands;
  std::vector<double> estimate;
  std::vector<double> std_err;

  void validate() const {
    if (bands.size() != abscissae.size())
      throw std::invalid_argument("CurveBand: band/abscissae length mismatch");
    if (!estimate.empty() && estimate.size() != abscissae.size())
      throw std::invalid_argument("CurveBand: estimate length mismatch");
    if (!std_err.empty() && std_err.size() != abscissae.size())
      throw std::invalid_argument("CurveBand: std_err length mismatch");
    for (std::size_t i = 1; i < abscissae.size(); ++i)
      if (!(abscissae[i] >= abscissae[i - 1]))
        throw std::invalid_argument("CurveBand: abscissae must be nondecreasing");
  }
};

inline std::vector<double> linspace(double lo, double hi, int count) {
  if (count < 2) throw std::invalid_argument("linspace: need count >= 2");
  std::vector<double> g(count);
  for (int i = 0; i < count; ++i) g[i] = lo + (hi - lo) * i / (count - 1);
  return g;
}

}  // namespace gibbsbounds
