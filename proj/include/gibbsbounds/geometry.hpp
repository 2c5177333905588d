#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace gibbsbounds {

enum class Metric { euclidean, toroidal };

// Axis-aligned box in R^d with strictly positive volume.
class Window {
 public:
  Window(std::vector<double> lower, std::vector<double> upper)
      : lower_(std::move(lower)), upper_(std::move(upper)) {
    if (lower_.empty() || lower_.size() != upper_.size())
      throw std::invalid_argument("Window: corner dimensions must match and be >= 1");
    for (std::size_t i = 0; i < lower_.size(); ++i)
      if (!(upper_[i] > lower_[i]))
        throw std::invalid_argument("Window: upper corner must strictly dominate lower corner");
  }

  int dim() const { return static_cast<int>(lower_.size()); }
  const std::vector<double>& lower() const { return lower_; }
  const std::vector<double>& upper() const { return upper_; }
  double extent(int axis) const { return upper_[axis] - lower_[axis]; }

  double volume() const {
    double v = 1.0;
    for (std::size_t i = 0; i < lower_.size(); ++i) v *= upper_[i] - lower_[i];
    return v;
  }

  bool contains(std::span<const double> x) const {
    if (x.size() != lower_.size()) return false;
    for (std::size_t i = 0; i < lower_.size(); ++i)
      if (x[i] < lower_[i] || x[i] > upper_[i]) return false;
    return true;
  }

  // Distance from x to the nearest face; negative if x is outside.
  double boundary_margin(std::span<const double> x) const {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < lower_.size(); ++i) {
      m = std::min(m, x[i] - lower_[i]);
      m = std::min(m, upper_[i] - x[i]);
    }
    return m;
  }

  Window dilated(double w) const {
    std::vector<double> lo(lower_), hi(upper_);
    for (std::size_t i = 0; i < lo.size(); ++i) {
      lo[i] -= w;
      hi[i] += w;
    }
    return Window(std::move(lo), std::move(hi));
  }

  Window eroded(double w) const { return dilated(-w); }

 private:
  std::vector<double> lower_;
  std::vector<double> upper_;
};

inline double sq_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

// Squared distance under the chosen metric; toroidal wraps per axis of `w`.
inline double sq_distance(std::span<const double> a, std::span<const double> b, const Window& w,
                          Metric metric) {
  if (metric == Metric::euclidean) return sq_distance(a, b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = std::abs(a[i] - b[i]);
    const double ext = w.extent(static_cast<int>(i));
    if (d > 0.5 * ext) d = ext - d;
    s += d * d;
  }
  return s;
}

// Finite simple configuration in a window. Coordinates are stored flat,
// point i occupying [i*d, (i+1)*d).
class PointPattern {
 public:
  explicit PointPattern(Window window) : window_(std::move(window)) {}

  PointPattern(Window window, const std::vector<std::vector<double>>& pts)
      : window_(std::move(window)) {
    coords_.reserve(pts.size() * window_.dim());
    for (const auto& p : pts) add(p);
  }

  int dim() const { return window_.dim(); }
  std::size_t size() const { return coords_.size() / window_.dim(); }
  const Window& window() const { return window_; }
  const std::vector<double>& coords() const { return coords_; }

  std::span<const double> point(std::size_t i) const {
    const std::size_t d = window_.dim();
    return {coords_.data() + i * d, d};
  }

  void add(std::span<const double> x) {
    if (!window_.contains(x)) throw std::invalid_argument("PointPattern: point outside window");
    coords_.insert(coords_.end(), x.begin(), x.end());
  }

  std::size_t count_in(const Window& sub) const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < size(); ++i)
      if (sub.contains(point(i))) ++n;
    return n;
  }

  // Simplicity check (no duplicate locations); quadratic, test use only.
  bool is_simple() const {
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t j = i + 1; j < size(); ++j)
        if (sq_distance(point(i), point(j)) == 0.0) return false;
    return true;
  }

 private:
  Window window_;
  std::vector<double> coords_;
};

}  // namespace gibbsbounds
