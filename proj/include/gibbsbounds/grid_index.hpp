#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "gibbsbounds/geometry.hpp"

namespace gibbsbounds {

// Cell list over a window. Cells are at least `min_cell_size` wide, so range
// queries with radius <= min_cell_size touch at most 3^d cells. Stores point
// ids together with their coordinates (interleaved per cell) for locality;
// the caller owns id assignment and must pass matching coordinates to erase().
class GridIndex {
 public:
  static constexpr int kMaxDim = 16;

  GridIndex(const Window& window, double min_cell_size, Metric metric = Metric::euclidean)
      : window_(window), metric_(metric), dim_(window.dim()) {
    if (!(min_cell_size > 0.0)) throw std::invalid_argument("GridIndex: cell size must be > 0");
    if (dim_ > kMaxDim) throw std::invalid_argument("GridIndex: dimension cap is 16");
    max_radius_ = min_cell_size;
    n_cells_.resize(dim_);
    inv_width_.resize(dim_);
    std::size_t total = 1;
    for (int a = 0; a < dim_; ++a) {
      n_cells_[a] = std::max(1, static_cast<int>(window.extent(a) / min_cell_size));
      inv_width_[a] = n_cells_[a] / window.extent(a);
      total *= static_cast<std::size_t>(n_cells_[a]);
    }
    cell_ids_.resize(total);
    cell_coords_.resize(total);
  }

  std::size_t size() const { return size_; }
  Metric metric() const { return metric_; }

  void clear() {
    for (auto& c : cell_ids_) c.clear();
    for (auto& c : cell_coords_) c.clear();
    size_ = 0;
  }

  void insert(std::uint32_t id, std::span<const double> x) {
    const std::size_t c = cell_of(x);
    cell_ids_[c].push_back(id);
    cell_coords_[c].insert(cell_coords_[c].end(), x.begin(), x.end());
    ++size_;
  }

  void erase(std::uint32_t id, std::span<const double> x) {
    const std::size_t c = cell_of(x);
    auto& ids = cell_ids_[c];
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (ids[i] != id) continue;
      const std::size_t last = ids.size() - 1;
      ids[i] = ids[last];
      auto& xs = cell_coords_[c];
      for (int a = 0; a < dim_; ++a) xs[i * dim_ + a] = xs[last * dim_ + a];
      ids.pop_back();
      xs.resize(last * dim_);
      --size_;
      return;
    }
    throw std::logic_error("GridIndex::erase: id not found in its cell");
  }

  // Visits f(id, squared distance) for every stored point within `radius` of
  // x. Requires radius <= the construction cell size.
  template <class F>
  void for_each_within(std::span<const double> x, double radius, F&& f) const {
    if (radius > max_radius_ * (1.0 + 1e-12))
      throw std::invalid_argument("GridIndex: query radius exceeds cell size");
    const double r2 = radius * radius;

    int axis_cells[3 * kMaxDim];  // up to 3 candidate cells per axis
    int axis_count[kMaxDim];
    for (int a = 0; a < dim_; ++a) {
      const int c = cell_coord(x[a], a);
      int* candidates = axis_cells + 3 * a;
      int m = 0;
      for (int off = -1; off <= 1; ++off) {
        int cc = c + off;
        if (metric_ == Metric::toroidal) {
          cc = (cc % n_cells_[a] + n_cells_[a]) % n_cells_[a];
        } else if (cc < 0 || cc >= n_cells_[a]) {
          continue;
        }
        bool dup = false;
        for (int j = 0; j < m; ++j) dup |= (candidates[j] == cc);
        if (!dup) candidates[m++] = cc;
      }
      axis_count[a] = m;
    }

    int pick[kMaxDim] = {};
    while (true) {
      std::size_t cell = 0;
      for (int a = 0; a < dim_; ++a) cell = cell * n_cells_[a] + axis_cells[3 * a + pick[a]];
      const auto& ids = cell_ids_[cell];
      const auto& xs = cell_coords_[cell];
      for (std::size_t i = 0; i < ids.size(); ++i) {
        const std::span<const double> y{xs.data() + i * dim_, static_cast<std::size_t>(dim_)};
        const double d2 = sq_distance(x, y, window_, metric_);
        if (d2 <= r2) f(ids[i], d2);
      }
      int a = 0;
      for (; a < dim_; ++a) {
        if (++pick[a] < axis_count[a]) break;
        pick[a] = 0;
      }
      if (a == dim_) break;
    }
  }

 private:
  int cell_coord(double v, int axis) const {
    int c = static_cast<int>((v - window_.lower()[axis]) * inv_width_[axis]);
    return std::clamp(c, 0, n_cells_[axis] - 1);
  }

  std::size_t cell_of(std::span<const double> x) const {
    std::size_t cell = 0;
    for (int a = 0; a < dim_; ++a) cell = cell * n_cells_[a] + cell_coord(x[a], a);
    return cell;
  }

  Window window_;
  Metric metric_;
  int dim_;
  double max_radius_;
  std::vector<int> n_cells_;
  std::vector<double> inv_width_;
  std::vector<std::vector<std::uint32_t>> cell_ids_;
  std::vector<std::vector<double>> cell_coords_;
  std::size_t size_ = 0;
};

}  // namespace gibbsbounds
