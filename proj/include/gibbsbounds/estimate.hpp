#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "gibbsbounds/geometry.hpp"
#include "gibbsbounds/grid_index.hpp"
#include "gibbsbounds/interaction.hpp"
#include "gibbsbounds/rng.hpp"
#include "gibbsbounds/simulate.hpp"

namespace gibbsbounds {

// Points per unit volume of the inner observation window.
inline double est_intensity(const PointPattern& pattern, const Window& inner) {
  const double volume = inner.volume();
  if (!(volume > 0.0)) throw std::domain_error("est_intensity: inner window has zero volume");
  return static_cast<double>(pattern.count_in(inner)) / volume;
}

namespace detail {

inline void check_t_grid(std::span<const double> t_grid) {
  if (t_grid.empty()) throw std::invalid_argument("estimator: empty t grid");
  double prev = -1.0;
  for (double t : t_grid) {
    if (t < 0.0 || t < prev) throw std::invalid_argument("estimator: t grid must be nondecreasing and >= 0");
    prev = t;
  }
}

// Grid over the pattern for nearest/range queries capped at t_max.
inline GridIndex pattern_grid(const PointPattern& pattern, double t_max, Metric metric) {
  GridIndex grid(pattern.window(), std::max(t_max, 1e-9), metric);
  for (std::size_t i = 0; i < pattern.size(); ++i)
    grid.insert(static_cast<std::uint32_t>(i), pattern.point(i));
  return grid;
}

inline double nearest_distance(const GridIndex& grid, std::span<const double> x, double t_max,
                               std::uint32_t exclude) {
  double best = std::numeric_limits<double>::infinity();
  grid.for_each_within(x, t_max, [&](std::uint32_t id, double d2) {
    if (id != exclude) best = std::min(best, d2);
  });
  return std::sqrt(best);
}

}  // namespace detail

// Border-corrected empty space function estimate: the fraction of lattice
// probe points whose nearest pattern point lies within t. Minus sampling uses
// a single erosion at the largest t, which keeps the curve monotone; probes
// form a regular 100^d lattice over the inner window (capped at 1e6 probes).
// All-NaN output flags an erosion that swallowed every probe. The toroidal
// variant wraps distances and skips the erosion.
inline std::vector<double> est_F(const PointPattern& pattern, const Window& inner,
                                 std::span<const double> t_grid,
                                 Metric metric = Metric::euclidean) {
  detail::check_t_grid(t_grid);
  const int d = inner.dim();
  const double t_max = t_grid.back();
  int m = 100;
  while (std::pow(static_cast<double>(m), d) > 1e6) --m;

  GridIndex grid = detail::pattern_grid(pattern, t_max, metric);
  const std::uint32_t kNone = 0xffffffffu;

  std::vector<double> probe(d);
  std::vector<int> idx(d, 0);
  std::vector<double> nn_dists;
  while (true) {
    for (int a = 0; a < d; ++a)
      probe[a] = inner.lower()[a] + (idx[a] + 0.5) * inner.extent(a) / m;
    const bool keep = metric == Metric::toroidal || inner.boundary_margin(probe) >= t_max;
    if (keep) nn_dists.push_back(detail::nearest_distance(grid, probe, t_max, kNone));
    int a = 0;
    for (; a < d; ++a) {
      if (++idx[a] < m) break;
      idx[a] = 0;
    }
    if (a == d) break;
  }

  std::vector<double> out(t_grid.size(), std::numeric_limits<double>::quiet_NaN());
  if (nn_dists.empty()) return out;
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    std::size_t hit = 0;
    for (double dist : nn_dists)
      if (dist <= t_grid[i]) ++hit;
    out[i] = static_cast<double>(hit) / nn_dists.size();
  }
  return out;
}

// Numerator/denominator of the border-corrected nearest neighbour cdf:
// contributing points are the pattern points in the eroded inner window
// (erosion at the largest t), hits count nearest neighbour distances <= t.
struct NnCdfCounts {
  std::vector<std::size_t> hits;  // per grid t
  std::size_t contributing = 0;
};

inline NnCdfCounts est_G_counts(const PointPattern& pattern, const Window& inner,
                                std::span<const double> t_grid,
                                Metric metric = Metric::euclidean) {
  detail::check_t_grid(t_grid);
  const double t_max = t_grid.back();
  GridIndex grid = detail::pattern_grid(pattern, t_max, metric);

  NnCdfCounts counts;
  counts.hits.assign(t_grid.size(), 0);
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    const auto x = pattern.point(i);
    if (!inner.contains(x)) continue;
    if (metric == Metric::euclidean && inner.boundary_margin(x) < t_max) continue;
    ++counts.contributing;
    const double nn = detail::nearest_distance(grid, x, t_max, static_cast<std::uint32_t>(i));
    for (std::size_t j = 0; j < t_grid.size(); ++j)
      if (nn <= t_grid[j]) ++counts.hits[j];
  }
  return counts;
}

// Border-corrected nearest neighbour distance cdf for a single pattern. NaN
// throughout when no point contributes. Note the per-pattern ratio carries an
// O(1/E[contributing]) downward bias; replicate studies should pool counts
// via pool_nn_counts instead of averaging these curves.
inline std::vector<double> est_G(const PointPattern& pattern, const Window& inner,
                                 std::span<const double> t_grid,
                                 Metric metric = Metric::euclidean) {
  const NnCdfCounts counts = est_G_counts(pattern, inner, t_grid, metric);
  std::vector<double> out(t_grid.size(), std::numeric_limits<double>::quiet_NaN());
  if (counts.contributing == 0) return out;
  for (std::size_t i = 0; i < t_grid.size(); ++i)
    out[i] = static_cast<double>(counts.hits[i]) / counts.contributing;
  return out;
}

// Ratio-of-sums aggregation across replicates with a delta-method standard
// error: p = sum hits / sum contributing, se from the linearised residuals
// hits_i - p * contributing_i.
struct PooledCurve {
  std::vector<double> estimate;
  std::vector<double> std_err;
};

inline PooledCurve pool_nn_counts(const std::vector<NnCdfCounts>& counts) {
  if (counts.empty()) throw std::invalid_argument("pool_nn_counts: no replicates");
  const std::size_t m = counts.front().hits.size();
  const double n = static_cast<double>(counts.size());
  PooledCurve out;
  out.estimate.assign(m, std::numeric_limits<double>::quiet_NaN());
  out.std_err.assign(m, std::numeric_limits<double>::quiet_NaN());

  double total_contributing = 0.0;
  for (const auto& c : counts) total_contributing += static_cast<double>(c.contributing);
  if (total_contributing == 0.0) return out;
  const double mean_contributing = total_contributing / n;

  for (std::size_t j = 0; j < m; ++j) {
    double total_hits = 0.0;
    for (const auto& c : counts) total_hits += static_cast<double>(c.hits[j]);
    const double p = total_hits / total_contributing;
    out.estimate[j] = p;
    if (counts.size() < 2) continue;
    double ss = 0.0;
    for (const auto& c : counts) {
      const double d = static_cast<double>(c.hits[j]) - p * static_cast<double>(c.contributing);
      ss += d * d;
    }
    out.std_err[j] = std::sqrt(ss / (n - 1.0)) / (mean_contributing * std::sqrt(n));
  }
  return out;
}

// Border-corrected pair-count K estimate: ordered pairs with the first point
// in the eroded inner window, scaled by lambda_hat^2 and the eroded volume.
inline std::vector<double> est_K(const PointPattern& pattern, const Window& inner,
                                 std::span<const double> t_grid, double lambda_hat,
                                 Metric metric = Metric::euclidean) {
  detail::check_t_grid(t_grid);
  if (!(lambda_hat > 0.0)) throw std::invalid_argument("est_K: lambda_hat must be > 0");
  const double t_max = t_grid.back();

  double eroded_volume = 1.0;
  if (metric == Metric::euclidean) {
    for (int a = 0; a < inner.dim(); ++a) {
      const double w = inner.extent(a) - 2.0 * t_max;
      if (!(w > 0.0)) throw std::invalid_argument("est_K: erosion exceeds the inner window");
      eroded_volume *= w;
    }
  } else {
    eroded_volume = inner.volume();
  }

  GridIndex grid = detail::pattern_grid(pattern, t_max, metric);
  std::vector<double> pair_dists;
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    const auto x = pattern.point(i);
    if (!inner.contains(x)) continue;
    if (metric == Metric::euclidean && inner.boundary_margin(x) < t_max) continue;
    grid.for_each_within(x, t_max, [&](std::uint32_t id, double d2) {
      if (id != i && d2 > 0.0) pair_dists.push_back(std::sqrt(d2));
    });
  }

  std::vector<double> out(t_grid.size(), 0.0);
  const double scale = 1.0 / (lambda_hat * lambda_hat * eroded_volume);
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    std::size_t hit = 0;
    for (double dist : pair_dists)
      if (dist <= t_grid[i]) ++hit;
    out[i] = static_cast<double>(hit) * scale;
  }
  return out;
}

enum class SamplerKind { poisson, mh, dcftp };

// Mean and standard error per statistic component across replicates, ignoring
// NaN (flagged) entries componentwise.
struct ReplicateSummary {
  std::size_t n_replicates = 0;
  std::vector<std::vector<double>> values;  // one row per replicate
  std::vector<double> mean;
  std::vector<double> std_err;
};

inline void summarize(ReplicateSummary& s) {
  if (s.values.empty()) return;
  const std::size_t m = s.values.front().size();
  s.mean.assign(m, std::numeric_limits<double>::quiet_NaN());
  s.std_err.assign(m, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t j = 0; j < m; ++j) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& row : s.values)
      if (std::isfinite(row[j])) {
        sum += row[j];
        ++n;
      }
    if (n == 0) continue;
    const double mean = sum / n;
    s.mean[j] = mean;
    if (n < 2) continue;
    double ss = 0.0;
    for (const auto& row : s.values)
      if (std::isfinite(row[j])) ss += (row[j] - mean) * (row[j] - mean);
    s.std_err[j] = std::sqrt(ss / (n - 1)) / std::sqrt(static_cast<double>(n));
  }
}

// Runs n independent sampler draws on pre-assigned substreams (stream = base
// + replicate index) and applies `statistic` to each. The thread count only
// affects wall time: replicate i always uses the same stream and results are
// reduced in index order.
inline ReplicateSummary run_replicates(
    const PairwiseModel& model, const Window& sim_window, SamplerKind sampler,
    std::uint64_t mh_steps, std::size_t n,
    const std::function<std::vector<double>(const PointPattern&)>& statistic, RngSeed base,
    unsigned threads = 0) {
  if (n < 1) throw std::invalid_argument("run_replicates: need n >= 1");
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, n);

  ReplicateSummary summary;
  summary.n_replicates = n;
  summary.values.resize(n);
  std::vector<std::string> errors(threads);

  auto worker = [&](unsigned tid) {
    for (std::size_t i = tid; i < n; i += threads) {
      try {
        const RngSeed seed{base.seed, base.stream + i};
        PointPattern pat = [&] {
          switch (sampler) {
            case SamplerKind::poisson: return sample_poisson(sim_window, model.beta(), seed);
            case SamplerKind::mh: return sample_mh(model, sim_window, mh_steps, seed);
            default: return sample_dcftp(model, sim_window, seed);
          }
        }();
        summary.values[i] = statistic(pat);
      } catch (const std::exception& e) {
        if (errors[tid].empty())
          errors[tid] = "replicate " + std::to_string(i) + ": " + e.what();
        return;
      }
    }
  };

  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t);
    for (auto& t : pool) t.join();
  }
  for (const auto& err : errors)
    if (!err.empty()) throw std::runtime_error(err);

  summarize(summary);
  return summary;
}

// Same replicate protocol, returning the raw patterns (for multi-pass
// estimators that need a pooled intensity first).
inline std::vector<PointPattern> run_pattern_replicates(const PairwiseModel& model,
                                                        const Window& sim_window,
                                                        SamplerKind sampler,
                                                        std::uint64_t mh_steps, std::size_t n,
                                                        RngSeed base, unsigned threads = 0) {
  if (n < 1) throw std::invalid_argument("run_pattern_replicates: need n >= 1");
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, n);
  std::vector<PointPattern> out(n, PointPattern(sim_window));
  std::vector<std::string> errors(threads);
  auto worker = [&](unsigned tid) {
    for (std::size_t i = tid; i < n; i += threads) {
      try {
        const RngSeed seed{base.seed, base.stream + i};
        switch (sampler) {
          case SamplerKind::poisson: out[i] = sample_poisson(sim_window, model.beta(), seed); break;
          case SamplerKind::mh: out[i] = sample_mh(model, sim_window, mh_steps, seed); break;
          default: out[i] = sample_dcftp(model, sim_window, seed); break;
        }
      } catch (const std::exception& e) {
        if (errors[tid].empty())
          errors[tid] = "replicate " + std::to_string(i) + ": " + e.what();
        return;
      }
    }
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t);
    for (auto& t : pool) t.join();
  }
  for (const auto& err : errors)
    if (!err.empty()) throw std::runtime_error(err);
  return out;
}

}  // namespace gibbsbounds
