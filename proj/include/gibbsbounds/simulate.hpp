#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gibbsbounds/errors.hpp"
#include "gibbsbounds/geometry.hpp"
#include "gibbsbounds/grid_index.hpp"
#include "gibbsbounds/interaction.hpp"
#include "gibbsbounds/rng.hpp"

namespace gibbsbounds {

namespace detail {

// Interaction lookup keyed by squared distance; avoids sqrt in samplers.
struct PhiSquaredTable {
  std::vector<double> s2;
  std::vector<double> v;

  explicit PhiSquaredTable(const RadialStepInteraction& f) {
    s2.reserve(f.num_steps());
    for (double s : f.breakpoints()) s2.push_back(s * s);
    v = f.values();
  }

  double operator()(double d2) const {
    for (std::size_t i = 0; i < s2.size(); ++i)
      if (d2 <= s2[i]) return v[i];
    return 1.0;
  }
};

}  // namespace detail

// Binomial-process realisation of a homogeneous Poisson process: Poisson
// count, i.i.d. uniform locations.
inline PointPattern sample_poisson(const Window& window, double intensity, RngSeed seed) {
  if (intensity < 0.0) throw std::invalid_argument("sample_poisson: intensity must be >= 0");
  Rng rng(seed);
  PointPattern pat(window);
  const std::uint64_t n = rng.poisson(intensity * window.volume());
  std::vector<double> x(window.dim());
  for (std::uint64_t i = 0; i < n; ++i) {
    rng.uniform_point(window, x);
    pat.add(x);
  }
  return pat;
}

// Birth-death Metropolis-Hastings chain targeting PIP(beta, phi) on the
// window, started from the empty configuration. Each step proposes with
// probability 1/2 a birth at a uniform location (accepted with
// min(1, lambda(u|xi) |W| / (n+1))) or the deletion of a uniformly chosen
// point (accepted with min(1, n / (lambda(x|xi\x) |W|))). Neighbour products
// go through a cell list, so a step costs O(local points).
inline PointPattern sample_mh(const PairwiseModel& model, const Window& window,
                              std::uint64_t steps, RngSeed seed,
                              Metric metric = Metric::euclidean) {
  if (model.dim() != window.dim())
    throw std::invalid_argument("sample_mh: model/window dimension mismatch");
  Rng rng(seed);
  const int d = model.dim();
  const double beta = model.beta();
  const double volume = window.volume();
  const double range = model.range();
  const detail::PhiSquaredTable phi2(model.interaction());

  GridIndex grid(window, range, metric);
  std::vector<double> coords;          // slot id -> d coordinates
  std::vector<std::uint32_t> free_slots;
  std::vector<std::uint32_t> active;   // dense list of live slot ids
  std::vector<std::uint32_t> active_pos;  // slot id -> index in `active`

  std::vector<double> x(d);
  auto lambda_at = [&](std::span<const double> y, std::uint32_t exclude) {
    double lam = beta;
    grid.for_each_within(y, range, [&](std::uint32_t id, double d2) {
      if (id != exclude && d2 > 0.0) lam *= phi2(d2);
    });
    return lam;
  };
  const std::uint32_t kNone = 0xffffffffu;

  for (std::uint64_t step = 0; step < steps; ++step) {
    if (rng.uniform01() < 0.5) {
      rng.uniform_point(window, x);
      const double lam = lambda_at(x, kNone);
      const double ratio = lam * volume / (active.size() + 1.0);
      if (ratio >= 1.0 || rng.uniform01() < ratio) {
        std::uint32_t slot;
        if (!free_slots.empty()) {
          slot = free_slots.back();
          free_slots.pop_back();
          for (int a = 0; a < d; ++a) coords[slot * d + a] = x[a];
        } else {
          slot = static_cast<std::uint32_t>(coords.size() / d);
          coords.insert(coords.end(), x.begin(), x.end());
          active_pos.push_back(0);
        }
        grid.insert(slot, {coords.data() + slot * d, static_cast<std::size_t>(d)});
        active_pos[slot] = static_cast<std::uint32_t>(active.size());
        active.push_back(slot);
      }
    } else if (!active.empty()) {
      const std::uint32_t k = static_cast<std::uint32_t>(rng.uniform_index(active.size()));
      const std::uint32_t slot = active[k];
      const std::span<const double> y{coords.data() + slot * d, static_cast<std::size_t>(d)};
      const double lam = lambda_at(y, slot);
      const double denom = lam * volume;
      const bool accept =
          denom <= 0.0 || active.size() >= denom || rng.uniform01() < active.size() / denom;
      if (accept) {
        grid.erase(slot, y);
        active[k] = active.back();
        active_pos[active[k]] = k;
        active.pop_back();
        free_slots.push_back(slot);
      }
    }
  }

  PointPattern pat(window);
  for (std::uint32_t slot : active)
    pat.add({coords.data() + slot * d, static_cast<std::size_t>(d)});
  return pat;
}

struct DcftpOptions {
  std::uint64_t max_events = std::uint64_t{1} << 30;
  double initial_horizon = 1.0;
};

// Dominated coupling from the past for inhibitory pairwise interaction
// processes. The dominating process is the spatial immigration-death process
// with birth rate beta |W| and unit per-capita death rate (stationary law:
// the Poisson process with intensity beta); it is extended backwards by
// reversibility. Upper and lower funnel processes evolve forwards through the
// recorded birth/death events with crossed thinning tests (a birth enters the
// upper process when its mark passes against the lower configuration and vice
// versa, the correct monotone envelope for phi <= 1); the horizon doubles,
// reusing all recorded events, until the funnels coalesce at time zero, which
// yields an exact draw.
inline PointPattern sample_dcftp(const PairwiseModel& model, const Window& window, RngSeed seed,
                                 const DcftpOptions& options = {}) {
  if (model.dim() != window.dim())
    throw std::invalid_argument("sample_dcftp: model/window dimension mismatch");
  Rng rng(seed);
  const int d = model.dim();
  const double beta = model.beta();
  const double volume = window.volume();
  const double range = model.range();
  const detail::PhiSquaredTable phi2(model.interaction());

  struct Event {
    double time;  // forward time in (-T, 0]
    std::uint32_t id;
    bool is_birth;  // forward birth (carries a thinning mark)
    double mark;
  };

  std::vector<double> coords;  // id -> d coordinates
  auto point_of = [&](std::uint32_t id) {
    return std::span<const double>{coords.data() + std::size_t{id} * d,
                                   static_cast<std::size_t>(d)};
  };
  auto new_point = [&](Rng& r) {
    const std::uint32_t id = static_cast<std::uint32_t>(coords.size() / d);
    coords.resize(coords.size() + d);
    r.uniform_point(window, {coords.data() + std::size_t{id} * d, static_cast<std::size_t>(d)});
    return id;
  };

  std::vector<Event> events;                    // decreasing forward time
  std::vector<std::uint32_t> frontier;          // alive at the backward frontier
  std::vector<std::vector<std::uint32_t>> state_at_horizon;

  // dominating state at time 0
  const std::uint64_t n0 = rng.poisson(beta * volume);
  for (std::uint64_t i = 0; i < n0; ++i) frontier.push_back(new_point(rng));

  double frontier_time = 0.0;  // backward elapsed time
  std::uint64_t events_used = 0;

  for (double horizon = options.initial_horizon;; horizon *= 2.0) {
    // extend the backward simulation to the new horizon
    while (true) {
      const double rate = beta * volume + static_cast<double>(frontier.size());
      const double dt = rng.exponential(rate);
      if (frontier_time + dt > horizon) {
        frontier_time = horizon;  // memoryless restart at the horizon
        break;
      }
      frontier_time += dt;
      if (++events_used > options.max_events)
        throw NonConvergenceError("sample_dcftp: event budget exhausted before coalescence",
                                  events_used, frontier_time, frontier.size());
      if (rng.uniform01() * rate < beta * volume) {
        // backward immigration = forward death
        const std::uint32_t id = new_point(rng);
        frontier.push_back(id);
        events.push_back({-frontier_time, id, false, 0.0});
      } else {
        // backward death = forward birth, thinning mark attached
        const std::uint64_t k = rng.uniform_index(frontier.size());
        const std::uint32_t id = frontier[k];
        frontier[k] = frontier.back();
        frontier.pop_back();
        events.push_back({-frontier_time, id, true, rng.uniform01()});
      }
    }
    state_at_horizon.push_back(frontier);

    // funnel sweep from -horizon to 0
    const std::size_t n_ids = coords.size() / d;
    std::vector<std::uint8_t> in_upper(n_ids, 0), in_lower(n_ids, 0);
    GridIndex upper(window, range), lower(window, range);
    for (std::uint32_t id : state_at_horizon.back()) {
      in_upper[id] = 1;
      upper.insert(id, point_of(id));
    }
    auto lambda_in = [&](const GridIndex& grid, std::span<const double> y) {
      double lam = beta;
      grid.for_each_within(y, range, [&](std::uint32_t, double d2) {
        if (d2 > 0.0) lam *= phi2(d2);
      });
      return lam;
    };
    for (auto it = events.rbegin(); it != events.rend(); ++it) {
      const auto y = point_of(it->id);
      if (it->is_birth) {
        const double lam_lower_cfg = lambda_in(lower, y);
        const double lam_upper_cfg = lambda_in(upper, y);
        if (it->mark * beta <= lam_lower_cfg) {  // most permissive config
          in_upper[it->id] = 1;
          upper.insert(it->id, y);
        }
        if (it->mark * beta <= lam_upper_cfg) {  // most restrictive config
          in_lower[it->id] = 1;
          lower.insert(it->id, y);
        }
      } else {
        if (in_upper[it->id]) {
          in_upper[it->id] = 0;
          upper.erase(it->id, y);
        }
        if (in_lower[it->id]) {
          in_lower[it->id] = 0;
          lower.erase(it->id, y);
        }
      }
    }
    if (upper.size() == lower.size()) {
      PointPattern pat(window);
      for (std::uint32_t id = 0; id < n_ids; ++id)
        if (in_upper[id]) pat.add(point_of(id));
      return pat;
    }
  }
}

// Count trajectory of the spatial immigration-death process on a region of
// the given volume: immigration rate nu * volume, unit per-capita death rate.
// Only counts are tracked. Returns the count at each query time (which must
// be nondecreasing).
inline std::vector<std::uint64_t> sample_immigration_death(double region_volume, double nu,
                                                           std::uint64_t initial_count,
                                                           std::span<const double> times,
                                                           RngSeed seed) {
  if (!(region_volume > 0.0)) throw std::invalid_argument("immigration_death: volume must be > 0");
  if (!(nu > 0.0)) throw std::invalid_argument("immigration_death: nu must be > 0");
  Rng rng(seed);
  const double birth_rate = nu * region_volume;
  std::uint64_t n = initial_count;
  double t = 0.0;
  std::vector<std::uint64_t> out;
  out.reserve(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < t || (i > 0 && times[i] < times[i - 1]))
      throw std::invalid_argument("immigration_death: query times must be nondecreasing");
    while (true) {
      const double rate = birth_rate + static_cast<double>(n);
      const double dt = rng.exponential(rate);
      if (t + dt > times[i]) {
        t = times[i];
        break;
      }
      t += dt;
      if (rng.uniform01() * rate < birth_rate) ++n;
      else --n;
    }
    out.push_back(n);
  }
  return out;
}

inline std::uint64_t sample_immigration_death(double region_volume, double nu,
                                              std::uint64_t initial_count, double t_end,
                                              RngSeed seed) {
  if (t_end == 0.0) return initial_count;
  const double times[1] = {t_end};
  return sample_immigration_death(region_volume, nu, initial_count, times, seed).back();
}

}  // namespace gibbsbounds
