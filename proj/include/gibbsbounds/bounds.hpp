#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "gibbsbounds/interaction.hpp"
#include "gibbsbounds/interval.hpp"
#include "gibbsbounds/lambert.hpp"
#include "gibbsbounds/quadrature.hpp"

namespace gibbsbounds {

// Bounds for the probability generating functional E prod_{y in Xi} g(y) of a
// stationary locally stable Gibbs process with intensity lambda in the given
// interval, stability constant c* and G = int 1 - g:
//   1 - lambda G <= E prod g <= 1 - (lambda/c*)(1 - e^{-c* G}).
// Endpoints are chosen so the enclosure holds for every lambda in the input
// interval, and the result is clamped to [0, 1].
inline Interval pgfl_bounds(Interval lambda, double c_star, double G) {
  if (!(c_star > 0.0)) throw std::invalid_argument("pgfl_bounds: c* must be positive");
  if (lambda.lower < 0.0) throw std::invalid_argument("pgfl_bounds: lambda must be >= 0");
  if (lambda.upper > c_star * (1.0 + 1e-12))
    throw std::invalid_argument("pgfl_bounds: lambda exceeds c*, local stability violated");
  if (!(G >= 0.0)) throw std::invalid_argument("pgfl_bounds: G must be >= 0");
  const double lo = std::clamp(1.0 - lambda.upper * G, 0.0, 1.0);
  const double up = std::clamp(1.0 - (lambda.lower / c_star) * (1.0 - std::exp(-c_star * G)), lo, 1.0);
  return {lo, up};
}

// beta/(1 + beta G) <= lambda <= beta/(2 - e^{-beta G}) for an inhibitory
// pairwise interaction process with finite range.
inline Interval intensity_bounds(double beta, double G) {
  if (!(beta > 0.0)) throw std::invalid_argument("intensity_bounds: beta must be positive");
  if (!(G >= 0.0)) throw std::invalid_argument("intensity_bounds: G must be >= 0");
  return {beta / (1.0 + beta * G), beta / (2.0 - std::exp(-beta * G))};
}

inline Interval intensity_bounds(const PairwiseModel& model) {
  return intensity_bounds(model.beta(), integral_G(model));
}

// Poisson saddlepoint approximation W(beta G)/G; the G -> 0 limit is beta.
inline double lambda_ps(double beta, double G) {
  if (!(beta > 0.0)) throw std::invalid_argument("lambda_ps: beta must be positive");
  if (!(G >= 0.0)) throw std::invalid_argument("lambda_ps: G must be >= 0");
  if (G < 1e-12) return beta;
  return lambert_w0(beta * G) / G;
}

// Mean-field approximation W(beta Gamma)/Gamma; beta when Gamma = 0 and 0
// when Gamma = +infinity (W grows logarithmically).
inline double lambda_mf(double beta, double Gamma) {
  if (!(beta > 0.0)) throw std::invalid_argument("lambda_mf: beta must be positive");
  if (std::isnan(Gamma) || Gamma < 0.0) throw std::invalid_argument("lambda_mf: Gamma must be >= 0");
  if (Gamma == 0.0) return beta;
  if (std::isinf(Gamma)) return 0.0;
  if (Gamma < 1e-12) return beta;
  return lambert_w0(beta * Gamma) / Gamma;
}

// Built-in self test: the saddlepoint value always lies between the two
// intensity bounds.
struct PsBoundsReport {
  double lower = 0.0;
  double lambda_ps = 0.0;
  double upper = 0.0;
  bool inside = false;
};

inline PsBoundsReport lambda_ps_bounds_check(double beta, double G) {
  const Interval b = intensity_bounds(beta, G);
  const double ps = lambda_ps(beta, G);
  return {b.lower, ps, b.upper, b.lower <= ps && ps <= b.upper};
}

// Empty space function band
//   (lambda/c*)(1 - exp(-c* alpha_d t^d)) <= F(t) <= lambda alpha_d t^d,
// upper bound clamped at 1 (F is a cdf).
inline CurveBand f_bounds(Interval lambda, double c_star, int d, std::span<const double> t_grid) {
  if (!(c_star > 0.0)) throw std::invalid_argument("f_bounds: c* must be positive");
  if (lambda.lower < 0.0 || lambda.upper > c_star * (1.0 + 1e-12))
    throw std::invalid_argument("f_bounds: lambda interval must lie within [0, c*]");
  const double alpha = ball_volume(d);
  CurveBand out;
  out.abscissae.assign(t_grid.begin(), t_grid.end());
  out.bands.reserve(t_grid.size());
  for (double t : t_grid) {
    const double vol = alpha * std::pow(t, d);
    const double lo = (lambda.lower / c_star) * (1.0 - std::exp(-c_star * vol));
    const double up = std::min(1.0, lambda.upper * vol);
    out.bands.emplace_back(lo, std::max(lo, up));
  }
  return out;
}

// Nearest neighbour function band, c* = beta:
//   2 - beta/lambda - exp(-beta G~_t) <= G(t) <= 1 - beta/lambda + beta G~_t.
// Both expressions increase in lambda, so the lower endpoint uses lambda_lo
// and the upper one lambda_up; clamped to [0, 1].
inline CurveBand g_bounds(const PairwiseModel& model, Interval lambda,
                          std::span<const double> t_grid) {
  if (!(lambda.lower > 0.0)) throw std::invalid_argument("g_bounds: lambda lower must be > 0");
  if (lambda.upper > model.beta() * (1.0 + 1e-12))
    throw std::invalid_argument("g_bounds: lambda interval must lie within (0, beta]");
  const double beta = model.beta();
  CurveBand out;
  out.abscissae.assign(t_grid.begin(), t_grid.end());
  out.bands.reserve(t_grid.size());
  for (double t : t_grid) {
    const double gt = g_tilde_t(model, t);
    const double lo = std::clamp(2.0 - beta / lambda.lower - std::exp(-beta * gt), 0.0, 1.0);
    const double up = std::clamp(1.0 - beta / lambda.upper + beta * gt, lo, 1.0);
    out.bands.emplace_back(lo, up);
  }
  return out;
}

namespace detail {

// Pair correlation bounds at separation s,
//   phi(s) (beta^2/lambda^2 - beta^2 G~_x / lambda)
//     <= rho(s) <=
//   phi(s) (beta^2/lambda^2 - (beta/lambda)(1 - exp(-beta G~_x))),
// extremised over a grid of lambda values since the dependence on lambda is
// not monotone in general. Lower endpoint clamped at 0.
inline Interval pcf_band_at(const PairwiseModel& model, Interval lambda, double s,
                            int lambda_grid) {
  const double beta = model.beta();
  const double ph = model.interaction().phi(s);
  if (ph == 0.0) return {0.0, 0.0};
  const double gx = g_tilde_x(model, s);
  double lo = std::numeric_limits<double>::infinity();
  double up = -std::numeric_limits<double>::infinity();
  const int n = lambda.is_point() ? 1 : std::max(2, lambda_grid);
  for (int i = 0; i < n; ++i) {
    const double lam =
        (n == 1) ? lambda.lower : lambda.lower + (lambda.upper - lambda.lower) * i / (n - 1);
    const double ratio = beta / lam;
    lo = std::min(lo, ph * (ratio * ratio - beta * ratio * gx));
    up = std::max(up, ph * (ratio * ratio - ratio * (1.0 - std::exp(-beta * gx))));
  }
  lo = std::max(0.0, lo);
  return {lo, std::max(lo, up)};
}

// Panel edges for radial quadrature against pcf bounds: the integrand has
// jumps at interaction breakpoints and kinks where G~_x changes regime
// (pairwise sums and differences of breakpoints).
inline std::vector<double> pcf_panel_edges(const PairwiseModel& model, double t_max,
                                           std::span<const double> extra) {
  std::vector<double> edges{0.0, t_max};
  const auto& bp = model.interaction().breakpoints();
  auto push = [&](double e) {
    if (e > 0.0 && e < t_max) edges.push_back(e);
  };
  for (double a : bp) {
    push(a);
    for (double b : bp) {
      push(a + b);
      push(std::abs(a - b));
    }
  }
  for (double e : extra) push(e);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end(),
                          [](double a, double b) { return std::abs(a - b) < 1e-15; }),
              edges.end());
  return edges;
}

}  // namespace detail

inline CurveBand pcf_bounds(const PairwiseModel& model, Interval lambda,
                            std::span<const double> s_grid, int lambda_grid = 16) {
  if (!(lambda.lower > 0.0)) throw std::invalid_argument("pcf_bounds: lambda lower must be > 0");
  CurveBand out;
  out.abscissae.assign(s_grid.begin(), s_grid.end());
  out.bands.reserve(s_grid.size());
  for (double s : s_grid) out.bands.push_back(detail::pcf_band_at(model, lambda, s, lambda_grid));
  return out;
}

// K function band K(t) = alpha_d d int_0^t s^{d-1} rho(s) ds with the pair
// correlation bounds plugged in; composite 64-node Gauss-Legendre with panels
// split at interaction breakpoints. Bands are nondecreasing in t because the
// integrands are nonnegative.
inline CurveBand k_bounds(const PairwiseModel& model, Interval lambda,
                          std::span<const double> t_grid, int lambda_grid = 16) {
  if (!(lambda.lower > 0.0)) throw std::invalid_argument("k_bounds: lambda lower must be > 0");
  if (t_grid.empty()) return {};
  const int d = model.dim();
  const double prefactor = ball_volume(d) * d;
  const double t_max = t_grid.back();

  auto edges = detail::pcf_panel_edges(model, t_max, t_grid);
  const GaussLegendre rule(64);

  CurveBand out;
  out.abscissae.assign(t_grid.begin(), t_grid.end());
  out.bands.resize(t_grid.size());

  double acc_lo = 0.0, acc_up = 0.0;
  std::size_t next_t = 0;
  auto record_up_to = [&](double edge) {
    while (next_t < t_grid.size() && t_grid[next_t] <= edge + 1e-15) {
      out.bands[next_t] = {prefactor * acc_lo, std::max(prefactor * acc_lo, prefactor * acc_up)};
      ++next_t;
    }
  };
  record_up_to(edges.front());
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double a = edges[p], b = edges[p + 1];
    double panel_lo = 0.0, panel_up = 0.0;
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (std::size_t i = 0; i < rule.nodes().size(); ++i) {
      const double s = mid + half * rule.nodes()[i];
      const Interval band = detail::pcf_band_at(model, lambda, s, lambda_grid);
      const double w = rule.weights()[i] * half * std::pow(s, d - 1);
      panel_lo += w * band.lower;
      panel_up += w * band.upper;
    }
    acc_lo += panel_lo;
    acc_up += panel_up;
    record_up_to(b);
  }
  record_up_to(t_max + 1.0);
  return out;
}

// k-th correlation function band at the given point tuple:
//   lambda_k = beta^k (prod_{i<j} phi(x_i - x_j)) Psi(phi(. - x_1) ... phi(. - x_k)),
// with the p.g.fl. factor bracketed through pgfl_bounds and
// G_k = int 1 - prod_i phi(y - x_i) dy computed on a tensor midpoint grid
// (spacing range/200, roughly 1e-4 relative accuracy) over the bounding box
// of the union of interaction balls; k is expected to stay small.
// k = 1 reduces to intensity_bounds, which is tighter than chaining
// through the p.g.fl. because the intensity solves the bound equation
// self-consistently.
inline Interval correlation_k_bounds(const PairwiseModel& model,
                                     const std::vector<std::vector<double>>& points) {
  if (points.empty()) throw std::invalid_argument("correlation_k_bounds: need k >= 1 points");
  const int d = model.dim();
  for (const auto& p : points)
    if (static_cast<int>(p.size()) != d)
      throw std::invalid_argument("correlation_k_bounds: point dimension mismatch");

  const double G = integral_G(model);
  if (points.size() == 1) return intensity_bounds(model.beta(), G);

  const auto& f = model.interaction();
  double prefactor = std::pow(model.beta(), points.size());
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      const double dist = std::sqrt(sq_distance(points[i], points[j]));
      if (dist == 0.0) throw std::invalid_argument("correlation_k_bounds: points must be distinct");
      prefactor *= f.phi(dist);
    }
  if (prefactor == 0.0) return {0.0, 0.0};

  // G_k over the bounding box of U_i B(x_i, range)
  const double R = f.range();
  std::vector<double> lo(d, std::numeric_limits<double>::infinity());
  std::vector<double> hi(d, -std::numeric_limits<double>::infinity());
  for (const auto& p : points)
    for (int a = 0; a < d; ++a) {
      lo[a] = std::min(lo[a], p[a] - R);
      hi[a] = std::max(hi[a], p[a] + R);
    }
  const double h_target = R / 200.0;
  std::vector<int> n_cells(d);
  std::vector<double> h(d);
  double cell_volume = 1.0;
  for (int a = 0; a < d; ++a) {
    n_cells[a] = std::max(1, static_cast<int>(std::ceil((hi[a] - lo[a]) / h_target)));
    h[a] = (hi[a] - lo[a]) / n_cells[a];
    cell_volume *= h[a];
  }
  double gk = 0.0;
  std::vector<int> idx(d, 0);
  std::vector<double> y(d);
  while (true) {
    for (int a = 0; a < d; ++a) y[a] = lo[a] + (idx[a] + 0.5) * h[a];
    double prod = 1.0;
    for (const auto& p : points) {
      const double dist2 = sq_distance(y, p);
      if (dist2 <= R * R) prod *= f.phi(std::sqrt(dist2));
      if (prod == 0.0) break;
    }
    gk += 1.0 - prod;
    int a = 0;
    for (; a < d; ++a) {
      if (++idx[a] < n_cells[a]) break;
      idx[a] = 0;
    }
    if (a == d) break;
  }
  gk *= cell_volume;

  const Interval psi = pgfl_bounds(intensity_bounds(model.beta(), G), model.c_star(), gk);
  return {prefactor * psi.lower, prefactor * psi.upper};
}

}  // namespace gibbsbounds
