#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "gibbsbounds/errors.hpp"
#include "gibbsbounds/geometry.hpp"
#include "gibbsbounds/quadrature.hpp"

namespace gibbsbounds {

// Isotropic piecewise-constant interaction function. phi(r) = values[i] on the
// cell (breakpoints[i-1], breakpoints[i]] (closed on the right), and 1 beyond
// the last breakpoint. Covers Strauss, hard core and multiscale processes.
class RadialStepInteraction {
 public:
  RadialStepInteraction(std::vector<double> breakpoints, std::vector<double> values)
      : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
    if (breakpoints_.empty() || breakpoints_.size() != values_.size())
      throw std::invalid_argument("RadialStepInteraction: need k >= 1 breakpoints with values");
    double prev = 0.0;
    for (double s : breakpoints_) {
      if (!(s > prev)) throw std::invalid_argument(
          "RadialStepInteraction: breakpoints must be positive and strictly increasing");
      prev = s;
    }
    for (double v : values_) {
      if (!(v >= 0.0) || std::isnan(v))
        throw std::invalid_argument("RadialStepInteraction: values must be >= 0");
      if (v > 1.0)
        throw HypothesisViolation("interaction value exceeds 1: model is not inhibitory");
    }
  }

  static RadialStepInteraction strauss(double gamma, double r) {
    return RadialStepInteraction({r}, {gamma});
  }
  static RadialStepInteraction hard_core(double r) { return RadialStepInteraction({r}, {0.0}); }

  // No constraint within r, hard exclusion on (r, R], none beyond R.
  static RadialStepInteraction hard_annulus(double r, double R) {
    if (!(R >= r)) throw std::invalid_argument("hard_annulus: need R >= r");
    if (r <= 0.0) return hard_core(R);
    if (R == r) return RadialStepInteraction({r}, {1.0});
    return RadialStepInteraction({r, R}, {1.0, 0.0});
  }

  double phi(double r) const {
    for (std::size_t i = 0; i < breakpoints_.size(); ++i)
      if (r <= breakpoints_[i]) return values_[i];
    return 1.0;
  }

  std::size_t num_steps() const { return breakpoints_.size(); }
  double range() const { return breakpoints_.back(); }
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& values() const { return values_; }

  bool is_trivial() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 1.0; });
  }

 private:
  std::vector<double> breakpoints_;
  std::vector<double> values_;
};

// Stationary pairwise interaction process parameters: conditional intensity
// lambda(x | xi) = beta * prod_{y in xi} phi(|x - y|). With phi <= 1 the
// process is locally stable with constant c* = beta.
class PairwiseModel {
 public:
  PairwiseModel(int dim, double beta, RadialStepInteraction interaction)
      : dim_(dim), beta_(beta), interaction_(std::move(interaction)) {
    if (dim < 1) throw std::invalid_argument("PairwiseModel: dimension must be >= 1");
    if (!(beta > 0.0) || !std::isfinite(beta))
      throw std::invalid_argument("PairwiseModel: beta must be positive and finite");
  }

  int dim() const { return dim_; }
  double beta() const { return beta_; }
  double c_star() const { return beta_; }
  const RadialStepInteraction& interaction() const { return interaction_; }
  double range() const { return interaction_.range(); }

 private:
  int dim_;
  double beta_;
  RadialStepInteraction interaction_;
};

inline double phi(const RadialStepInteraction& f, double r) { return f.phi(r); }

// Volume of the unit ball in R^d.
inline double ball_volume(int d) {
  if (d < 1) throw std::invalid_argument("ball_volume: d must be >= 1");
  return std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

inline double shell_volume(int d, double a, double b) {
  return ball_volume(d) * (std::pow(b, d) - std::pow(a, d));
}

// beta * prod_y phi(|x - y|); a pattern point coinciding with x is excluded
// (conditional intensity given the rest of the configuration).
inline double cond_intensity(const PairwiseModel& model, std::span<const double> x,
                             const PointPattern& pattern) {
  const double range2 = model.range() * model.range();
  double lam = model.beta();
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    const double d2 = sq_distance(x, pattern.point(i));
    if (d2 == 0.0) continue;
    if (d2 > range2) continue;
    lam *= model.interaction().phi(std::sqrt(d2));
    if (lam == 0.0) break;
  }
  return lam;
}

// G = int 1 - phi(x) dx, exact for step interactions.
inline double integral_G(const PairwiseModel& model) {
  const auto& f = model.interaction();
  double g = 0.0, prev = 0.0;
  for (std::size_t i = 0; i < f.num_steps(); ++i) {
    g += (1.0 - f.values()[i]) * shell_volume(model.dim(), prev, f.breakpoints()[i]);
    prev = f.breakpoints()[i];
  }
  return g;
}

// Gamma = -int log(phi(x)) dx; +infinity as soon as phi vanishes on a cell.
inline double integral_Gamma(const PairwiseModel& model) {
  const auto& f = model.interaction();
  double g = 0.0, prev = 0.0;
  for (std::size_t i = 0; i < f.num_steps(); ++i) {
    const double v = f.values()[i];
    if (v == 0.0) return std::numeric_limits<double>::infinity();
    g += -std::log(v) * shell_volume(model.dim(), prev, f.breakpoints()[i]);
    prev = f.breakpoints()[i];
  }
  return g;
}

// G~_t = int 1 - phi(x) 1{|x| > t} dx
//      = alpha_d t^d + int_{|x| > t} (1 - phi(x)) dx, exact per step cell.
inline double g_tilde_t(const PairwiseModel& model, double t) {
  if (t < 0.0) throw std::invalid_argument("g_tilde_t: t must be >= 0");
  const auto& f = model.interaction();
  const int d = model.dim();
  double g = ball_volume(d) * std::pow(t, d);
  double prev = 0.0;
  for (std::size_t i = 0; i < f.num_steps(); ++i) {
    const double s = f.breakpoints()[i];
    g += (1.0 - f.values()[i]) * shell_volume(d, std::max(prev, t), std::max(s, t));
    prev = s;
  }
  return g;
}

namespace detail {

// Angular integral A(rho; s) = int_{S^{d-1}} phi(|rho w + x|) dsigma(w) with
// |x| = s. |rho w + x|^2 = rho^2 + s^2 + 2 rho s cos(theta) is monotone in the
// polar angle, so each interaction cell occupies an exactly computable theta
// band; only the sin^{d-2} weight needs quadrature (and has closed forms for
// d = 2, 3).
inline double angular_phi_integral(const RadialStepInteraction& f, int d, double rho, double s) {
  if (d == 1) return f.phi(rho + s) + f.phi(std::abs(rho - s));

  const double a2 = rho * rho + s * s;
  const double two_rs = 2.0 * rho * s;
  auto theta_at = [&](double c) {
    // boundary of {theta : |rho w + x| <= c}, i.e. region [theta, pi]
    if (two_rs == 0.0) return (c * c >= a2) ? 0.0 : std::numbers::pi;
    const double q = std::clamp((c * c - a2) / two_rs, -1.0, 1.0);
    return std::acos(q);
  };

  double weight_scale;  // surface area of S^{d-2}
  if (d == 2) weight_scale = 2.0;
  else weight_scale = 2.0 * std::pow(std::numbers::pi, 0.5 * (d - 1)) / std::tgamma(0.5 * (d - 1));

  static thread_local GaussLegendre rule(24);
  auto sin_weight = [&](double a, double b) {
    if (b <= a) return 0.0;
    if (d == 2) return b - a;
    if (d == 3) return std::cos(a) - std::cos(b);
    return rule.integrate([&](double th) { return std::pow(std::sin(th), d - 2); }, a, b);
  };

  double total = 0.0;
  double theta_hi = std::numbers::pi;  // cell boundary at c = 0
  for (std::size_t j = 0; j < f.num_steps(); ++j) {
    const double theta_lo = theta_at(f.breakpoints()[j]);
    total += f.values()[j] * sin_weight(theta_lo, theta_hi);
    theta_hi = theta_lo;
  }
  total += sin_weight(0.0, theta_hi);  // phi = 1 beyond the interaction range
  return weight_scale * total;
}

}  // namespace detail

// Generic evaluation of G~_x = int 1 - phi(y) phi(y - x) dy at separation
// s = |x|, by composite Gauss-Legendre quadrature in polar coordinates:
//   G~_x = G + int_{B(0,R)} (1 - phi(rho)) rho^{d-1} A(rho; s) drho,
// with panels split wherever the integrand loses smoothness (interaction
// breakpoints and the radii |s_j - s|, s_j + s) and a cosine map per panel to
// absorb the square-root kinks at panel ends.
inline double g_tilde_x_quadrature(const PairwiseModel& model, double s) {
  if (s < 0.0) throw std::invalid_argument("g_tilde_x: s must be >= 0");
  const auto& f = model.interaction();
  const int d = model.dim();
  const double R = f.range();

  std::vector<double> edges{0.0, R};
  for (double b : f.breakpoints()) {
    for (double e : {b, std::abs(b - s), b + s})
      if (e > 0.0 && e < R) edges.push_back(e);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end(),
                          [](double a, double b) { return std::abs(a - b) < 1e-15; }),
              edges.end());

  const GaussLegendre rule(64);
  double integral = 0.0;
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double a = edges[p], b = edges[p + 1];
    const double one_minus_phi = 1.0 - f.phi(0.5 * (a + b));
    if (one_minus_phi == 0.0) continue;
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes().size(); ++i) {
      const double u = 0.5 * (rule.nodes()[i] + 1.0);  // [0,1]
      const double rho = a + (b - a) * 0.5 * (1.0 - std::cos(std::numbers::pi * u));
      const double jac = (b - a) * 0.25 * std::numbers::pi * std::sin(std::numbers::pi * u);
      acc += rule.weights()[i] * jac * std::pow(rho, d - 1) *
             detail::angular_phi_integral(f, d, rho, s);
    }
    integral += one_minus_phi * acc;
  }
  return integral_G(model) + integral;
}

// G~_x at separation s. Uses the closed form for a two-dimensional single-step
// (Strauss-type) interaction and falls back to quadrature otherwise.
inline double g_tilde_x(const PairwiseModel& model, double s) {
  if (s < 0.0) throw std::invalid_argument("g_tilde_x: s must be >= 0");
  const auto& f = model.interaction();
  if (model.dim() == 2 && f.num_steps() == 1) {
    const double r = f.breakpoints()[0];
    const double gamma = f.values()[0];
    const double base = 2.0 * std::numbers::pi * r * r * (1.0 - gamma);
    if (s >= 2.0 * r) return base;
    const double q = s / (2.0 * r);
    const double lens_term = std::acos(q) - q * std::sqrt(1.0 - q * q);
    return base - 2.0 * r * r * (1.0 - gamma) * (1.0 - gamma) * lens_term;
  }
  return g_tilde_x_quadrature(model, s);
}

}  // namespace gibbsbounds
