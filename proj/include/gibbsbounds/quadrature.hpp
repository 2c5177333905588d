#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

// Gauss-Legendre quadrature with composite panels; the building block for
// every deterministic integral in the bound formulas.

namespace gibbsbounds {

// Gauss-Legendre nodes and weights on [-1, 1], Newton iteration on the
// Legendre recurrence.
class GaussLegendre {
 public:
  explicit GaussLegendre(int n) : nodes_(n), weights_(n) {
    if (n < 1) throw std::invalid_argument("GaussLegendre: n must be >= 1");
    const int m = (n + 1) / 2;
    for (int i = 1; i <= m; ++i) {
      double z = std::cos(std::numbers::pi * (i - 0.25) / (n + 0.5));
      double pp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p1 = 1.0, p2 = 0.0;
        for (int j = 1; j <= n; ++j) {
          const double p3 = p2;
          p2 = p1;
          p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
        }
        pp = n * (z * p1 - p2) / (z * z - 1.0);
        const double z1 = z;
        z = z1 - p1 / pp;
        if (std::abs(z - z1) <= 1e-15) break;
      }
      nodes_[i - 1] = -z;
      nodes_[n - i] = z;
      weights_[i - 1] = 2.0 / ((1.0 - z * z) * pp * pp);
      weights_[n - i] = weights_[i - 1];
    }
  }

  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }

  template <class F>
  double integrate(F&& f, double a, double b) const {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double acc = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      acc += weights_[i] * f(mid + half * nodes_[i]);
    return half * acc;
  }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

// Composite rule over consecutive panels given by `edges` (ascending).
template <class F>
double integrate_panels(const GaussLegendre& rule, std::span<const double> edges, F&& f) {
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) acc += rule.integrate(f, edges[i], edges[i + 1]);
  return acc;
}

}  // namespace gibbsbounds
