#pragma once

#include <cmath>
#include <stdexcept>

namespace gibbsbounds {

// Principal branch of Lambert's W on [0, inf): the w >= 0 with w e^w = x.
// Initial guess (x for x < 1, log x - log log x for x >= e, log(1+x) in
// between) refined by Halley iteration; converges to relative step 1e-15 in a
// handful of iterations over the whole domain.
inline double lambert_w0(double x) {
  if (std::isnan(x) || x < 0.0) throw std::domain_error("lambert_w0: argument must be >= 0");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return x;

  double w;
  if (x < 1.0) w = x;
  else if (x < std::exp(1.0)) w = std::log1p(x);
  else w = std::log(x) - std::log(std::log(x));

  for (int iter = 0; iter < 50; ++iter) {
    const double e = std::exp(w);
    const double r = w * e - x;
    const double dw = r / (e * (w + 1.0) - (w + 2.0) * r / (2.0 * w + 2.0));
    w -= dw;
    if (std::abs(dw) <= 1e-15 * std::max(std::abs(w), 1e-300)) break;
  }
  return w;
}

}  // namespace gibbsbounds
