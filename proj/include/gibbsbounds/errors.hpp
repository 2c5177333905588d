#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace gibbsbounds {

// Thrown when a model violates the inhibitory hypothesis (phi <= 1) that
// every analytic bound in this library relies on.
class HypothesisViolation : public std::runtime_error {
 public:
  explicit HypothesisViolation(const std::string& msg) : std::runtime_error(msg) {}
};

// Thrown when perfect simulation fails to coalesce within the event budget.
class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(const std::string& msg, std::uint64_t events, double horizon,
                      std::size_t gap)
      : std::runtime_error(msg), events_used(events), time_horizon(horizon), funnel_gap(gap) {}

  std::uint64_t events_used;  // dominating events generated before giving up
  double time_horizon;        // backward horizon reached
  std::size_t funnel_gap;     // |upper \ lower| at the last coalescence check
};

}  // namespace gibbsbounds
