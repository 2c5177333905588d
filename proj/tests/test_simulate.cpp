#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "gibbsbounds/bounds.hpp"
#include "gibbsbounds/simulate.hpp"

using namespace gibbsbounds;

namespace {

double min_pairwise_distance(const PointPattern& pat, Metric metric = Metric::euclidean) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pat.size(); ++i)
    for (std::size_t j = i + 1; j < pat.size(); ++j)
      best = std::min(best, sq_distance(pat.point(i), pat.point(j), pat.window(), metric));
  return std::sqrt(best);
}

struct Moments {
  double mean;
  double var;
  double se_mean;
};

template <class Draw>
Moments count_moments(int n, Draw&& draw) {
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double c = static_cast<double>(draw(i).size());
    sum += c;
    sum_sq += c * c;
  }
  const double mean = sum / n;
  const double var = (sum_sq - n * mean * mean) / (n - 1);
  return {mean, var, std::sqrt(var / n)};
}

}  // namespace

TEST_CASE("poisson sampler: empty at zero intensity, correct moments") {
  const Window w({0.0, 0.0}, {1.0, 1.0});
  CHECK(sample_poisson(w, 0.0, {1, 0}).size() == 0);
  CHECK_THROWS_AS(sample_poisson(w, -1.0, {1, 0}), std::invalid_argument);

  const auto m = count_moments(2000, [&](int i) {
    return sample_poisson(w, 50.0, {99, static_cast<std::uint64_t>(i)});
  });
  CHECK(std::abs(m.mean - 50.0) <= 3.0 * m.se_mean);
  // var of the sample variance for Poisson(50): (mu4 - sigma^4)/n
  const double se_var = std::sqrt((50.0 + 3.0 * 2500.0 - 2500.0) / 2000.0);
  CHECK(std::abs(m.var - 50.0) <= 3.0 * se_var);

  // points land inside the window and are simple
  const auto pat = sample_poisson(w, 200.0, {5, 0});
  CHECK(pat.is_simple());
  CHECK(pat.count_in(w) == pat.size());
}

TEST_CASE("mh sampler: gamma = 1 equilibrium is poisson") {
  const Window w({0.0, 0.0}, {1.0, 1.0});
  const PairwiseModel poisson_like(2, 30.0, RadialStepInteraction::strauss(1.0, 0.05));
  const auto m = count_moments(400, [&](int i) {
    return sample_mh(poisson_like, w, 20000, {7, static_cast<std::uint64_t>(i)});
  });
  CHECK(std::abs(m.mean - 30.0) <= 3.0 * m.se_mean);
  const double se_var = std::sqrt((30.0 + 3.0 * 900.0 - 900.0) / 400.0);
  CHECK(std::abs(m.var - 30.0) <= 4.0 * se_var);
}

TEST_CASE("mh sampler works in one and three dimensions") {
  const PairwiseModel line(1, 20.0, RadialStepInteraction::hard_core(0.02));
  const Window seg({0.0}, {2.0});
  const auto pat1 = sample_mh(line, seg, 30000, {201, 0});
  CHECK(pat1.size() > 0);
  CHECK(min_pairwise_distance(pat1) > 0.02);

  const PairwiseModel cube(3, 40.0, RadialStepInteraction::strauss(1.0, 0.05));
  const Window box({0.0, 0.0, 0.0}, {1.0, 1.0, 1.0});
  const auto m = count_moments(200, [&](int i) {
    return sample_mh(cube, box, 20000, {202, static_cast<std::uint64_t>(i)});
  });
  CHECK(std::abs(m.mean - 40.0) <= 3.0 * m.se_mean);
}

TEST_CASE("mh sampler: zero steps returns the empty initial state") {
  const Window w({0.0, 0.0}, {1.0, 1.0});
  const PairwiseModel model(2, 30.0, RadialStepInteraction::strauss(0.5, 0.05));
  CHECK(sample_mh(model, w, 0, {1, 1}).size() == 0);
}

TEST_CASE("mh sampler: hard constraints are never violated") {
  const Window w({0.0, 0.0}, {1.0, 1.0});
  const PairwiseModel hc(2, 120.0, RadialStepInteraction::hard_core(0.05));
  for (std::uint64_t stream = 0; stream < 10; ++stream) {
    const auto pat = sample_mh(hc, w, 50000, {11, stream});
    CHECK(pat.size() > 0);
    CHECK(min_pairwise_distance(pat) > 0.05);
  }
  // toroidal variant wraps the exclusion across the boundary
  const auto torus = sample_mh(hc, w, 50000, {12, 0}, Metric::toroidal);
  CHECK(min_pairwise_distance(torus, Metric::toroidal) > 0.05);
}

TEST_CASE("mh sampler: strauss intensity lands inside the analytic bounds") {
  const PairwiseModel model(2, 50.0, RadialStepInteraction::strauss(0.5, 0.05));
  const Window inner({0.0, 0.0}, {1.0, 1.0});
  const Window sim = inner.dilated(model.range());
  const Interval bounds = intensity_bounds(model);
  const auto m = count_moments(150, [&](int i) {
    auto pat = sample_mh(model, sim, 100000, {21, static_cast<std::uint64_t>(i)});
    PointPattern in_inner(inner);
    for (std::size_t k = 0; k < pat.size(); ++k)
      if (inner.contains(pat.point(k))) in_inner.add(pat.point(k));
    return in_inner;
  });
  CHECK(m.mean >= bounds.lower - 4.0 * m.se_mean);
  CHECK(m.mean <= bounds.upper + 4.0 * m.se_mean);
}

TEST_CASE("mh sampler is deterministic in its seed") {
  const Window w({0.0, 0.0}, {1.0, 1.0});
  const PairwiseModel model(2, 40.0, RadialStepInteraction::strauss(0.3, 0.06));
  const auto a = sample_mh(model, w, 30000, {31, 4});
  const auto b = sample_mh(model, w, 30000, {31, 4});
  REQUIRE(a.size() == b.size());
  CHECK(a.coords() == b.coords());
  const auto c = sample_mh(model, w, 30000, {31, 5});
  CHECK(a.coords() != c.coords());
}

TEST_CASE("dcftp: gamma = 1 gives exact poisson draws") {
  const Window w({0.0, 0.0}, {1.0, 1.0});
  const PairwiseModel poisson_like(2, 40.0, RadialStepInteraction::strauss(1.0, 0.05));
  const auto m = count_moments(300, [&](int i) {
    return sample_dcftp(poisson_like, w, {41, static_cast<std::uint64_t>(i)});
  });
  CHECK(std::abs(m.mean - 40.0) <= 3.0 * m.se_mean);
  const double se_var = std::sqrt((40.0 + 3.0 * 1600.0 - 1600.0) / 300.0);
  CHECK(std::abs(m.var - 40.0) <= 4.0 * se_var);
}

TEST_CASE("dcftp: strauss hard core intensity is consistent with the bounds") {
  const PairwiseModel model(2, 50.0, RadialStepInteraction::hard_core(0.05));
  const Window inner({0.0, 0.0}, {1.0, 1.0});
  const Window sim = inner.dilated(model.range());
  const Interval bounds = intensity_bounds(model);
  double sum = 0.0, sum_sq = 0.0;
  const int n = 150;
  for (int i = 0; i < n; ++i) {
    const auto pat = sample_dcftp(model, sim, {51, static_cast<std::uint64_t>(i)});
    CHECK(min_pairwise_distance(pat) > 0.05);
    const double c = static_cast<double>(pat.count_in(inner));
    sum += c;
    sum_sq += c * c;
  }
  const double mean = sum / n;
  const double se = std::sqrt((sum_sq - n * mean * mean) / (n - 1) / n);
  CHECK(mean >= bounds.lower - 4.0 * se);
  CHECK(mean <= bounds.upper + 4.0 * se);
}

TEST_CASE("dcftp: raising the event cap does not change the draw") {
  const Window w({0.0, 0.0}, {1.0, 1.0});
  const PairwiseModel model(2, 50.0, RadialStepInteraction::hard_core(0.05));
  DcftpOptions small_cap;
  small_cap.max_events = std::uint64_t{1} << 22;
  DcftpOptions big_cap;
  big_cap.max_events = std::uint64_t{1} << 30;
  const auto a = sample_dcftp(model, w, {61, 9}, small_cap);
  const auto b = sample_dcftp(model, w, {61, 9}, big_cap);
  CHECK(a.coords() == b.coords());
}

TEST_CASE("dcftp: an impossible event budget raises a diagnostic error") {
  const Window w({0.0, 0.0}, {1.0, 1.0});
  const PairwiseModel model(2, 50.0, RadialStepInteraction::hard_core(0.05));
  DcftpOptions opt;
  opt.max_events = 4;
  try {
    sample_dcftp(model, w, {71, 0}, opt);
    FAIL("expected NonConvergenceError");
  } catch (const NonConvergenceError& e) {
    CHECK(e.events_used > opt.max_events);
    CHECK(e.time_horizon > 0.0);
  }
}

TEST_CASE("immigration-death counts: trivial and mean trajectory") {
  CHECK(sample_immigration_death(1.0, 5.0, 17, 0.0, {81, 0}) == 17);
  CHECK_THROWS_AS(sample_immigration_death(0.0, 5.0, 0, 1.0, {81, 0}), std::invalid_argument);

  // started empty, E[N_t] = nu |A| (1 - e^{-t})
  const double nu_a = 8.0;
  const std::vector<double> times{0.25, 0.5, 1.0, 2.0, 4.0};
  const int n = 4000;
  std::vector<double> sums(times.size(), 0.0), sq(times.size(), 0.0);
  for (int i = 0; i < n; ++i) {
    const auto counts =
        sample_immigration_death(2.0, 4.0, 0, times, {91, static_cast<std::uint64_t>(i)});
    for (std::size_t j = 0; j < times.size(); ++j) {
      sums[j] += static_cast<double>(counts[j]);
      sq[j] += static_cast<double>(counts[j]) * counts[j];
    }
  }
  for (std::size_t j = 0; j < times.size(); ++j) {
    const double mean = sums[j] / n;
    const double se = std::sqrt((sq[j] / n - mean * mean) / n);
    const double expect = nu_a * (1.0 - std::exp(-times[j]));
    CHECK(std::abs(mean - expect) <= 3.0 * se);
  }
}

TEST_CASE("immigration-death counts: stationary law is poisson") {
  // long horizon: count distribution ~ Poisson(nu |A|)
  const double nu_a = 6.0;
  const int n = 4000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto c = sample_immigration_death(3.0, 2.0, 0, 25.0, {101, static_cast<std::uint64_t>(i)});
    sum += static_cast<double>(c);
    sum_sq += static_cast<double>(c) * c;
  }
  const double mean = sum / n;
  const double var = (sum_sq - n * mean * mean) / (n - 1);
  CHECK(std::abs(mean - nu_a) <= 3.0 * std::sqrt(nu_a / n));
  const double se_var = std::sqrt((nu_a + 3.0 * nu_a * nu_a - nu_a * nu_a) / n);
  CHECK(std::abs(var - nu_a) <= 3.0 * se_var);
}
