#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "gibbsbounds/estimate.hpp"
#include "gibbsbounds/interval.hpp"

using namespace gibbsbounds;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("intensity estimate is exactly count over area") {
  const Window w({0.0, 0.0}, {2.0, 2.0});
  const Window inner({0.5, 0.5}, {1.5, 1.5});
  PointPattern pat(w, {{0.6, 0.6}, {1.0, 1.0}, {1.4, 0.7}, {0.1, 0.1}, {1.9, 1.9}});
  CHECK(est_intensity(pat, inner) == doctest::Approx(3.0));
  CHECK(est_intensity(PointPattern(w), inner) == 0.0);
  // unit square: intensity equals the count
  const Window unit({0.0, 0.0}, {1.0, 1.0});
  PointPattern single(unit, {{0.2, 0.8}});
  CHECK(est_intensity(single, unit) == doctest::Approx(1.0));
}

TEST_CASE("empty space estimate: empty pattern and monotone output") {
  const Window w({0.0, 0.0}, {1.0, 1.0});
  const auto grid = linspace(0.0, 0.1, 11);
  const auto empty_curve = est_F(PointPattern(w), w, grid);
  for (double v : empty_curve) CHECK(v == 0.0);

  const auto pat = sample_poisson(w, 80.0, {3, 0});
  const auto curve = est_F(pat, w, grid);
  double prev = -1.0;
  for (double v : curve) {
    CHECK(v >= prev);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    prev = v;
  }
}

TEST_CASE("empty space estimate matches the poisson closed form") {
  const double lambda = 60.0;
  const Window inner({0.0, 0.0}, {1.0, 1.0});
  const Window sim = inner.dilated(0.08);
  const auto grid = linspace(0.0, 0.08, 9);
  const int n = 150;

  std::vector<double> sum(grid.size(), 0.0), sq(grid.size(), 0.0);
  for (int i = 0; i < n; ++i) {
    const auto pat = sample_poisson(sim, lambda, {111, static_cast<std::uint64_t>(i)});
    const auto curve = est_F(pat, inner, grid);
    for (std::size_t j = 0; j < grid.size(); ++j) {
      sum[j] += curve[j];
      sq[j] += curve[j] * curve[j];
    }
  }
  for (std::size_t j = 1; j < grid.size(); ++j) {
    const double mean = sum[j] / n;
    const double se = std::sqrt((sq[j] / n - mean * mean) / n);
    const double expect = 1.0 - std::exp(-lambda * kPi * grid[j] * grid[j]);
    CHECK(std::abs(mean - expect) <= 3.0 * se + 1e-12);
  }
}

TEST_CASE("nearest neighbour estimate: flags, single point, poisson form") {
  const Window w({0.0, 0.0}, {1.0, 1.0});
  const auto grid = linspace(0.0, 0.08, 9);

  // no contributing point: all flagged
  for (double v : est_G(PointPattern(w), w, grid)) CHECK(std::isnan(v));

  // a single interior point contributes with an infinite nn distance
  PointPattern single(w, {{0.5, 0.5}});
  for (double v : est_G(single, w, grid)) CHECK(v == 0.0);

  const double lambda = 60.0;
  const Window sim = w.dilated(0.08);
  const int n = 200;
  std::vector<NnCdfCounts> counts;
  counts.reserve(n);
  for (int i = 0; i < n; ++i) {
    const auto pat = sample_poisson(sim, lambda, {121, static_cast<std::uint64_t>(i)});
    counts.push_back(est_G_counts(pat, w, grid));
    // per-pattern curve is consistent with its own counts
    if (i == 0) {
      const auto curve = est_G(pat, w, grid);
      for (std::size_t j = 0; j < grid.size(); ++j)
        CHECK(curve[j] ==
              doctest::Approx(static_cast<double>(counts[0].hits[j]) / counts[0].contributing));
    }
  }
  const PooledCurve pooled = pool_nn_counts(counts);
  for (std::size_t j = 1; j < grid.size(); ++j) {
    const double expect = 1.0 - std::exp(-lambda * kPi * grid[j] * grid[j]);
    CHECK(std::abs(pooled.estimate[j] - expect) <= 3.0 * pooled.std_err[j] + 1e-12);
  }
}

TEST_CASE("pair count estimate: poisson slope and hard core gap") {
  const double lambda = 60.0;
  const Window inner({0.0, 0.0}, {1.0, 1.0});
  const Window sim = inner.dilated(0.1);
  const auto grid = linspace(0.0, 0.1, 6);
  const int n = 150;

  // pooled intensity first, then the pair counts
  std::vector<PointPattern> pats;
  pats.reserve(n);
  double lam_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    pats.push_back(sample_poisson(sim, lambda, {131, static_cast<std::uint64_t>(i)}));
    lam_sum += est_intensity(pats.back(), inner);
  }
  const double lam_hat = lam_sum / n;

  std::vector<double> sum(grid.size(), 0.0), sq(grid.size(), 0.0);
  for (const auto& pat : pats) {
    const auto curve = est_K(pat, inner, grid, lam_hat);
    for (std::size_t j = 0; j < grid.size(); ++j) {
      sum[j] += curve[j];
      sq[j] += curve[j] * curve[j];
    }
  }
  for (std::size_t j = 1; j < grid.size(); ++j) {
    const double mean = sum[j] / n;
    const double se = std::sqrt((sq[j] / n - mean * mean) / n);
    CHECK(std::abs(mean - kPi * grid[j] * grid[j]) <= 3.0 * se);
  }

  // hard core: no pairs below the exclusion distance
  const PairwiseModel hc(2, 120.0, RadialStepInteraction::hard_core(0.05));
  const auto pat = sample_mh(hc, sim, 50000, {141, 0});
  const auto curve = est_K(pat, inner, std::vector<double>{0.01, 0.03, 0.049, 0.1},
                           est_intensity(pat, inner));
  CHECK(curve[0] == 0.0);
  CHECK(curve[1] == 0.0);
  CHECK(curve[2] == 0.0);
  CHECK(curve[3] > 0.0);

  CHECK_THROWS_AS(est_K(pat, inner, grid, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(est_K(pat, inner, std::vector<double>{0.0, 0.6}, 1.0), std::invalid_argument);
}

TEST_CASE("toroidal estimators show no edge bias") {
  const double lambda = 100.0;
  const Window torus({0.0, 0.0}, {1.0, 1.0});
  const auto grid = linspace(0.0, 0.25, 6);  // up to a quarter of the window
  const int n = 120;
  std::vector<PointPattern> pats;
  double lam_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    pats.push_back(sample_poisson(torus, lambda, {151, static_cast<std::uint64_t>(i)}));
    lam_sum += est_intensity(pats.back(), torus);
  }
  const double lam_hat = lam_sum / n;
  std::vector<double> sum(grid.size(), 0.0), sq(grid.size(), 0.0);
  for (const auto& pat : pats) {
    const auto curve = est_K(pat, torus, grid, lam_hat, Metric::toroidal);
    for (std::size_t j = 0; j < grid.size(); ++j) {
      sum[j] += curve[j];
      sq[j] += curve[j] * curve[j];
    }
  }
  for (std::size_t j = 1; j < grid.size(); ++j) {
    const double mean = sum[j] / n;
    const double se = std::sqrt((sq[j] / n - mean * mean) / n);
    CHECK(std::abs(mean - kPi * grid[j] * grid[j]) <= 3.0 * se);
  }
}

TEST_CASE("replicate summaries: flags, determinism across thread counts") {
  const PairwiseModel model(2, 30.0, RadialStepInteraction::strauss(0.5, 0.05));
  const Window inner({0.0, 0.0}, {1.0, 1.0});
  const Window sim = inner.dilated(model.range());
  auto stat = [&](const PointPattern& pat) {
    return std::vector<double>{est_intensity(pat, inner)};
  };

  // n = 1: mean defined, standard error flagged
  const auto one = run_replicates(model, sim, SamplerKind::mh, 5000, 1, stat, {161, 0}, 1);
  CHECK(one.mean.size() == 1);
  CHECK(std::isfinite(one.mean[0]));
  CHECK(std::isnan(one.std_err[0]));

  const auto t1 = run_replicates(model, sim, SamplerKind::mh, 5000, 64, stat, {171, 0}, 1);
  const auto t2 = run_replicates(model, sim, SamplerKind::mh, 5000, 64, stat, {171, 0}, 2);
  const auto t4 = run_replicates(model, sim, SamplerKind::mh, 5000, 64, stat, {171, 0}, 4);
  CHECK(t1.values == t2.values);
  CHECK(t1.values == t4.values);
  CHECK(t1.mean[0] == t2.mean[0]);
  CHECK(t1.std_err[0] == t4.std_err[0]);
  CHECK(t1.std_err[0] > 0.0);
}

TEST_CASE("nearest neighbour and pair count curves are nondecreasing") {
  const Window inner({0.0, 0.0}, {1.0, 1.0});
  const Window sim = inner.dilated(0.1);
  const auto grid = linspace(0.0, 0.1, 21);
  for (std::uint64_t stream = 0; stream < 5; ++stream) {
    const auto pat = sample_poisson(sim, 70.0, {181, stream});
    const auto g = est_G(pat, inner, grid);
    const auto k = est_K(pat, inner, grid, est_intensity(pat, inner));
    for (std::size_t j = 1; j < grid.size(); ++j) {
      CHECK(g[j] >= g[j - 1]);
      CHECK(k[j] >= k[j - 1]);
    }
    CHECK(g.back() <= 1.0);
    CHECK(k.front() == 0.0);
  }
}

TEST_CASE("replicate errors carry the replicate index") {
  const PairwiseModel model(2, 10.0, RadialStepInteraction::strauss(0.5, 0.05));
  const Window w({0.0, 0.0}, {1.0, 1.0});
  int calls = 0;
  auto failing_stat = [&](const PointPattern&) -> std::vector<double> {
    if (calls++ == 3) throw std::runtime_error("statistic blew up");
    return {0.0};
  };
  try {
    run_replicates(model, w, SamplerKind::mh, 100, 8, failing_stat, {191, 0}, 1);
    FAIL("expected propagation");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "replicate 3: statistic blew up");
  }
}

TEST_CASE("nan-aware summaries skip flagged components") {
  ReplicateSummary s;
  s.n_replicates = 3;
  s.values = {{1.0, std::nan("")}, {2.0, std::nan("")}, {3.0, std::nan("")}};
  summarize(s);
  CHECK(s.mean[0] == doctest::Approx(2.0));
  CHECK(s.std_err[0] == doctest::Approx(std::sqrt(1.0 / 3.0)));
  CHECK(std::isnan(s.mean[1]));
  CHECK(std::isnan(s.std_err[1]));
}
