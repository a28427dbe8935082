#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "fogplan/montecarlo.hpp"
#include "fogplan/rng.hpp"

using namespace fogplan;
using namespace fogplan::montecarlo;

namespace {

// Counting oracle: per dimension, every stratum [k/n, (k+1)/n) holds exactly
// one point.
bool occupancy_exact(const std::vector<std::vector<double>>& points, std::size_t n,
                     std::size_t dims) {
  for (std::size_t d = 0; d < dims; ++d) {
    std::vector<int> histogram(n, 0);
    for (const auto& p : points) {
      if (p[d] < 0.0 || p[d] >= 1.0) return false;
      histogram[static_cast<std::size_t>(p[d] * static_cast<double>(n))]++;
    }
    for (const int count : histogram) {
      if (count != 1) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("LHS stratum occupancy is exact") {
  for (const std::size_t n : {std::size_t{1}, std::size_t{4}, std::size_t{100}}) {
    for (const std::size_t dims : {std::size_t{1}, std::size_t{5}}) {
      RngStream rng(100 + n + dims);
      const auto points = lhs_sample(n, dims, rng);
      REQUIRE(points.size() == n);
      REQUIRE(points[0].size() == dims);
      CHECK(occupancy_exact(points, n, dims));
    }
  }
  RngStream rng(1);
  CHECK_THROWS_AS(lhs_sample(0, 1, rng), std::invalid_argument);
  CHECK_THROWS_AS(lhs_sample(1, 0, rng), std::invalid_argument);
}

TEST_CASE("LHS n=4 single dimension hits all four quarters") {
  RngStream rng(7);
  const auto points = lhs_sample(4, 1, rng);
  std::vector<bool> quarter(4, false);
  for (const auto& p : points) {
    quarter[static_cast<std::size_t>(p[0] * 4.0)] = true;
  }
  CHECK(quarter == std::vector<bool>(4, true));
}

TEST_CASE("LHS is deterministic per stream") {
  RngStream a(11), b(11), c(12);
  CHECK(lhs_sample(16, 3, a) == lhs_sample(16, 3, b));
  RngStream a2(11);
  CHECK(lhs_sample(16, 3, a2) != lhs_sample(16, 3, c));
}

TEST_CASE("normal quantile matches the pinned two-sided value") {
  CHECK(normal_quantile_two_sided(0.95) == doctest::Approx(1.959964).epsilon(1e-6));
  CHECK(normal_quantile_two_sided(0.99) == doctest::Approx(2.575829).epsilon(1e-5));
  CHECK_THROWS_AS(normal_quantile_two_sided(0.0), std::invalid_argument);
}

TEST_CASE("ci_halfwidth closed-form checks") {
  CHECK(ci_halfwidth({3.0, 3.0, 3.0, 3.0}, 0.95) == 0.0);

  std::vector<double> bits;
  for (int i = 0; i < 500; ++i) bits.push_back(0.0);
  for (int i = 0; i < 500; ++i) bits.push_back(1.0);
  // 1.959964 * 0.50025 / sqrt(1000), evaluated independently.
  CHECK(ci_halfwidth(bits, 0.95) == doctest::Approx(0.031005258366).epsilon(1e-9));

  CHECK_THROWS_AS(ci_halfwidth({1.0}, 0.95), std::invalid_argument);
}

TEST_CASE("quadrupling the sample count halves the halfwidth") {
  std::vector<double> small, large;
  for (int i = 0; i < 500; ++i) small.push_back(i % 2 ? 1.0 : -1.0);
  for (int i = 0; i < 2000; ++i) large.push_back(i % 2 ? 1.0 : -1.0);
  const double ratio = ci_halfwidth(small, 0.95) / ci_halfwidth(large, 0.95);
  CHECK(ratio == doctest::Approx(2.0).epsilon(0.01));
}

TEST_CASE("estimate_pi_c stops immediately on a zero-variance objective") {
  McConfig config;
  config.seed = 5;
  const McResult result = estimate_pi_c(
      [](double, const std::vector<double>&) { return 7.25; }, config);
  CHECK(result.trials_used == 2);
  CHECK(result.converged);
  CHECK(result.ci_halfwidth == 0.0);
  CHECK(result.best_savings == 7.25);
}

TEST_CASE("estimate_pi_c finds the maximum of the quadratic") {
  McConfig config;
  config.seed = 31;
  const McResult result = estimate_pi_c(
      [](double pi, const std::vector<double>&) { return pi * (1.0 - pi); }, config);
  CHECK(result.trials_used <= 1000);
  CHECK(std::abs(result.estimate - 0.5) < 0.02);
  CHECK(result.best_savings == doctest::Approx(0.25).epsilon(0.01));
}

TEST_CASE("estimate_pi_c never exceeds the trial cap and is seed-stable") {
  McConfig config;
  config.seed = 1;
  config.max_trials = 120;
  auto noisy = [](double pi, const std::vector<double>& point) {
    // High-variance objective so the CI rule cannot stop early.
    return pi + 10.0 * std::sin(1000.0 * point[0]);
  };
  const McResult a = estimate_pi_c(noisy, config);
  CHECK(a.trials_used == 120);
  CHECK_FALSE(a.converged);
  const McResult b = estimate_pi_c(noisy, config);
  CHECK(a.estimate == b.estimate);
  CHECK(a.csv() == b.csv());

  McConfig other = config;
  other.seed = 2;
  const McResult c = estimate_pi_c(noisy, other);
  // Different orderings, statistically consistent estimates of the argmax.
  CHECK(std::abs(a.estimate - c.estimate) < 0.2);
}

TEST_CASE("objective failures carry the trial index") {
  McConfig config;
  config.seed = 9;
  try {
    estimate_pi_c(
        [](double pi, const std::vector<double>&) -> double {
          if (pi > 0.0) throw std::runtime_error("scenario exploded");
          return 0.0;
        },
        config);
    FAIL("expected TrialError");
  } catch (const TrialError& e) {
    CHECK(e.trial() == 0);
    CHECK(std::string(e.what()).find("scenario exploded") != std::string::npos);
  }
}

TEST_CASE("per-trial CSV has the documented columns") {
  McConfig config;
  config.seed = 5;
  config.max_trials = 4;
  config.target_rel_error = 1e-12;
  const McResult result = estimate_pi_c(
      [](double pi, const std::vector<double>&) { return pi; }, config);
  const std::string csv = result.csv();
  CHECK(csv.rfind("trial,pi_c,savings,running_mean,halfwidth\n", 0) == 0);
  CHECK(result.samples.size() == result.trials_used);
}
