// Copyright 2026 the fogplan authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FOGPLAN_MONTECARLO_HPP
#define FOGPLAN_MONTECARLO_HPP

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fogplan/rng.hpp"

namespace fogplan::montecarlo {

struct McConfig {
  std::size_t max_trials = 1000;
  double ci_level = 0.95;
  double target_rel_error = 0.01;
  bool relative_error = true;  // false: target is an absolute halfwidth
  std::size_t dims = 1;        // sampled parameter count; dim 0 is pi_c
  std::size_t batch = 100;     // LHS points drawn per wave
  std::uint64_t seed = 0;
};

struct TrialOutcome {
  std::size_t trial = 0;
  double pi_c = 0.0;
  double savings = 0.0;
  double running_mean = 0.0;
  double halfwidth = 0.0;
};

struct McResult {
  double estimate = 0.0;      // pi_c of the savings-maximizing trial
  double best_savings = 0.0;
  double mean_savings = 0.0;
  double ci_halfwidth = 0.0;
  std::size_t trials_used = 0;
  bool converged = false;     // stopped by the CI rule rather than the cap
  std::vector<TrialOutcome> samples;

  static std::string csv_header();
  std::string csv() const;
};

// An objective failure, annotated with the trial that raised it.
class TrialError : public std::runtime_error {
 public:
  TrialError(std::size_t trial, const std::string& what)
      : std::runtime_error("trial " + std::to_string(trial) + ": " + what), trial_(trial) {}
  std::size_t trial() const { return trial_; }

 private:
  std::size_t trial_;
};

// n Latin-Hypercube points in [0,1)^dims: per dimension exactly one point in
// each of the n equal strata, stratum order permuted independently.
std::vector<std::vector<double>> lhs_sample(std::size_t n, std::size_t dims, RngStream& rng);

// Two-sided normal-approximation confidence halfwidth z * s / sqrt(n).
// Needs at least two samples.
double ci_halfwidth(const std::vector<double>& samples, double level);

// Normal quantile for the two-sided level (e.g. 0.95 -> 1.959964).
double normal_quantile_two_sided(double level);

// Draws LHS-sampled candidate pi_c values (dimension 0 of each point),
// evaluates the savings objective per trial, and stops as soon as the CI
// halfwidth of the savings sequence meets the target or max_trials is
// reached. The estimate is the pi_c of the best trial seen.
McResult estimate_pi_c(const std::function<double(double, const std::vector<double>&)>& objective,
                       const McConfig& config);

}  // namespace fogplan::montecarlo

#endif  // FOGPLAN_MONTECARLO_HPP
