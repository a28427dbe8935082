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

#include "fogplan/montecarlo.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace fogplan::montecarlo {

std::vector<std::vector<double>> lhs_sample(std::size_t n, std::size_t dims, RngStream& rng) {
  if (n < 1 || dims < 1) {
    throw std::invalid_argument("lhs_sample: need n >= 1 and dims >= 1");
  }
  std::vector<std::vector<double>> points(n, std::vector<double>(dims, 0.0));
  std::vector<std::size_t> strata(n);
  for (std::size_t d = 0; d < dims; ++d) {
    for (std::size_t i = 0; i < n; ++i) strata[i] = i;
    // Fisher-Yates from the caller's stream.
    for (std::size_t i = n; i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(rng.uniform_below(i));
      std::swap(strata[i - 1], strata[j]);
    }
    for (std::size_t i = 0; i < n; ++i) {
      points[i][d] = (static_cast<double>(strata[i]) + rng.uniform01()) / static_cast<double>(n);
    }
  }
  return points;
}

// Acklam's rational approximation of the standard normal quantile, good to
// about 1e-9 over the open unit interval.
namespace {

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("normal_quantile: p must lie in (0,1)");
  }
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  double q, r;
  if (p < p_low) {
    q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p <= 1.0 - p_low) {
    q = p - 0.5;
    r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  q = std::sqrt(-2.0 * std::log(1.0 - p));
  return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
         ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

}  // namespace

double normal_quantile_two_sided(double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw std::invalid_argument("confidence level must lie in (0,1)");
  }
  return normal_quantile(0.5 + level / 2.0);
}

double ci_halfwidth(const std::vector<double>& samples, double level) {
  if (samples.size() < 2) {
    throw std::invalid_argument("ci_halfwidth: need at least two samples");
  }
  const double n = static_cast<double>(samples.size());
  double mean = 0.0;
  for (const double s : samples) mean += s;
  mean /= n;
  double ss = 0.0;
  for (const double s : samples) ss += (s - mean) * (s - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  return normal_quantile_two_sided(level) * sd / std::sqrt(n);
}

std::string McResult::csv_header() { return "trial,pi_c,savings,running_mean,halfwidth"; }

std::string McResult::csv() const {
  std::ostringstream out;
  out << csv_header() << '\n';
  char buf[256];
  for (const TrialOutcome& t : samples) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g,%.17g", t.trial, t.pi_c, t.savings,
                  t.running_mean, t.halfwidth);
    out << buf << '\n';
  }
  return out.str();
}

McResult estimate_pi_c(const std::function<double(double, const std::vector<double>&)>& objective,
                       const McConfig& config) {
  if (config.max_trials < 2) {
    throw std::invalid_argument("estimate_pi_c: max_trials must be at least 2");
  }
  if (!(config.ci_level > 0.0 && config.ci_level < 1.0) || !(config.target_rel_error > 0.0)) {
    throw std::invalid_argument("estimate_pi_c: bad CI configuration");
  }

  RngStream root(config.seed);
  McResult result;
  std::vector<double> savings_seq;
  savings_seq.reserve(config.max_trials);
  double sum = 0.0;

  std::size_t wave = 0;
  bool stop = false;
  while (!stop && result.trials_used < config.max_trials) {
    const std::size_t remaining = config.max_trials - result.trials_used;
    const std::size_t batch = std::min(std::max<std::size_t>(config.batch, 2), remaining);
    RngStream wave_rng = root.split(wave++);
    const auto points = lhs_sample(batch, std::max<std::size_t>(config.dims, 1), wave_rng);

    for (const auto& point : points) {
      const std::size_t trial = result.trials_used;
      const double pi_c = point[0];
      double value = 0.0;
      try {
        value = objective(pi_c, point);
      } catch (const std::exception& e) {
        throw TrialError(trial, e.what());
      }
      savings_seq.push_back(value);
      sum += value;
      ++result.trials_used;

      TrialOutcome outcome;
      outcome.trial = trial;
      outcome.pi_c = pi_c;
      outcome.savings = value;
      outcome.running_mean = sum / static_cast<double>(result.trials_used);
      if (result.trials_used >= 2) {
        outcome.halfwidth = ci_halfwidth(savings_seq, config.ci_level);
        const double target = config.relative_error
                                  ? config.target_rel_error * std::abs(outcome.running_mean)
                                  : config.target_rel_error;
        if (outcome.halfwidth <= target) {
          stop = true;
          result.converged = true;
        }
      }
      result.samples.push_back(outcome);

      if (result.trials_used == 1 || value > result.best_savings) {
        result.best_savings = value;
        result.estimate = pi_c;
      }
      if (stop || result.trials_used >= config.max_trials) break;
    }
  }

  result.mean_savings = sum / static_cast<double>(result.trials_used);
  result.ci_halfwidth = result.samples.back().halfwidth;
  return result;
}

}  // namespace fogplan::montecarlo
