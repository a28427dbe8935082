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

#include "fogplan/mde.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "fogplan/parallel.hpp"

namespace fogplan::mde {

double MdeConfig::resolve_niche_radius(std::size_t genome_length) const {
  if (niche_radius > 0.0) return niche_radius;
  return 0.1 * std::sqrt(static_cast<double>(genome_length));
}

double genome_distance(const Genome& a, const Genome& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("genome_distance: length mismatch");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

double sharing_value(double distance, double rho, double phi) {
  if (!(rho > 0.0) || distance < 0.0) {
    throw std::invalid_argument("sharing_value: need rho > 0 and distance >= 0");
  }
  if (distance >= rho) return 0.0;
  return 1.0 - std::pow(distance / rho, phi);
}

double niche_count(std::size_t index, const std::vector<Individual>& pop, double rho,
                   double phi) {
  if (pop.empty() || index >= pop.size()) {
    throw std::invalid_argument("niche_count: bad index or empty population");
  }
  double count = 0.0;
  for (const Individual& other : pop) {
    count += sharing_value(genome_distance(pop[index].genome, other.genome), rho, phi);
  }
  return count;
}

double shared_fitness_min(double raw, double count) {
  if (!(count >= 1.0)) throw std::invalid_argument("shared_fitness_min: count must be >= 1");
  return raw * count;
}

double shared_fitness_max(double raw, double count) {
  if (!(count >= 1.0)) throw std::invalid_argument("shared_fitness_max: count must be >= 1");
  return raw / count;
}

Genome de_variation(const std::vector<Individual>& pop, std::size_t target,
                    const MdeConfig& config, RngStream& rng) {
  const std::size_t n = pop.size();
  if (n < 4) throw std::invalid_argument("de_variation: population must hold at least 4");
  const std::size_t dim = pop[target].genome.size();

  auto pick_distinct = [&](std::initializer_list<std::size_t> taboo) {
    for (;;) {
      const std::size_t r = static_cast<std::size_t>(rng.uniform_below(n));
      if (std::find(taboo.begin(), taboo.end(), r) == taboo.end()) return r;
    }
  };
  const std::size_t r1 = pick_distinct({target});
  const std::size_t r2 = pick_distinct({target, r1});
  const std::size_t r3 = pick_distinct({target, r1, r2});

  const std::size_t forced = static_cast<std::size_t>(rng.uniform_below(dim));
  Genome trial = pop[target].genome;
  for (std::size_t g = 0; g < dim; ++g) {
    if (g == forced || rng.uniform01() < config.crossover_rate) {
      const double v = pop[r1].genome[g] +
                       config.diff_weight * (pop[r2].genome[g] - pop[r3].genome[g]);
      trial[g] = std::clamp(v, 0.0, 1.0);
    }
  }
  return trial;
}

namespace {

// Sort-by-quality for minimization: ascending shared fitness, ties broken by
// a stable tag so runs are reproducible regardless of evaluation order.
void assign_shared_and_sort(std::vector<Individual>& pop, double rho, double phi) {
  for (std::size_t i = 0; i < pop.size(); ++i) {
    pop[i].niche_count = niche_count(i, pop, rho, phi);
    pop[i].shared_fitness = shared_fitness_min(pop[i].raw_fitness, pop[i].niche_count);
  }
  std::stable_sort(pop.begin(), pop.end(), [](const Individual& a, const Individual& b) {
    return a.shared_fitness < b.shared_fitness;
  });
}

}  // namespace

std::string EvolveResult::history_csv_header() {
  return "generation,best_raw,mean_raw,best_shared,feasible_count";
}

std::string EvolveResult::history_csv() const {
  std::ostringstream out;
  out << history_csv_header() << '\n';
  char buf[224];
  for (const GenerationStats& row : history) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g,%zu", row.generation, row.best_raw,
                  row.mean_raw, row.best_shared, row.feasible_count);
    out << buf << '\n';
  }
  return out.str();
}

EvolveResult evolve(const Problem& problem, const MdeConfig& config) {
  if (config.pop_size < 4) {
    throw std::invalid_argument("evolve: pop_size must be at least 4 for DE/rand/1");
  }
  if (problem.genome_length == 0 || !problem.objective) {
    throw std::invalid_argument("evolve: problem needs a genome length and an objective");
  }
  const std::size_t pop_size = config.pop_size;
  const std::size_t elite_size = std::max<std::size_t>(
      1, static_cast<std::size_t>(config.elite_fraction * static_cast<double>(pop_size)));
  const double rho = config.resolve_niche_radius(problem.genome_length);
  const double phi = config.share_exponent;

  RngStream root(config.seed);
  RngStream init_rng = root.split(0xA11CE);

  auto evaluate_all = [&](std::vector<Individual>& pop) {
    auto body = [&](std::size_t i) {
      const auto [raw, feasible] = problem.objective(pop[i].genome);
      pop[i].raw_fitness = raw;
      pop[i].feasible = feasible;
    };
    if (config.parallel) {
      parallel_for(pop.size(), body);
    } else {
      for (std::size_t i = 0; i < pop.size(); ++i) body(i);
    }
  };

  // Initial population: caller-provided seeds first, uniform random fill.
  std::vector<Individual> population(pop_size);
  for (std::size_t i = 0; i < pop_size; ++i) {
    if (i < problem.seeds.size()) {
      Genome g = problem.seeds[i];
      g.resize(problem.genome_length, 0.5);
      for (double& v : g) v = std::clamp(v, 0.0, 1.0);
      population[i].genome = std::move(g);
    } else {
      population[i].genome.resize(problem.genome_length);
      for (double& v : population[i].genome) v = init_rng.uniform01();
    }
  }
  evaluate_all(population);
  assign_shared_and_sort(population, rho, phi);
  std::vector<Individual> elite(population.begin(),
                                population.begin() + std::min(elite_size, population.size()));

  EvolveResult result;
  Individual best_any = population.front();
  for (const Individual& ind : population) {
    if (ind.raw_fitness < best_any.raw_fitness) best_any = ind;
  }
  Individual best_feasible;
  best_feasible.raw_fitness = std::numeric_limits<double>::infinity();
  auto consider = [&](const Individual& ind) {
    if (ind.raw_fitness < best_any.raw_fitness) best_any = ind;
    if (ind.feasible && ind.raw_fitness < best_feasible.raw_fitness) {
      best_feasible = ind;
      result.feasible_found = true;
    }
  };
  for (const Individual& ind : population) consider(ind);

  auto record = [&](std::size_t gen, const std::vector<Individual>& pop) {
    GenerationStats row;
    row.generation = gen;
    row.best_raw = pop.front().raw_fitness;
    row.mean_raw = 0.0;
    row.best_shared = pop.front().shared_fitness;
    for (const Individual& ind : pop) {
      row.best_raw = std::min(row.best_raw, ind.raw_fitness);
      row.best_shared = std::min(row.best_shared, ind.shared_fitness);
      row.mean_raw += ind.raw_fitness;
      row.feasible_count += ind.feasible ? 1 : 0;
    }
    row.mean_raw /= static_cast<double>(pop.size());
    result.history.push_back(row);
  };
  record(0, population);

  double stagnation_reference = best_any.raw_fitness;
  std::size_t stagnant = 0;

  for (std::size_t gen = 1; gen <= config.max_generations; ++gen) {
    RngStream gen_rng = root.split(gen);

    // Hybrid population H: one trial per parent.
    std::vector<Individual> hybrid(pop_size);
    auto vary = [&](std::size_t i) {
      RngStream stream = gen_rng.split(i);
      hybrid[i].genome = de_variation(population, i, config, stream);
    };
    if (config.parallel) {
      parallel_for(pop_size, vary);
    } else {
      for (std::size_t i = 0; i < pop_size; ++i) vary(i);
    }
    evaluate_all(hybrid);
    for (const Individual& ind : hybrid) consider(ind);

    // Shared-fitness sort, drop the worst half, merge with the elites and
    // re-sort the combined set under its own niche counts.
    assign_shared_and_sort(hybrid, rho, phi);
    hybrid.resize(std::min(pop_size - elite_size, hybrid.size()));
    hybrid.insert(hybrid.end(), elite.begin(), elite.end());
    assign_shared_and_sort(hybrid, rho, phi);
    if (hybrid.size() > pop_size) hybrid.resize(pop_size);

    // Guarantee the best offspring so far survives into the next generation.
    const bool best_present =
        std::any_of(hybrid.begin(), hybrid.end(), [&](const Individual& ind) {
          return ind.genome == best_any.genome;
        });
    if (!best_present) {
      hybrid.back() = best_any;
      assign_shared_and_sort(hybrid, rho, phi);
    }

    elite.assign(hybrid.begin(), hybrid.begin() + std::min(elite_size, hybrid.size()));
    population = std::move(hybrid);
    record(gen, population);
    result.generations_run = gen;

    if (stagnation_reference - best_any.raw_fitness > config.target_tolerance) {
      stagnation_reference = best_any.raw_fitness;
      stagnant = 0;
    } else if (++stagnant >= config.stagnation_limit) {
      break;
    }
  }

  result.best = result.feasible_found ? best_feasible : best_any;
  result.final_population = std::move(population);
  return result;
}

}  // namespace fogplan::mde
