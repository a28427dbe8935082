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

#ifndef FOGPLAN_MDE_HPP
#define FOGPLAN_MDE_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fogplan/rng.hpp"

namespace fogplan::mde {

// A genome is a point in the [0,1]^L box. Continuous decision variables are
// scaled into the box; binaries live as relaxed reals decoded by a 0.5
// threshold (the decoder may refine that with index mapping).
using Genome = std::vector<double>;

struct MdeConfig {
  std::size_t pop_size = 40;       // |P|; at least 4 for DE/rand/1
  double niche_radius = -1.0;      // rho; negative means 0.1 * sqrt(genome length)
  double share_exponent = 1.0;     // phi
  double diff_weight = 0.5;        // F_w
  double crossover_rate = 0.9;     // CR
  double elite_fraction = 0.5;     // |E| = elite_fraction * pop_size
  std::size_t max_generations = 500;
  double target_tolerance = 1e-9;
  std::size_t stagnation_limit = 50;  // generations without best-ever improvement
  std::uint64_t seed = 0;
  bool parallel = true;

  double resolve_niche_radius(std::size_t genome_length) const;
};

struct Individual {
  Genome genome;
  double raw_fitness = 0.0;     // minimization objective
  double shared_fitness = 0.0;  // raw * niche_count
  double niche_count = 1.0;
  bool feasible = false;
};

// What evolve() optimizes: a pure minimization objective over genomes,
// returning the fitness and whether the decoded solution is feasible.
// Optional seed genomes are injected into the initial population.
struct Problem {
  std::size_t genome_length = 0;
  std::function<std::pair<double, bool>(const Genome&)> objective;
  std::vector<Genome> seeds;
};

struct GenerationStats {
  std::size_t generation = 0;
  double best_raw = 0.0;
  double mean_raw = 0.0;
  double best_shared = 0.0;
  std::size_t feasible_count = 0;
};

struct EvolveResult {
  Individual best;             // best-ever feasible individual when one exists,
                               // otherwise the best-penalty solution found
  bool feasible_found = false;
  std::vector<GenerationStats> history;
  std::vector<Individual> final_population;
  std::size_t generations_run = 0;

  static std::string history_csv_header();
  std::string history_csv() const;
};

// Euclidean distance between genomes of equal length.
double genome_distance(const Genome& a, const Genome& b);

// Sharing kernel: 1 - (d/rho)^phi for d < rho, else 0.
double sharing_value(double distance, double rho, double phi);

// Niche count of pop[index]: sum of sharing values over the whole population,
// self included, so the count is always at least 1.
double niche_count(std::size_t index, const std::vector<Individual>& pop, double rho, double phi);

// Minimization sharing: crowded individuals are penalized upward.
double shared_fitness_min(double raw, double count);

// Maximization variant, kept for completeness.
double shared_fitness_max(double raw, double count);

// DE/rand/1/bin trial vector for pop[target]: base + F_w * difference of two
// other distinct members, binomially crossed with the target at rate CR with
// one forced gene, clamped to the unit box.
Genome de_variation(const std::vector<Individual>& pop, std::size_t target,
                    const MdeConfig& config, RngStream& rng);

// The generational loop: hybrid population by DE variation, shared-fitness
// sort, worst-half removal, merge with the elite set, elite refresh. Stops at
// max_generations or after stagnation_limit generations without the best-ever
// fitness improving by more than target_tolerance.
EvolveResult evolve(const Problem& problem, const MdeConfig& config);

}  // namespace fogplan::mde

#endif  // FOGPLAN_MDE_HPP
