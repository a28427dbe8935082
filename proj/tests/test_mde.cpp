#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fogplan/mde.hpp"
#include "fogplan/placement.hpp"
#include "fogplan/rng.hpp"
#include "fogplan/topology.hpp"
#include "fogplan/toyvanet.hpp"
#include "helpers/toy_oracle.hpp"

using namespace fogplan;
using namespace fogplan::mde;

TEST_CASE("genome_distance") {
  const Genome a{0.5, 0.5}, b{0.5, 0.5};
  CHECK(genome_distance(a, b) == 0.0);
  CHECK(genome_distance({0.0}, {1.0}) == doctest::Approx(1.0));
  RngStream rng(5);
  for (int i = 0; i < 100; ++i) {
    Genome x(6), y(6);
    for (auto& v : x) v = rng.uniform01();
    for (auto& v : y) v = rng.uniform01();
    CHECK(genome_distance(x, y) == genome_distance(y, x));
  }
  CHECK_THROWS_AS(genome_distance({0.1}, {0.1, 0.2}), std::invalid_argument);
}

TEST_CASE("sharing_value boundary behavior") {
  CHECK(sharing_value(0.0, 0.5, 1.0) == doctest::Approx(1.0));
  CHECK(sharing_value(0.5, 0.5, 1.0) == 0.0);   // d == rho falls in the zero branch
  CHECK(sharing_value(0.7, 0.5, 1.0) == 0.0);
  CHECK(sharing_value(0.25, 0.5, 1.0) == doctest::Approx(0.5));
  CHECK(sharing_value(0.25, 0.5, 2.0) == doctest::Approx(0.75));
  CHECK_THROWS_AS(sharing_value(0.1, 0.0, 1.0), std::invalid_argument);
}

namespace {

Individual make_individual(Genome g, double raw) {
  Individual ind;
  ind.genome = std::move(g);
  ind.raw_fitness = raw;
  return ind;
}

}  // namespace

TEST_CASE("niche_count includes the self term") {
  std::vector<Individual> singleton{make_individual({0.5}, 1.0)};
  CHECK(niche_count(0, singleton, 0.2, 1.0) == doctest::Approx(1.0));

  std::vector<Individual> twins{make_individual({0.5}, 1.0), make_individual({0.5}, 2.0)};
  CHECK(niche_count(0, twins, 0.2, 1.0) == doctest::Approx(2.0));
  CHECK(niche_count(1, twins, 0.2, 1.0) == doctest::Approx(2.0));

  std::vector<Individual> apart{make_individual({0.0}, 1.0), make_individual({0.9}, 2.0)};
  CHECK(niche_count(0, apart, 0.2, 1.0) == doctest::Approx(1.0));
  CHECK(niche_count(1, apart, 0.2, 1.0) == doctest::Approx(1.0));
}

TEST_CASE("shared fitness variants") {
  CHECK(shared_fitness_min(3.0, 1.0) == doctest::Approx(3.0));
  CHECK(shared_fitness_min(3.0, 2.0) == doctest::Approx(6.0));
  CHECK(shared_fitness_max(4.0, 1.0) == doctest::Approx(4.0));
  CHECK(shared_fitness_max(4.0, 2.0) == doctest::Approx(2.0));
  // Algebraic identity: the two variants multiply back to the square.
  const double raw = 7.5, count = 3.25;
  CHECK(shared_fitness_min(raw, count) * shared_fitness_max(raw, count) ==
        doctest::Approx(raw * raw));
  CHECK_THROWS_AS(shared_fitness_min(1.0, 0.5), std::invalid_argument);
}

TEST_CASE("de_variation parameter degeneracies") {
  std::vector<Individual> pop;
  RngStream init(9);
  for (int i = 0; i < 6; ++i) {
    Genome g(4);
    for (auto& v : g) v = init.uniform01();
    pop.push_back(make_individual(g, 0.0));
  }

  // F_w = 0 with CR = 1 copies the base vector wholesale.
  MdeConfig copy_cfg;
  copy_cfg.diff_weight = 0.0;
  copy_cfg.crossover_rate = 1.0;
  RngStream a(1);
  const Genome trial = de_variation(pop, 0, copy_cfg, a);
  bool matches_some_member = false;
  for (std::size_t i = 1; i < pop.size(); ++i) {
    if (trial == pop[i].genome) matches_some_member = true;
  }
  CHECK(matches_some_member);

  // An identical population can only produce that same genome.
  std::vector<Individual> uniform(6, make_individual({0.3, 0.7, 0.1}, 0.0));
  MdeConfig cfg;
  RngStream c(2);
  CHECK(de_variation(uniform, 2, cfg, c) == uniform[0].genome);

  // Trials always stay in the unit box.
  MdeConfig wild;
  wild.diff_weight = 2.0;
  RngStream d(3);
  for (int i = 0; i < 10000; ++i) {
    const Genome t = de_variation(pop, static_cast<std::size_t>(i % 6), wild, d);
    for (const double v : t) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }

  std::vector<Individual> tiny(3, make_individual({0.5}, 0.0));
  RngStream e(4);
  CHECK_THROWS_AS(de_variation(tiny, 0, cfg, e), std::invalid_argument);
}

TEST_CASE("sharing neutrality: isolated niches rank like raw fitness") {
  // All pairwise distances at least rho: counts are 1, shared == raw, and the
  // induced ordering is the raw ordering.
  std::vector<Individual> pop;
  const double values[] = {4.0, 1.0, 3.0, 2.0};
  for (int i = 0; i < 4; ++i) {
    pop.push_back(make_individual({static_cast<double>(i) / 3.0}, values[i]));
  }
  const double rho = 0.2;
  std::vector<double> shared(4);
  for (std::size_t i = 0; i < 4; ++i) {
    const double count = niche_count(i, pop, rho, 1.0);
    CHECK(count == doctest::Approx(1.0));
    shared[i] = shared_fitness_min(pop[i].raw_fitness, count);
  }
  std::vector<std::size_t> by_raw{0, 1, 2, 3}, by_shared{0, 1, 2, 3};
  std::sort(by_raw.begin(), by_raw.end(),
            [&](auto a, auto b) { return pop[a].raw_fitness < pop[b].raw_fitness; });
  std::sort(by_shared.begin(), by_shared.end(),
            [&](auto a, auto b) { return shared[a] < shared[b]; });
  CHECK(by_raw == by_shared);
}

TEST_CASE("evolve solves the sphere far better than random search") {
  Problem sphere;
  sphere.genome_length = 10;
  sphere.objective = [](const Genome& g) {
    double s = 0.0;
    for (const double x : g) s += x * x;
    return std::make_pair(s, true);
  };
  MdeConfig cfg;
  cfg.pop_size = 40;
  cfg.max_generations = 200;
  cfg.stagnation_limit = 1000;
  cfg.seed = 12;
  const EvolveResult result = evolve(sphere, cfg);
  CHECK(result.best.raw_fitness < 1e-3);

  // Random search with the same evaluation budget.
  RngStream rng(12);
  double best_random = 1e300;
  for (std::size_t i = 0; i < cfg.pop_size * (cfg.max_generations + 1); ++i) {
    double s = 0.0;
    for (int d = 0; d < 10; ++d) {
      const double x = rng.uniform01();
      s += x * x;
    }
    best_random = std::min(best_random, s);
  }
  CHECK(best_random >= 10.0 * result.best.raw_fitness);
}

TEST_CASE("evolve is deterministic for a fixed seed") {
  Problem sphere;
  sphere.genome_length = 6;
  sphere.objective = [](const Genome& g) {
    double s = 0.0;
    for (const double x : g) s += (x - 0.3) * (x - 0.3);
    return std::make_pair(s, true);
  };
  MdeConfig cfg;
  cfg.pop_size = 24;
  cfg.max_generations = 60;
  cfg.seed = 77;
  const EvolveResult a = evolve(sphere, cfg);
  const EvolveResult b = evolve(sphere, cfg);
  CHECK(a.best.genome == b.best.genome);
  CHECK(a.best.raw_fitness == b.best.raw_fitness);
  REQUIRE(a.history.size() == b.history.size());
  for (std::size_t i = 0; i < a.history.size(); ++i) {
    CHECK(a.history[i].best_raw == b.history[i].best_raw);
    CHECK(a.history[i].mean_raw == b.history[i].mean_raw);
    CHECK(a.history[i].best_shared == b.history[i].best_shared);
  }
  CHECK(a.history_csv() == b.history_csv());

  MdeConfig other = cfg;
  other.seed = 78;
  CHECK(evolve(sphere, other).history_csv() != a.history_csv());
}

TEST_CASE("elitism: per-generation best raw fitness never worsens") {
  Problem wobble;
  wobble.genome_length = 5;
  wobble.objective = [](const Genome& g) {
    double s = 1.0;
    for (const double x : g) s += std::sin(13.0 * x) * 0.3 + x * x;
    return std::make_pair(s, true);
  };
  for (const std::uint64_t seed : {1ull, 33ull, 512ull}) {
    MdeConfig cfg;
    cfg.pop_size = 20;
    cfg.max_generations = 80;
    cfg.seed = seed;
    const EvolveResult result = evolve(wobble, cfg);
    for (std::size_t i = 1; i < result.history.size(); ++i) {
      CHECK(result.history[i].best_raw <= result.history[i - 1].best_raw + 1e-15);
    }
  }
}

TEST_CASE("fitness sharing holds both basins of a bimodal function") {
  // Equal minima of value 1 at x=0.25 and x=0.75. The positive floor keeps
  // the multiplicative sharing penalty alive at the optima; rho spans one
  // basin but not the gap between them.
  Problem bimodal;
  bimodal.genome_length = 1;
  bimodal.objective = [](const Genome& g) {
    const double a = std::fabs(g[0] - 0.25), b = std::fabs(g[0] - 0.75);
    return std::make_pair(1.0 + std::min(a, b), true);
  };
  MdeConfig cfg;
  cfg.pop_size = 40;
  cfg.max_generations = 120;
  cfg.niche_radius = 0.3;
  cfg.stagnation_limit = 1000;
  cfg.seed = 3;
  const EvolveResult result = evolve(bimodal, cfg);
  int left = 0, right = 0;
  for (const Individual& ind : result.final_population) {
    (std::fabs(ind.genome[0] - 0.25) < std::fabs(ind.genome[0] - 0.75) ? left : right)++;
  }
  CHECK(left >= 8);   // at least 20% of 40
  CHECK(right >= 8);
  // Each individual carries its sharing bookkeeping consistently.
  for (const Individual& ind : result.final_population) {
    CHECK(ind.shared_fitness ==
          doctest::Approx(ind.raw_fitness * ind.niche_count).epsilon(1e-12));
    CHECK(ind.niche_count >= 1.0);
  }
}

TEST_CASE("evolve reaches the VANET optimum confirmed by enumeration") {
  const auto fixture = toyvanet::ToyFixture::standard();
  const auto oracle = fogplan_tests::brute_force_toy_optimum(fixture);
  CHECK(oracle.cost == doctest::Approx(43.0));

  MdeConfig cfg;
  cfg.pop_size = 40;
  cfg.max_generations = 300;
  cfg.seed = 4242;
  const EvolveResult result = evolve(toyvanet::toy_mde_problem(fixture), cfg);
  CHECK(result.feasible_found);
  CHECK(result.best.raw_fitness == doctest::Approx(oracle.cost));
}

TEST_CASE("small placement instances match grid enumeration within 1%") {
  // Every 2-consumer / 2-FCN / 2-BU instance on a small parameter grid:
  // enumerate all binary assignments with the continuous frequency on a
  // 10-point grid, then compare against the optimizer.
  for (const double arrival : {0.5, 1.0, 2.0}) {
    costmodel::ScenarioParams params = costmodel::pilot_params();
    params.n_fog = 2;
    params.n_servers = 1;
    params.n_consumers = 2;
    params.bu_per_fog = 2;
    params.arrival_rate_per_consumer = arrival;
    params.reach_radius_km = 1e9;
    const auto topo = topology::generate_topology(params, 5);
    const placement::PlacementProblem problem(topo, params);

    double best_enum = 1e300;
    const std::size_t n = 2;
    Genome genome(problem.genome_length(), 0.5);
    for (int a0 = 0; a0 < 2; ++a0) {
      for (int a1 = 0; a1 < 2; ++a1) {
        for (int v0 = 0; v0 < 2; ++v0) {
          for (int v1 = 0; v1 < 2; ++v1) {
            for (int eta = 0; eta < 10; ++eta) {
              genome[0] = a0 == 0 ? 0.25 : 0.75;
              genome[1] = a1 == 0 ? 0.25 : 0.75;
              genome[n + 0] = v0 == 0 ? 0.25 : 0.75;
              genome[n + 1] = v1 == 0 ? 0.25 : 0.75;
              genome[n + 2] = (eta + 0.5) / 10.0;
              const auto ev = problem.evaluate(problem.decode(genome));
              if (ev.feasible) best_enum = std::min(best_enum, ev.objective);
            }
          }
        }
      }
    }

    MdeConfig cfg;
    cfg.pop_size = 24;
    cfg.max_generations = 120;
    cfg.seed = 99;
    const EvolveResult result = evolve(problem.as_mde_problem(), cfg);
    REQUIRE(result.feasible_found);
    INFO("arrival ", arrival, ": evolve ", result.best.raw_fitness, " enum ", best_enum);
    CHECK(result.best.raw_fitness <= best_enum * 1.01);
  }
}

TEST_CASE("placement genome decode/encode reproduces binaries exactly") {
  costmodel::ScenarioParams params = costmodel::pilot_params();
  params.n_fog = 4;
  params.n_servers = 1;
  params.n_consumers = 6;
  params.reach_radius_km = 1e9;
  const auto topo = topology::generate_topology(params, 8);
  const placement::PlacementProblem problem(topo, params);

  RngStream rng(21);
  for (int i = 0; i < 50; ++i) {
    Genome genome(problem.genome_length());
    for (auto& v : genome) v = rng.uniform01();
    const auto dv = problem.decode(genome);
    const auto round = problem.decode(problem.encode(dv));
    CHECK(round.assoc == dv.assoc);
    CHECK(round.vm_placement == dv.vm_placement);
    CHECK(round.offload_fog == dv.offload_fog);
  }
}

TEST_CASE("the decoded best individual honors the repair contract") {
  costmodel::ScenarioParams params = costmodel::pilot_params();
  params.n_fog = 8;
  params.n_servers = 1;
  params.n_consumers = 16;
  const auto topo = topology::generate_topology(params, 2);
  const placement::PlacementProblem problem(topo, params);
  MdeConfig cfg;
  cfg.pop_size = 20;
  cfg.max_generations = 40;
  cfg.seed = 7;
  const EvolveResult result = evolve(problem.as_mde_problem(), cfg);
  REQUIRE(result.feasible_found);
  const auto dv = problem.decode(result.best.genome);
  CHECK(feasibility::check_association(dv, topo).feasible());
  CHECK(feasibility::check_workload(dv, topo).feasible());
}

TEST_CASE("evolve stops on stagnation") {
  Problem flat;
  flat.genome_length = 3;
  flat.objective = [](const Genome&) { return std::make_pair(1.0, true); };
  MdeConfig cfg;
  cfg.pop_size = 8;
  cfg.max_generations = 500;
  cfg.stagnation_limit = 12;
  cfg.seed = 5;
  const EvolveResult result = evolve(flat, cfg);
  CHECK(result.generations_run == 12);
}

TEST_CASE("evolve flags problems with no feasible point") {
  Problem hopeless;
  hopeless.genome_length = 2;
  hopeless.objective = [](const Genome& g) {
    return std::make_pair(1.0 + g[0] + g[1], false);
  };
  MdeConfig cfg;
  cfg.pop_size = 10;
  cfg.max_generations = 20;
  cfg.seed = 6;
  const EvolveResult result = evolve(hopeless, cfg);
  CHECK_FALSE(result.feasible_found);
  CHECK(result.best.raw_fitness < 3.0 + 1e-12);  // still the best-penalty point
}
