#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fogplan/rng.hpp"
#include "fogplan/toyvanet.hpp"
#include "helpers/toy_oracle.hpp"

using namespace fogplan;
using namespace fogplan::toyvanet;

TEST_CASE("fixture graph has the documented hop structure") {
  const ToyFixture f = ToyFixture::standard();
  // Hosts of scenario 1 sit 0, 2, 3 and 4 hops from R1.
  CHECK(f.hops[0][0] == 0);
  CHECK(f.hops[0][2] == 2);
  CHECK(f.hops[0][3] == 3);
  CHECK(f.hops[0][6] == 4);
  // Scenario-2 hops: R2->R3 one, R5->R4 two, R10->R9 one.
  CHECK(f.hops[1][2] == 1);
  CHECK(f.hops[4][3] == 2);
  CHECK(f.hops[9][8] == 1);
  // Symmetry and identity.
  for (int a = 0; a < f.n_rsus; ++a) {
    CHECK(f.hops[a][a] == 0);
    for (int b = 0; b < f.n_rsus; ++b) {
      CHECK(f.hops[a][b] == f.hops[b][a]);
      CHECK(f.hops[a][b] >= 0);
    }
  }
  CHECK(f.priced_rsus() == std::vector<int>{0, 1, 4, 9});
  CHECK(f.capable_rsus() == std::vector<int>{0, 2, 3, 6, 8});
}

TEST_CASE("scenario 1 costs 20 + 8 + 45 = 73 with unit upload delay") {
  const ToyFixture f = ToyFixture::standard();
  const ToyBreakdown b = evaluate_toy(f, scenario_one(f));
  CHECK(b.upload_cost == 20.0);
  CHECK(b.vm_cost == 8.0);
  CHECK(b.inter_rsu_cost == 45.0);
  CHECK(b.total == 73.0);
  CHECK(b.upload_delay == 1.0);
}

TEST_CASE("scenario 2 costs 15 + 8 + 20 = 43 with quarter upload delay") {
  const ToyFixture f = ToyFixture::standard();
  const ToyBreakdown b = evaluate_toy(f, scenario_two(f));
  CHECK(b.upload_cost == 15.0);
  CHECK(b.vm_cost == 8.0);
  CHECK(b.inter_rsu_cost == 20.0);
  CHECK(b.total == 43.0);
  CHECK(b.upload_delay == 0.25);
}

TEST_CASE("improvement is truncated to two decimals: 41.09") {
  CHECK(improvement_percent(73.0, 43.0) == 41.09);
  CHECK_THROWS_AS(improvement_percent(0.0, 1.0), std::invalid_argument);
}

TEST_CASE("both scenarios are feasible; broken variants are not") {
  const ToyFixture f = ToyFixture::standard();
  CHECK(toy_feasible(f, scenario_one(f)));
  CHECK(toy_feasible(f, scenario_two(f)));

  ToyAssignment bad_assoc = scenario_two(f);
  bad_assoc.assoc[0] = 2;  // R3 sells no uplink
  CHECK_FALSE(toy_feasible(f, bad_assoc));

  ToyAssignment bad_host = scenario_two(f);
  bad_host.vm_host[0] = 1;  // R2 cannot host VMs
  CHECK_FALSE(toy_feasible(f, bad_host));

  ToyAssignment shared_host = scenario_two(f);
  shared_host.vm_host[1] = shared_host.vm_host[0];
  CHECK_FALSE(toy_feasible(f, shared_host));
}

TEST_CASE("the exhaustive optimum is scenario 2's cost") {
  const ToyFixture f = ToyFixture::standard();
  const auto best = fogplan_tests::brute_force_toy_optimum(f);
  CHECK(best.cost == 43.0);
  CHECK(evaluate_toy(f, best.assignment).total == 43.0);
  CHECK(toy_feasible(f, best.assignment));
}

TEST_CASE("genome decode is total: every genome yields a feasible assignment") {
  const ToyFixture f = ToyFixture::standard();
  RngStream rng(88);
  for (int i = 0; i < 2000; ++i) {
    mde::Genome g(8);
    for (auto& v : g) v = rng.uniform01();
    const ToyAssignment a = decode_toy_genome(f, g);
    CHECK(toy_feasible(f, a));
  }
  // The optimum is reachable through the decoder.
  mde::Genome exact{0.1, 0.3, 0.6, 0.9, 0.05, 0.25, 0.35, 0.85};
  const ToyAssignment a = decode_toy_genome(f, exact);
  CHECK(evaluate_toy(f, a).total == 43.0);
}

TEST_CASE("paired cost breakdown keeps additivity") {
  const ToyFixture f = ToyFixture::standard();
  const auto b = evaluate_toy(f, scenario_one(f)).as_cost_breakdown();
  CHECK(b.comm == 65.0);
  CHECK(b.comp == 8.0);
  CHECK(b.total == 73.0);
  CHECK(b.total == b.comm + b.comp + b.cons + b.ems);
}
