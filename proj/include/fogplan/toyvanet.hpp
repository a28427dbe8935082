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

#ifndef FOGPLAN_TOYVANET_HPP
#define FOGPLAN_TOYVANET_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "fogplan/costmodel.hpp"
#include "fogplan/decision.hpp"
#include "fogplan/mde.hpp"
#include "fogplan/params.hpp"
#include "fogplan/topology.hpp"

namespace fogplan::toyvanet {

// The connected-vehicle pilot: four EV drivers running one charging app each,
// ten roadside units with four bandwidth units apiece, unit-cost pricing.
// Association is possible only at RSUs offering uplink service; VMs can only
// be hosted at the VM-capable RSUs, one slot each. All quantities are
// abstract cost units, so every result is exact integer arithmetic.
struct ToyFixture {
  int n_users = 4;
  int n_rsus = 10;
  int bus_per_rsu = 4;
  double bu_rate = 1.0;    // upload units per time unit contributed by one BU
  double vm_price = 2.0;   // per hosted VM per time unit
  double hop_price = 5.0;  // per inter-RSU hop

  std::vector<std::pair<int, int>> links;  // undirected RSU adjacency
  std::vector<double> uplink_price;        // per RSU; negative = no uplink service
  std::vector<std::uint8_t> vm_capable;    // per RSU
  std::vector<std::vector<int>> hops;      // shortest-path hop counts

  std::vector<int> priced_rsus() const;
  std::vector<int> capable_rsus() const;

  static ToyFixture standard();
};

// One operating configuration: the RSU each driver uploads through and the
// RSU hosting that driver's VM.
struct ToyAssignment {
  std::vector<int> assoc;
  std::vector<int> vm_host;
};

struct ToyBreakdown {
  double upload_cost = 0.0;
  double vm_cost = 0.0;
  double inter_rsu_cost = 0.0;
  double total = 0.0;
  double upload_delay = 0.0;  // per driver, time units

  costmodel::CostBreakdown as_cost_breakdown() const;
};

// The two configurations walked through in the worked example.
ToyAssignment scenario_one(const ToyFixture& fixture);
ToyAssignment scenario_two(const ToyFixture& fixture);

// True when every driver sits on a priced RSU within BU capacity and the VMs
// occupy distinct capable RSUs.
bool toy_feasible(const ToyFixture& fixture, const ToyAssignment& assignment);

// Unit-cost evaluation: uplink price per driver, VM hosting, and hop-priced
// inter-RSU transfer from the association RSU to the VM host.
ToyBreakdown evaluate_toy(const ToyFixture& fixture, const ToyAssignment& assignment);

// Improvement of scenario 2 over scenario 1 as a percentage, truncated (not
// rounded) to two decimals; the worked example reports 41.09.
double improvement_percent(double base_total, double improved_total);

// The fixture expressed through the general machinery, so the full constraint
// checks run on it: RSUs become fog nodes (VM capability via the per-fog VM
// cap), drivers become consumers of four distinct applications.
topology::Topology toy_topology(const ToyFixture& fixture);
costmodel::ScenarioParams toy_params(const ToyFixture& fixture);
feasibility::DecisionVector toy_decision_vector(const ToyFixture& fixture,
                                                const ToyAssignment& assignment);

// Genome wiring for the optimizer: one association gene per driver over the
// priced RSUs, one host gene per driver over all RSUs, with duplicate or
// non-capable hosts repaired to the nearest free capable RSU.
ToyAssignment decode_toy_genome(const ToyFixture& fixture, const mde::Genome& genome);
mde::Problem toy_mde_problem(const ToyFixture& fixture);

}  // namespace fogplan::toyvanet

#endif  // FOGPLAN_TOYVANET_HPP
