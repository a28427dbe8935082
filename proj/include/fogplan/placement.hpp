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

#ifndef FOGPLAN_PLACEMENT_HPP
#define FOGPLAN_PLACEMENT_HPP

#include "fogplan/costmodel.hpp"
#include "fogplan/decision.hpp"
#include "fogplan/feasibility.hpp"
#include "fogplan/mde.hpp"
#include "fogplan/params.hpp"
#include "fogplan/topology.hpp"

namespace fogplan::placement {

// Default fog-assisted assignment: every consumer on its own city's fog node,
// BUs split evenly, flows mostly local with a small inter-fog share, one VM
// per fog that processes traffic, cloud machines sized for the dispatched
// spillover.
feasibility::DecisionVector make_fog_assignment(const topology::Topology& topo,
                                                const costmodel::ScenarioParams& params);

// Cloud-only baseline: same consumers and gateways, everything marked for
// direct cloud execution, machine pools sized for the full load.
feasibility::DecisionVector make_cloud_assignment(const topology::Topology& topo,
                                                  const costmodel::ScenarioParams& params);

// Mixed execution: the leading direct_share of every city's consumers goes
// straight to cloud, the rest take the fog path; machine pools are sized for
// the combined arrival stream.
feasibility::DecisionVector make_mixed_assignment(const topology::Topology& topo,
                                                  const costmodel::ScenarioParams& params,
                                                  double direct_share);

// The MINLP instance the optimizer works on. Genome layout:
//   [0, N)          per-consumer association, index into the consumer's
//                   nearest-first reachable fog list
//   [N, N+F)        per-fog VM deployment, threshold 0.5
//   [N+F, N+F+D)    per-server CPU frequency, scaled into its range
// Decoding repairs the association structure, derives the inter-fog flows
// (each fog routes to its nearest deployed VM), and sizes the cloud pools.
class PlacementProblem {
 public:
  PlacementProblem(const topology::Topology& topo, const costmodel::ScenarioParams& params);

  std::size_t genome_length() const;
  feasibility::DecisionVector decode(const mde::Genome& genome) const;
  mde::Genome encode(const feasibility::DecisionVector& dv) const;

  struct Evaluation {
    double objective = 0.0;  // cost plus weighted constraint penalty
    double cost = 0.0;
    double penalty = 0.0;
    bool feasible = false;
  };
  Evaluation evaluate(const feasibility::DecisionVector& dv) const;

  // Nearest-fog association with local processing and VMs where traffic
  // lands; a decent starting point the optimizer can only improve on.
  feasibility::DecisionVector greedy_seed() const;

  // Packaged for the optimizer, greedy seed included.
  mde::Problem as_mde_problem() const;

  void set_penalty_weight(double w) { penalty_weight_ = w; }

 private:
  const topology::Topology* topo_;
  const costmodel::ScenarioParams* params_;
  std::vector<std::vector<int>> candidates_;  // per city: reachable fogs, nearest first
  double penalty_weight_ = 1e6;
};

}  // namespace fogplan::placement

#endif  // FOGPLAN_PLACEMENT_HPP
