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

#ifndef FOGPLAN_FEASIBILITY_HPP
#define FOGPLAN_FEASIBILITY_HPP

#include <array>
#include <string>
#include <vector>

#include "fogplan/decision.hpp"
#include "fogplan/params.hpp"
#include "fogplan/rng.hpp"
#include "fogplan/topology.hpp"

namespace fogplan::feasibility {

// The constraint groups of the placement MINLP. Names carry the equation
// numbers they implement.
enum class Constraint {
  kAssocReachable16,
  kAssocNeedsBu17,
  kBuExclusive18,
  kSingleFcn19,
  kForwardNeedsAssoc20,
  kFlowIndicator21,
  kFlowConservation22,
  kVmCount23,
  kVmIndicator27,
  kVmRouting28,
  kVmStorage29,
  kVmProcessing30,
  kQueueStability31,
  kDelayLimit32,
};
constexpr std::size_t kConstraintCount = 14;
const char* constraint_name(Constraint c);

struct Violation {
  Constraint constraint;
  double magnitude = 0.0;
  std::string detail;
};

// Per-constraint pass/fail with violation magnitudes. Feasible iff every
// magnitude is zero, i.e. the list is empty.
struct FeasibilityReport {
  std::vector<Violation> violations;

  void add(Constraint c, double magnitude, std::string detail);
  void merge(FeasibilityReport other);
  double total(Constraint c) const;
  double total() const;
  bool feasible() const { return violations.empty(); }
};

struct PenaltyWeights {
  std::array<double, kConstraintCount> weight;

  PenaltyWeights() { weight.fill(1.0); }
  static PenaltyWeights uniform(double w);
  double& operator[](Constraint c) { return weight[static_cast<std::size_t>(c)]; }
  double operator[](Constraint c) const { return weight[static_cast<std::size_t>(c)]; }
};

// Association structure: reachability (16), BU backing (17), BU exclusivity
// (18), exactly one FCN per consumer (19). Reports, never throws.
FeasibilityReport check_association(const DecisionVector& dv, const topology::Topology& topo);

// Workload allocation: forwarding only from fogs with associated consumers
// (20), flow/indicator linkage (21), flow conservation (22).
FeasibilityReport check_workload(const DecisionVector& dv, const topology::Topology& topo);

// VM deployment: service/placement linkage (27), routing needs a VM at the
// destination (28), storage (29) and processing (30) capacities, and the
// per-fog VM count bound (23).
FeasibilityReport check_vm(const DecisionVector& dv, const topology::Topology& topo,
                           const costmodel::ScenarioParams& params);

// Network QoS: queue stability with margin (31) and the end-to-end latency
// chain against the per-application delay limit (32).
FeasibilityReport check_network(const DecisionVector& dv, const topology::Topology& topo,
                                const costmodel::ScenarioParams& params);

FeasibilityReport check_all(const DecisionVector& dv, const topology::Topology& topo,
                            const costmodel::ScenarioParams& params);

// Weighted sum of violation magnitudes; zero iff the report is feasible.
// Weights must be positive.
double penalty(const FeasibilityReport& report, const PenaltyWeights& weights = PenaltyWeights{});

struct RepairResult {
  DecisionVector dv;
  std::vector<int> unserved;  // consumers no reachable fog could take
};

// Greedy structural repair:
//  - multi-associated consumers keep the nearest reachable fog (ties to the
//    lowest fog index), unassociated ones get the nearest reachable fog with
//    free BU capacity;
//  - BUs are reallocated evenly per fog;
//  - inter-fog flows are rescaled proportionally to restore conservation
//    (rows that vanish route locally);
//  - VM placements over the storage or count caps are dropped
//    lowest-traffic-first.
// Consumers that cannot be placed anywhere are reported, not silently fixed.
// Idempotent: repairing a repaired vector changes nothing.
RepairResult repair(const DecisionVector& dv, const topology::Topology& topo,
                    const costmodel::ScenarioParams& params, RngStream& rng);

}  // namespace fogplan::feasibility

#endif  // FOGPLAN_FEASIBILITY_HPP
