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

#ifndef FOGPLAN_DECISION_HPP
#define FOGPLAN_DECISION_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace fogplan::feasibility {

// The full MINLP assignment. Binary structure is stored in index/list form
// rather than dense 0/1 matrices; the logical matrices of the constraint set
// map onto it as follows:
//
//   BV1  offload_fog[i]           consumer i served on the fog path
//   BV2  assoc[i]                 fog ids consumer i is associated with
//                                 (a well-formed vector has exactly one)
//   BV3  bu_owners[f][s]          consumers holding BU slot s of fog f;
//                                 empty bu_owners means BU bookkeeping is
//                                 statistical and allocated_bus[i] carries the
//                                 (possibly fractional) per-consumer share
//   BV4  interfog_rate[a][f][g]>0 fog f forwards app-a data to fog g
//   BV5  vm_placement[a][f]       a VM for app a is deployed on fog f
//   BVc  cloud_on[s]              cloud server s powered on
//
// Instances are plain values: cheap to copy across optimizer workers.
struct DecisionVector {
  int schema_version = 1;
  int n_apps = 1;

  std::vector<int> consumer_app;           // app id per consumer
  std::vector<std::vector<int>> assoc;     // per consumer: associated fog ids
  std::vector<double> allocated_bus;       // per consumer: BUs allotted (>= 0)
  std::vector<std::vector<std::vector<int>>> bu_owners;  // [fog][slot] -> consumers
  std::vector<std::uint8_t> offload_fog;   // per consumer: 1 = fog path
  // Explicit BV4; empty means "derived from interfog_rate" (the indicator of
  // a positive flow), which is always self-consistent.
  std::vector<std::vector<std::vector<std::uint8_t>>> interfog_assoc;  // [app][f][g]
  std::vector<std::vector<std::uint8_t>> vm_placement;   // [app][fog]
  std::vector<std::uint8_t> cloud_on;      // per server

  std::vector<double> workload_rate;       // r^a_{i,f}: requests/s from consumer i
  std::vector<std::vector<std::vector<double>>> interfog_rate;  // [app][f][g] requests/s
  std::vector<double> cloud_workload;      // y_j per server, requests/s
  std::vector<double> dispatch_rate;       // Gamma_{f-c} per fog, requests/s
  std::vector<double> cpu_freq;            // eta per server
  std::vector<int> machines_on;            // n_m per server

  std::size_t n_consumers() const { return assoc.size(); }
  std::size_t n_fogs() const { return vm_placement.empty() ? 0 : vm_placement[0].size(); }

  // Requests/s of app `app` processed at fog `fog`: the inbound column of the
  // inter-fog flow matrix (the diagonal is local processing).
  double processed_rate(int app, int fog) const;

  // Requests/s entering fog `fog` from its associated consumers of app `app`.
  double inflow_rate(int app, int fog) const;

  // Allocates zeroed fields for the given shape.
  static DecisionVector make_empty(std::size_t consumers, std::size_t fogs,
                                   std::size_t servers, int apps);

  std::string to_json_string() const;
  static DecisionVector from_json_string(const std::string& text);
};

}  // namespace fogplan::feasibility

#endif  // FOGPLAN_DECISION_HPP
