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

#ifndef FOGPLAN_COSTMODEL_HPP
#define FOGPLAN_COSTMODEL_HPP

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fogplan/decision.hpp"
#include "fogplan/params.hpp"
#include "fogplan/topology.hpp"

namespace fogplan::costmodel {

// A consumer with no uplink allocation cannot be served.
class UnservedConsumerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Per-request latency components, seconds. These are the raw terms; cost and
// reporting layers apply the probability weights.
struct LatencyTerms {
  double upload = 0.0;
  double fog_comp = 0.0;
  double interfog = 0.0;
  double dispatch = 0.0;
  double cloud_comp = 0.0;
};

// Power components, watts.
struct PowerTerms {
  double tx = 0.0;
  double fog_comp = 0.0;
  double cloud_comp = 0.0;
  double total() const { return tx + fog_comp + cloud_comp; }
};

// Cost split over one horizon, USD. total is always the exact sum of the four
// components; latency and power carry the mean per-request terms and the
// aggregate power draws behind the money numbers.
struct CostBreakdown {
  double comm = 0.0;
  double comp = 0.0;
  double cons = 0.0;
  double ems = 0.0;
  double total = 0.0;
  LatencyTerms latency;
  PowerTerms power;

  void finalize() { total = comm + comp + cons + ems; }

  static std::string csv_header();
  std::string to_csv_row(const std::string& scenario_id, std::int64_t n_consumers,
                         double fne_value) const;
  std::string to_json_string(const std::string& scenario_id, std::int64_t n_consumers,
                             double fne_value) const;
};

// --- Elementary cost/latency/power formulas ---------------------------------

// Upload latency: volume / (allocated_bus * bu_rate). allocated_bus may be a
// fractional share when BUs are statistically multiplexed; it must be
// positive, otherwise the consumer is unserved.
double upload_latency(double volume_bytes, double allocated_bus, double bu_rate);

// Inter-fog transfer latency: payload / link_rate.
double interfog_latency(double payload_bytes, double link_rate);

// WAN dispatch latency: wan_factor * dispatch_rate (delay proportional to the
// rate pushed onto the fog-cloud path).
double dispatch_latency(double wan_factor, double dispatch_rate);

// Communication cost of a fog-path request:
//   alpha * [upload + fog_comp + pi_f*interfog + (1-pi_f)*dispatch
//            + (1-pi_f)*(1-pi_cs)*cloud_comp]
double fog_comm_cost(const LatencyTerms& lat, double pi_f, double pi_cs, double alpha_comm);

// Aggregate inter-VM traffic cost: sum over VM pairs (i, j) placed at fogs
// (f, g) of traffic[i][j] * unit_price[f][g]. Each placement row must be
// all-zero (unplaced) or one-hot.
double traffic_cost(const std::vector<std::vector<std::uint8_t>>& vm_placement,
                    const std::vector<std::vector<double>>& inter_vm_traffic,
                    const std::vector<std::vector<double>>& unit_price);

// Quadratic fog power over a load window: associated * energy * weight *
// sum(a*y^2 + b*y + c). Strict convexity requires a > 0.
double fog_comp_power(std::span<const double> loads, const FogPowerCoeffs& coeffs, double weight,
                      double energy, bool associated);

// Cloud machine power: (1-associated) * on * machines * (A*eta^Delta + B).
double cloud_comp_power(bool server_on, int machines, double freq, const CloudPowerCoeffs& coeffs,
                        bool associated);

// Emission cost over the horizon: (1-pi_f) * zeta * R * PUE * beta_c, with the
// watt-hours integrated over horizon_hours and converted to kWh.
double emission_cost(double pi_f, const ScenarioParams& params);

// Fog network efficiency: the fraction of packets entering the fog tier that
// never needed cloud dispatch, (packets_into_fog - packets_to_cloud) /
// packets_into_fog.
double fne(double packets_to_cloud, double packets_into_fog);

// --- Assignment-level evaluation --------------------------------------------

// Total transmission + computation power of an assignment, watts.
PowerTerms net_power_terms(const feasibility::DecisionVector& dv, const topology::Topology& topo,
                           const ScenarioParams& params);
double net_power(const feasibility::DecisionVector& dv, const topology::Topology& topo,
                 const ScenarioParams& params);

// Cloud-only execution: every consumer's traffic crosses the WAN into the
// data centers. Ignores the fog-side fields of dv.
CostBreakdown total_cloud_cost(const feasibility::DecisionVector& dv,
                               const topology::Topology& topo, const ScenarioParams& params);

// Fog-assisted execution per the offload split: consumers on the fog path
// weighted by (1-pi_c), consumers sent straight to cloud weighted by pi_c.
CostBreakdown total_fog_cost(const feasibility::DecisionVector& dv,
                             const topology::Topology& topo, const ScenarioParams& params);

// Machine service rate as a function of CPU frequency (optionally derived
// from cycles-per-request), and the sizing policy used by the assignment
// builders: enough machines for the load at the utilization target.
double cloud_machine_rate(const ScenarioParams& params, double freq);
int machines_needed(double arrival_rate, double machine_rate, double util_target, int machine_max);

}  // namespace fogplan::costmodel

#endif  // FOGPLAN_COSTMODEL_HPP
