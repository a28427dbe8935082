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

#include "fogplan/feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "fogplan/costmodel.hpp"
#include "fogplan/errors.hpp"
#include "fogplan/queueing.hpp"

namespace fogplan::feasibility {

using nlohmann::json;
using topology::Topology;

// ---------------------------------------------------------------------------
// DecisionVector

double DecisionVector::processed_rate(int app, int fog) const {
  if (app < 0 || app >= static_cast<int>(interfog_rate.size())) return 0.0;
  double sum = 0.0;
  for (const auto& row : interfog_rate[app]) {
    if (fog < static_cast<int>(row.size())) sum += row[fog];
  }
  return sum;
}

double DecisionVector::inflow_rate(int app, int fog) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < assoc.size(); ++i) {
    if (consumer_app[i] != app || assoc[i].empty() || assoc[i][0] != fog) continue;
    sum += workload_rate[i];
  }
  return sum;
}

DecisionVector DecisionVector::make_empty(std::size_t consumers, std::size_t fogs,
                                          std::size_t servers, int apps) {
  DecisionVector dv;
  dv.n_apps = apps;
  dv.consumer_app.assign(consumers, 0);
  dv.assoc.assign(consumers, {});
  dv.allocated_bus.assign(consumers, 0.0);
  dv.offload_fog.assign(consumers, 1);
  dv.vm_placement.assign(apps, std::vector<std::uint8_t>(fogs, 0));
  dv.cloud_on.assign(servers, 0);
  dv.workload_rate.assign(consumers, 0.0);
  dv.interfog_rate.assign(apps,
                          std::vector<std::vector<double>>(fogs, std::vector<double>(fogs, 0.0)));
  dv.cloud_workload.assign(servers, 0.0);
  dv.dispatch_rate.assign(fogs, 0.0);
  dv.cpu_freq.assign(servers, 1.0);
  dv.machines_on.assign(servers, 0);
  return dv;
}

std::string DecisionVector::to_json_string() const {
  json j;
  j["schema_version"] = schema_version;
  j["n_apps"] = n_apps;
  j["consumer_app"] = consumer_app;
  j["assoc"] = assoc;
  j["allocated_bus"] = allocated_bus;
  j["bu_owners"] = bu_owners;
  j["offload_fog"] = offload_fog;
  j["interfog_assoc"] = interfog_assoc;
  j["vm_placement"] = vm_placement;
  j["cloud_on"] = cloud_on;
  j["workload_rate"] = workload_rate;
  j["interfog_rate"] = interfog_rate;
  j["cloud_workload"] = cloud_workload;
  j["dispatch_rate"] = dispatch_rate;
  j["cpu_freq"] = cpu_freq;
  j["machines_on"] = machines_on;
  return j.dump(2);
}

DecisionVector DecisionVector::from_json_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("decision vector parse error: ") + e.what());
  }
  try {
    if (j.at("schema_version").get<int>() != 1) {
      throw ConfigError("decision vector: unsupported schema version");
    }
    DecisionVector dv;
    dv.n_apps = j.at("n_apps").get<int>();
    dv.consumer_app = j.at("consumer_app").get<std::vector<int>>();
    dv.assoc = j.at("assoc").get<std::vector<std::vector<int>>>();
    dv.allocated_bus = j.at("allocated_bus").get<std::vector<double>>();
    dv.bu_owners = j.at("bu_owners").get<std::vector<std::vector<std::vector<int>>>>();
    dv.offload_fog = j.at("offload_fog").get<std::vector<std::uint8_t>>();
    dv.interfog_assoc =
        j.at("interfog_assoc").get<std::vector<std::vector<std::vector<std::uint8_t>>>>();
    dv.vm_placement = j.at("vm_placement").get<std::vector<std::vector<std::uint8_t>>>();
    dv.cloud_on = j.at("cloud_on").get<std::vector<std::uint8_t>>();
    dv.workload_rate = j.at("workload_rate").get<std::vector<double>>();
    dv.interfog_rate = j.at("interfog_rate").get<std::vector<std::vector<std::vector<double>>>>();
    dv.cloud_workload = j.at("cloud_workload").get<std::vector<double>>();
    dv.dispatch_rate = j.at("dispatch_rate").get<std::vector<double>>();
    dv.cpu_freq = j.at("cpu_freq").get<std::vector<double>>();
    dv.machines_on = j.at("machines_on").get<std::vector<int>>();
    return dv;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("decision vector field error: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Reports and penalties

const char* constraint_name(Constraint c) {
  switch (c) {
    case Constraint::kAssocReachable16: return "assoc_reachable_16";
    case Constraint::kAssocNeedsBu17: return "assoc_needs_bu_17";
    case Constraint::kBuExclusive18: return "bu_exclusive_18";
    case Constraint::kSingleFcn19: return "single_fcn_19";
    case Constraint::kForwardNeedsAssoc20: return "forward_needs_assoc_20";
    case Constraint::kFlowIndicator21: return "flow_indicator_21";
    case Constraint::kFlowConservation22: return "flow_conservation_22";
    case Constraint::kVmCount23: return "vm_count_23";
    case Constraint::kVmIndicator27: return "vm_indicator_27";
    case Constraint::kVmRouting28: return "vm_routing_28";
    case Constraint::kVmStorage29: return "vm_storage_29";
    case Constraint::kVmProcessing30: return "vm_processing_30";
    case Constraint::kQueueStability31: return "queue_stability_31";
    case Constraint::kDelayLimit32: return "delay_limit_32";
  }
  return "unknown";
}

void FeasibilityReport::add(Constraint c, double magnitude, std::string detail) {
  if (magnitude <= 0.0) return;
  violations.push_back(Violation{c, magnitude, std::move(detail)});
}

void FeasibilityReport::merge(FeasibilityReport other) {
  violations.insert(violations.end(), std::make_move_iterator(other.violations.begin()),
                    std::make_move_iterator(other.violations.end()));
}

double FeasibilityReport::total(Constraint c) const {
  double sum = 0.0;
  for (const Violation& v : violations) {
    if (v.constraint == c) sum += v.magnitude;
  }
  return sum;
}

double FeasibilityReport::total() const {
  double sum = 0.0;
  for (const Violation& v : violations) sum += v.magnitude;
  return sum;
}

PenaltyWeights PenaltyWeights::uniform(double w) {
  PenaltyWeights p;
  p.weight.fill(w);
  return p;
}

double penalty(const FeasibilityReport& report, const PenaltyWeights& weights) {
  for (const double w : weights.weight) {
    if (!(w > 0.0)) throw std::invalid_argument("penalty: weights must be positive");
  }
  double sum = 0.0;
  for (const Violation& v : report.violations) {
    sum += weights[v.constraint] * v.magnitude;
  }
  return sum;
}

// ---------------------------------------------------------------------------
// Checks

namespace {

// reach[f][city] = 1 when the fog's preference list holds the city.
std::vector<std::vector<std::uint8_t>> reachable_matrix(const Topology& topo) {
  const std::size_t n_fog = topo.fog_nodes.size();
  std::vector<std::vector<std::uint8_t>> reach(n_fog,
                                               std::vector<std::uint8_t>(topo.cities.size(), 0));
  for (std::size_t f = 0; f < n_fog; ++f) {
    for (const int city : topo.pref_city_lists[f]) reach[f][city] = 1;
  }
  return reach;
}

int consumer_city_of(const Topology& topo, std::size_t consumer) {
  return topo.consumer_city(static_cast<std::int64_t>(consumer));
}

// BUs held by consumer i at fog f, honoring explicit slot ownership when
// present and the statistical share otherwise.
double bus_held(const DecisionVector& dv, std::size_t consumer, int fog) {
  if (!dv.bu_owners.empty()) {
    double count = 0.0;
    if (fog < static_cast<int>(dv.bu_owners.size())) {
      for (const auto& owners : dv.bu_owners[fog]) {
        count += static_cast<double>(std::count(owners.begin(), owners.end(),
                                                static_cast<int>(consumer)));
      }
    }
    return count;
  }
  if (!dv.assoc[consumer].empty() && dv.assoc[consumer][0] == fog) {
    return dv.allocated_bus[consumer];
  }
  return 0.0;
}

bool interfog_indicator(const DecisionVector& dv, int app, std::size_t f, std::size_t g) {
  if (!dv.interfog_assoc.empty()) {
    return dv.interfog_assoc[app][f][g] != 0;
  }
  return dv.interfog_rate[app][f][g] > 0.0;
}

}  // namespace

FeasibilityReport check_association(const DecisionVector& dv, const Topology& topo) {
  FeasibilityReport report;
  const auto reach = reachable_matrix(topo);

  for (std::size_t i = 0; i < dv.n_consumers(); ++i) {
    const int city = consumer_city_of(topo, i);

    // (19) exactly one FCN per consumer.
    const double count = static_cast<double>(dv.assoc[i].size());
    if (count != 1.0) {
      std::ostringstream msg;
      msg << "consumer " << i << " associated with " << dv.assoc[i].size() << " FCNs";
      report.add(Constraint::kSingleFcn19, std::abs(count - 1.0), msg.str());
    }

    for (const int f : dv.assoc[i]) {
      // (16) association only to FCNs whose list holds the consumer.
      if (f < 0 || f >= static_cast<int>(topo.fog_nodes.size()) || !reach[f][city]) {
        std::ostringstream msg;
        msg << "consumer " << i << " associated with unreachable fog " << f;
        report.add(Constraint::kAssocReachable16, 1.0, msg.str());
        continue;
      }
      // (17) upper half: association requires at least one BU.
      if (bus_held(dv, i, f) <= 0.0) {
        std::ostringstream msg;
        msg << "consumer " << i << " associated with fog " << f << " but holds no BU";
        report.add(Constraint::kAssocNeedsBu17, 1.0, msg.str());
      }
    }

    // (17) lower half: BUs somewhere without association there.
    for (std::size_t f = 0; f < topo.fog_nodes.size(); ++f) {
      const bool associated =
          std::find(dv.assoc[i].begin(), dv.assoc[i].end(), static_cast<int>(f)) !=
          dv.assoc[i].end();
      if (associated) continue;
      const double held = bus_held(dv, i, static_cast<int>(f));
      if (held > 0.0) {
        std::ostringstream msg;
        msg << "consumer " << i << " holds BUs at fog " << f << " without association";
        report.add(Constraint::kAssocNeedsBu17,
                   held / std::max(1, topo.fog_nodes[f].bandwidth_units), msg.str());
      }
    }
  }

  // (18) one consumer per BU.
  for (std::size_t f = 0; f < dv.bu_owners.size(); ++f) {
    for (std::size_t slot = 0; slot < dv.bu_owners[f].size(); ++slot) {
      const std::size_t owners = dv.bu_owners[f][slot].size();
      if (owners > 1) {
        std::ostringstream msg;
        msg << "BU " << slot << " of fog " << f << " allocated to " << owners << " consumers";
        report.add(Constraint::kBuExclusive18, static_cast<double>(owners - 1), msg.str());
      }
    }
  }
  return report;
}

FeasibilityReport check_workload(const DecisionVector& dv, const Topology& topo) {
  FeasibilityReport report;
  const std::size_t n_fog = topo.fog_nodes.size();

  for (int a = 0; a < dv.n_apps; ++a) {
    std::vector<double> inflow(n_fog, 0.0);
    for (std::size_t i = 0; i < dv.n_consumers(); ++i) {
      if (dv.consumer_app[i] == a && !dv.assoc[i].empty()) {
        inflow[dv.assoc[i][0]] += dv.workload_rate[i];
      }
    }
    for (std::size_t f = 0; f < n_fog; ++f) {
      double outflow = 0.0;
      for (std::size_t g = 0; g < n_fog; ++g) {
        const double rate = dv.interfog_rate[a][f][g];
        const bool indicator = interfog_indicator(dv, a, f, g);
        outflow += rate;

        // (20) forwarding requires associated consumers of the app at f.
        if ((rate > 0.0 || indicator) && inflow[f] <= 0.0) {
          std::ostringstream msg;
          msg << "app " << a << ": fog " << f << " forwards to " << g
              << " without associated consumers";
          report.add(Constraint::kForwardNeedsAssoc20, 1.0, msg.str());
        }
        // (21) indicator/flow linkage, normalized.
        const bool should = rate > 0.0;
        if (indicator != should) {
          std::ostringstream msg;
          msg << "app " << a << ": flow " << f << "->" << g << " rate " << rate
              << " with indicator " << (indicator ? 1 : 0);
          report.add(Constraint::kFlowIndicator21, 1.0, msg.str());
        }
      }
      // (22) conservation: everything received is processed somewhere.
      const double gap = std::abs(inflow[f] - outflow);
      if (gap > 1e-9 * std::max(1.0, inflow[f])) {
        std::ostringstream msg;
        msg << "app " << a << ": fog " << f << " receives " << inflow[f] << " but routes "
            << outflow;
        report.add(Constraint::kFlowConservation22, gap, msg.str());
      }
    }
  }
  return report;
}

FeasibilityReport check_vm(const DecisionVector& dv, const Topology& topo,
                           const costmodel::ScenarioParams& params) {
  FeasibilityReport report;
  const std::size_t n_fog = topo.fog_nodes.size();

  for (std::size_t f = 0; f < n_fog; ++f) {
    int vms = 0;
    double storage = 0.0;
    double proc_load = 0.0;
    for (int a = 0; a < dv.n_apps; ++a) {
      const bool placed = dv.vm_placement[a][f] != 0;
      const double processed = dv.processed_rate(a, static_cast<int>(f));
      vms += placed ? 1 : 0;
      storage += placed ? params.app_storage_demand : 0.0;
      proc_load += processed * params.scale_factor;

      // (27) a VM is deployed exactly where service happens, normalized.
      if (placed != (processed > 0.0)) {
        std::ostringstream msg;
        msg << "app " << a << ", fog " << f << ": vm=" << (placed ? 1 : 0) << " but processes "
            << processed;
        report.add(Constraint::kVmIndicator27, 1.0, msg.str());
      }
      // (28) routing into f requires the VM there.
      for (std::size_t src = 0; src < n_fog; ++src) {
        if (interfog_indicator(dv, a, src, f) && !placed) {
          std::ostringstream msg;
          msg << "app " << a << ": flow " << src << "->" << f << " without a VM at " << f;
          report.add(Constraint::kVmRouting28, 1.0, msg.str());
        }
      }
    }
    // (23) VM count cap.
    const int cap = topo.fog_nodes[f].max_vms();
    if (vms > cap) {
      std::ostringstream msg;
      msg << "fog " << f << " hosts " << vms << " VMs, cap " << cap;
      report.add(Constraint::kVmCount23, static_cast<double>(vms - cap), msg.str());
    }
    // (29) storage capacity (closed constraint: equality is feasible).
    if (storage > topo.fog_nodes[f].storage_cap) {
      std::ostringstream msg;
      msg << "fog " << f << " storage demand " << storage << " over cap "
          << topo.fog_nodes[f].storage_cap;
      report.add(Constraint::kVmStorage29,
                 (storage - topo.fog_nodes[f].storage_cap) / topo.fog_nodes[f].storage_cap,
                 msg.str());
    }
    // (30) processing capability.
    if (proc_load > topo.fog_nodes[f].proc_cap) {
      std::ostringstream msg;
      msg << "fog " << f << " processing demand " << proc_load << " over cap "
          << topo.fog_nodes[f].proc_cap;
      report.add(Constraint::kVmProcessing30,
                 (proc_load - topo.fog_nodes[f].proc_cap) / topo.fog_nodes[f].proc_cap,
                 msg.str());
    }
  }
  return report;
}

FeasibilityReport check_network(const DecisionVector& dv, const Topology& topo,
                                const costmodel::ScenarioParams& params) {
  FeasibilityReport report;
  const std::size_t n_fog = topo.fog_nodes.size();

  // (31) outflow strictly below the service rate, via the configured margin.
  std::vector<double> processed(n_fog, 0.0);
  std::vector<bool> unstable(n_fog, false);
  for (std::size_t f = 0; f < n_fog; ++f) {
    double outflow = 0.0;
    for (int a = 0; a < dv.n_apps; ++a) {
      for (std::size_t g = 0; g < n_fog; ++g) outflow += dv.interfog_rate[a][f][g];
    }
    for (int a = 0; a < dv.n_apps; ++a) {
      processed[f] += dv.processed_rate(a, static_cast<int>(f));
    }
    const double limit = topo.fog_nodes[f].service_rate * (1.0 - params.qos_margin);
    if (outflow > limit) {
      std::ostringstream msg;
      msg << "fog " << f << " outflow " << outflow << " reaches service rate "
          << topo.fog_nodes[f].service_rate;
      report.add(Constraint::kQueueStability31, outflow - limit, msg.str());
    }
    unstable[f] = processed[f] >= topo.fog_nodes[f].service_rate * (1.0 - params.qos_margin);
  }

  // (32) end-to-end latency chain per fog-path consumer. Consumers whose
  // processing queue is saturated are already flagged by (31); the chain is
  // undefined there and skipped.
  const double hop_latency =
      params.interfog_hops *
      costmodel::interfog_latency(params.interfog_payload, topo.interfog_link_bps / 8.0);
  for (std::size_t i = 0; i < dv.n_consumers(); ++i) {
    if (!dv.offload_fog[i] || dv.assoc[i].empty()) continue;
    const int f = dv.assoc[i][0];
    if (unstable[f] || dv.allocated_bus[i] <= 0.0) continue;
    const double upload = costmodel::upload_latency(params.volume_fog, dv.allocated_bus[i],
                                                    topo.fog_nodes[f].per_bu_rate);
    const double fog_comp =
        processed[f] > 0.0
            ? queueing::mm1_latency(topo.fog_nodes[f].service_rate, processed[f])
            : 1.0 / topo.fog_nodes[f].service_rate;
    const double dispatch = costmodel::dispatch_latency(
        params.wan_delay_factor, f < static_cast<int>(dv.dispatch_rate.size())
                                     ? dv.dispatch_rate[f]
                                     : 0.0);
    double cloud_comp = 0.0;
    const int s = topo.nearest_server[f];
    if (s < static_cast<int>(dv.machines_on.size()) && dv.machines_on[s] > 0) {
      const double mu = costmodel::cloud_machine_rate(params, dv.cpu_freq[s]);
      const double arrival = dv.cloud_workload[s];
      cloud_comp = arrival < dv.machines_on[s] * mu
                       ? queueing::mmn_response_time(dv.machines_on[s], arrival, mu)
                       : params.delay_limit_for(dv.consumer_app[i]);
    }
    const double chain = upload + fog_comp + hop_latency + dispatch + cloud_comp;
    const double limit = params.delay_limit_for(dv.consumer_app[i]);
    if (chain > limit) {
      std::ostringstream msg;
      msg << "consumer " << i << " latency chain " << chain << " over limit " << limit;
      report.add(Constraint::kDelayLimit32, chain - limit, msg.str());
    }
  }
  return report;
}

FeasibilityReport check_all(const DecisionVector& dv, const Topology& topo,
                            const costmodel::ScenarioParams& params) {
  FeasibilityReport report = check_association(dv, topo);
  report.merge(check_workload(dv, topo));
  report.merge(check_vm(dv, topo, params));
  report.merge(check_network(dv, topo, params));
  return report;
}

// ---------------------------------------------------------------------------
// Repair

RepairResult repair(const DecisionVector& dv, const Topology& topo,
                    const costmodel::ScenarioParams& params, RngStream& rng) {
  (void)rng;  // the repair is fully deterministic; the stream is part of the
              // contract so future strategies may randomize tie-breaking
  RepairResult result;
  DecisionVector out = dv;
  const std::size_t n_fog = topo.fog_nodes.size();
  const std::size_t n_consumers = out.n_consumers();
  const auto reach = reachable_matrix(topo);

  // Reachable fogs per city, nearest first (ties by fog index).
  std::vector<std::vector<int>> candidates(topo.cities.size());
  for (std::size_t c = 0; c < topo.cities.size(); ++c) {
    std::vector<std::pair<double, int>> near;
    for (std::size_t f = 0; f < n_fog; ++f) {
      if (reach[f][c]) near.emplace_back(topo.fog_dist_km[f][c], static_cast<int>(f));
    }
    std::sort(near.begin(), near.end());
    for (const auto& [d, f] : near) candidates[c].push_back(f);
  }

  // Target fog per consumer: keep a valid single association, reduce a
  // multi-association to the nearest reachable fog, fill in missing ones.
  std::vector<int> target(n_consumers, -1);
  for (std::size_t i = 0; i < n_consumers; ++i) {
    const int city = consumer_city_of(topo, i);
    double best_d = std::numeric_limits<double>::infinity();
    int best_f = -1;
    for (const int f : out.assoc[i]) {
      if (f < 0 || f >= static_cast<int>(n_fog) || !reach[f][city]) continue;
      const double d = topo.fog_dist_km[f][city];
      if (d < best_d || (d == best_d && f < best_f)) {
        best_d = d;
        best_f = f;
      }
    }
    target[i] = best_f;  // may still be -1
  }

  // Claim BU capacity in consumer order; overflow moves to the next nearest
  // reachable fog with space.
  std::vector<int> load(n_fog, 0);
  for (std::size_t i = 0; i < n_consumers; ++i) {
    const int city = consumer_city_of(topo, i);
    int chosen = -1;
    if (target[i] >= 0 && load[target[i]] < topo.fog_nodes[target[i]].bandwidth_units) {
      chosen = target[i];
    } else {
      for (const int f : candidates[city]) {
        if (load[f] < topo.fog_nodes[f].bandwidth_units) {
          chosen = f;
          break;
        }
      }
    }
    if (chosen < 0) {
      result.unserved.push_back(static_cast<int>(i));
      out.assoc[i].clear();
      out.allocated_bus[i] = 0.0;
      target[i] = -1;
      continue;
    }
    ++load[chosen];
    out.assoc[i] = {chosen};
    target[i] = chosen;
  }

  // Even BU reallocation per fog, explicit slot ownership.
  std::vector<std::vector<int>> members(n_fog);
  for (std::size_t i = 0; i < n_consumers; ++i) {
    if (target[i] >= 0) members[target[i]].push_back(static_cast<int>(i));
  }
  out.bu_owners.assign(n_fog, {});
  for (std::size_t f = 0; f < n_fog; ++f) {
    const int slots = topo.fog_nodes[f].bandwidth_units;
    out.bu_owners[f].assign(slots, {});
    const int k = static_cast<int>(members[f].size());
    if (k == 0) continue;
    const int share = std::max(1, slots / k);
    int slot = 0;
    for (const int consumer : members[f]) {
      const int take = std::min(share, slots - slot);
      for (int s = 0; s < take; ++s) out.bu_owners[f][slot + s] = {consumer};
      out.allocated_bus[consumer] = static_cast<double>(take);
      slot += take;
    }
  }

  // Flow conservation by proportional rescaling; vanished rows route locally.
  out.interfog_assoc.clear();
  for (int a = 0; a < out.n_apps; ++a) {
    std::vector<double> inflow(n_fog, 0.0);
    for (std::size_t i = 0; i < n_consumers; ++i) {
      if (out.consumer_app[i] == a && !out.assoc[i].empty()) {
        inflow[out.assoc[i][0]] += out.workload_rate[i];
      }
    }
    for (std::size_t f = 0; f < n_fog; ++f) {
      double row_sum = 0.0;
      for (std::size_t g = 0; g < n_fog; ++g) row_sum += out.interfog_rate[a][f][g];
      if (inflow[f] <= 0.0) {
        std::fill(out.interfog_rate[a][f].begin(), out.interfog_rate[a][f].end(), 0.0);
      } else if (row_sum <= 0.0) {
        out.interfog_rate[a][f][f] = inflow[f];
      } else if (std::abs(row_sum - inflow[f]) > 1e-12 * std::max(1.0, inflow[f])) {
        // Residuals inside the conservation tolerance stay untouched, which
        // keeps the repair idempotent to the bit.
        const double scale = inflow[f] / row_sum;
        for (std::size_t g = 0; g < n_fog; ++g) out.interfog_rate[a][f][g] *= scale;
      }
    }
  }

  // Drop VM placements over the storage or count caps, lowest traffic first.
  for (std::size_t f = 0; f < n_fog; ++f) {
    std::vector<int> placed;
    for (int a = 0; a < out.n_apps; ++a) {
      if (out.vm_placement[a][f]) placed.push_back(a);
    }
    const double storage_cap = topo.fog_nodes[f].storage_cap;
    const int count_cap = topo.fog_nodes[f].max_vms();
    auto over = [&] {
      return static_cast<double>(placed.size()) * params.app_storage_demand > storage_cap ||
             static_cast<int>(placed.size()) > count_cap;
    };
    if (!over()) continue;
    std::stable_sort(placed.begin(), placed.end(), [&](int a, int b) {
      return out.processed_rate(a, static_cast<int>(f)) <
             out.processed_rate(b, static_cast<int>(f));
    });
    while (over() && !placed.empty()) {
      out.vm_placement[placed.front()][f] = 0;
      placed.erase(placed.begin());
    }
  }

  result.dv = std::move(out);
  return result;
}

}  // namespace fogplan::feasibility
