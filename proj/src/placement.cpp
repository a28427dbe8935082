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

#include "fogplan/placement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fogplan/queueing.hpp"

namespace fogplan::placement {

using costmodel::ScenarioParams;
using feasibility::DecisionVector;
using topology::Topology;

namespace {

// Even BU split for the k consumers of one fog: min(1, slots/k) whole units,
// or a fractional share when the fog is oversubscribed.
double bu_share(int slots, std::int64_t k) {
  if (k <= 0) return 0.0;
  if (k <= slots) return static_cast<double>(slots / k >= 1 ? slots / k : 1);
  return static_cast<double>(slots) / static_cast<double>(k);
}

void size_cloud_side(DecisionVector& dv, const Topology& topo, const ScenarioParams& params,
                     const std::vector<double>& server_load) {
  for (std::size_t s = 0; s < topo.servers.size(); ++s) {
    dv.cpu_freq[s] = topo.servers[s].cpu_freq_max;
    const double mu = costmodel::cloud_machine_rate(params, dv.cpu_freq[s]);
    dv.machines_on[s] = costmodel::machines_needed(server_load[s], mu, params.cloud_util_target,
                                                   topo.servers[s].machine_count_max);
    dv.cloud_on[s] = dv.machines_on[s] > 0 ? 1 : 0;
    dv.cloud_workload[s] = server_load[s];
  }
}

}  // namespace

DecisionVector make_fog_assignment(const Topology& topo, const ScenarioParams& params) {
  const std::size_t n_fog = topo.fog_nodes.size();
  const std::size_t n = static_cast<std::size_t>(topo.total_consumers());
  DecisionVector dv = DecisionVector::make_empty(n, n_fog, topo.servers.size(), 1);

  const double rate = params.arrival_rate_per_consumer * params.traffic_per_capita;
  std::vector<double> inflow(n_fog, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const int city = topo.consumer_city(static_cast<std::int64_t>(i));
    dv.assoc[i] = {city};  // own-city fog, always in reach (distance zero)
    dv.workload_rate[i] = rate;
    dv.offload_fog[i] = 1;
    inflow[city] += rate;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const int f = dv.assoc[i][0];
    dv.allocated_bus[i] =
        bu_share(topo.fog_nodes[f].bandwidth_units, topo.consumers_per_city[f]);
  }
  // Explicit BU slots only where exclusive ownership is possible.
  dv.bu_owners.assign(n_fog, {});
  for (std::size_t f = 0; f < n_fog; ++f) {
    const int slots = topo.fog_nodes[f].bandwidth_units;
    const std::int64_t k = topo.consumers_per_city[f];
    if (k == 0 || k > slots) continue;
    dv.bu_owners[f].assign(slots, {});
    const int share = static_cast<int>(bu_share(slots, k));
    int slot = 0;
    for (std::int64_t i = topo.consumer_offset[f]; i < topo.consumer_offset[f + 1]; ++i) {
      for (int s = 0; s < share; ++s) dv.bu_owners[f][slot++] = {static_cast<int>(i)};
    }
  }

  // Flows: mostly local, a small share to the nearest peer fog. Every fog
  // that ends up processing traffic hosts the VM.
  std::vector<double> server_load(topo.servers.size(), 0.0);
  for (std::size_t f = 0; f < n_fog; ++f) {
    if (inflow[f] <= 0.0) continue;
    int peer = -1;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t g = 0; g < n_fog; ++g) {
      if (g == f) continue;
      if (topo.fog_dist_km[f][g] < best) {
        best = topo.fog_dist_km[f][g];
        peer = static_cast<int>(g);
      }
    }
    const double away = peer >= 0 ? params.interfog_fraction * inflow[f] : 0.0;
    dv.interfog_rate[0][f][f] = inflow[f] - away;
    if (peer >= 0 && away > 0.0) dv.interfog_rate[0][f][peer] = away;
    dv.dispatch_rate[f] = (1.0 - params.pi_f) * inflow[f];
    server_load[topo.nearest_server[f]] +=
        (1.0 - params.pi_f) * (1.0 - params.pi_cs) * inflow[f];
  }
  for (std::size_t f = 0; f < n_fog; ++f) {
    double processed = 0.0;
    for (std::size_t g = 0; g < n_fog; ++g) processed += dv.interfog_rate[0][g][f];
    dv.vm_placement[0][f] = processed > 0.0 ? 1 : 0;
  }
  size_cloud_side(dv, topo, params, server_load);
  return dv;
}

DecisionVector make_mixed_assignment(const Topology& topo, const ScenarioParams& params,
                                     double direct_share) {
  DecisionVector dv = make_fog_assignment(topo, params);
  const std::size_t n = dv.n_consumers();
  const std::size_t n_fog = topo.fog_nodes.size();
  if (n == 0) return dv;

  std::vector<double> fog_inflow(n_fog, 0.0);
  std::vector<double> server_load(topo.servers.size(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double position = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    const int f = dv.assoc[i][0];
    if (position < direct_share) {
      dv.offload_fog[i] = 0;
      server_load[topo.nearest_server[f]] += dv.workload_rate[i];
    } else {
      dv.offload_fog[i] = 1;
      fog_inflow[f] += dv.workload_rate[i];
    }
  }
  // Rebuild flows from the fog-path inflow alone; pools carry both streams.
  for (std::size_t f = 0; f < n_fog; ++f) {
    double row_sum = 0.0;
    for (std::size_t g = 0; g < n_fog; ++g) row_sum += dv.interfog_rate[0][f][g];
    if (row_sum > 0.0) {
      const double scale = fog_inflow[f] / row_sum;
      for (std::size_t g = 0; g < n_fog; ++g) dv.interfog_rate[0][f][g] *= scale;
    } else if (fog_inflow[f] > 0.0) {
      dv.interfog_rate[0][f][f] = fog_inflow[f];
    }
    dv.dispatch_rate[f] = (1.0 - params.pi_f) * fog_inflow[f];
    server_load[topo.nearest_server[f]] +=
        (1.0 - params.pi_f) * (1.0 - params.pi_cs) * fog_inflow[f];
    dv.vm_placement[0][f] = 0;
  }
  for (std::size_t f = 0; f < n_fog; ++f) {
    double processed = 0.0;
    for (std::size_t g = 0; g < n_fog; ++g) processed += dv.interfog_rate[0][g][f];
    dv.vm_placement[0][f] = processed > 0.0 ? 1 : 0;
  }
  size_cloud_side(dv, topo, params, server_load);
  return dv;
}

DecisionVector make_cloud_assignment(const Topology& topo, const ScenarioParams& params) {
  const std::size_t n_fog = topo.fog_nodes.size();
  const std::size_t n = static_cast<std::size_t>(topo.total_consumers());
  DecisionVector dv = DecisionVector::make_empty(n, n_fog, topo.servers.size(), 1);

  const double rate = params.arrival_rate_per_consumer * params.traffic_per_capita;
  std::vector<double> server_load(topo.servers.size(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const int city = topo.consumer_city(static_cast<std::int64_t>(i));
    dv.assoc[i] = {city};
    dv.workload_rate[i] = rate;
    dv.offload_fog[i] = 0;
    dv.allocated_bus[i] =
        bu_share(topo.fog_nodes[city].bandwidth_units, topo.consumers_per_city[city]);
    server_load[topo.nearest_server[city]] += rate;
  }
  size_cloud_side(dv, topo, params, server_load);
  return dv;
}

PlacementProblem::PlacementProblem(const Topology& topo, const ScenarioParams& params)
    : topo_(&topo), params_(&params) {
  const std::size_t n_fog = topo.fog_nodes.size();
  candidates_.resize(topo.cities.size());
  for (std::size_t c = 0; c < topo.cities.size(); ++c) {
    std::vector<std::pair<double, int>> near;
    for (std::size_t f = 0; f < n_fog; ++f) {
      const auto& list = topo.pref_city_lists[f];
      if (std::find(list.begin(), list.end(), static_cast<int>(c)) != list.end()) {
        near.emplace_back(topo.fog_dist_km[f][c], static_cast<int>(f));
      }
    }
    std::sort(near.begin(), near.end());
    for (const auto& [d, f] : near) candidates_[c].push_back(f);
  }
}

std::size_t PlacementProblem::genome_length() const {
  return static_cast<std::size_t>(topo_->total_consumers()) + topo_->fog_nodes.size() +
         topo_->servers.size();
}

DecisionVector PlacementProblem::decode(const mde::Genome& genome) const {
  const Topology& topo = *topo_;
  const ScenarioParams& params = *params_;
  const std::size_t n = static_cast<std::size_t>(topo.total_consumers());
  const std::size_t n_fog = topo.fog_nodes.size();
  const std::size_t n_srv = topo.servers.size();

  DecisionVector dv = DecisionVector::make_empty(n, n_fog, n_srv, 1);
  const double rate = params.arrival_rate_per_consumer * params.traffic_per_capita;
  for (std::size_t i = 0; i < n; ++i) {
    const int city = topo.consumer_city(static_cast<std::int64_t>(i));
    const auto& cand = candidates_[city];
    dv.workload_rate[i] = rate;
    dv.offload_fog[i] = 1;
    if (!cand.empty()) {
      const auto idx = std::min<std::size_t>(
          static_cast<std::size_t>(genome[i] * static_cast<double>(cand.size())),
          cand.size() - 1);
      dv.assoc[i] = {cand[idx]};
    }
  }
  for (std::size_t f = 0; f < n_fog; ++f) {
    dv.vm_placement[0][f] = genome[n + f] >= 0.5 ? 1 : 0;
  }

  // Structural repair: BU capacity, even allocation, canonical association.
  RngStream rng(0);
  dv = feasibility::repair(dv, topo, params, rng).dv;

  // Route each fog's inflow to the nearest deployed VM (self preferred);
  // without any VM the flow stays local and the checks flag it.
  std::vector<double> inflow(n_fog, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!dv.assoc[i].empty()) inflow[dv.assoc[i][0]] += dv.workload_rate[i];
  }
  std::vector<int> vm_fogs;
  for (std::size_t f = 0; f < n_fog; ++f) {
    if (dv.vm_placement[0][f]) vm_fogs.push_back(static_cast<int>(f));
  }
  std::vector<double> server_load(n_srv, 0.0);
  for (std::size_t f = 0; f < n_fog; ++f) {
    std::fill(dv.interfog_rate[0][f].begin(), dv.interfog_rate[0][f].end(), 0.0);
    if (inflow[f] <= 0.0) continue;
    int host = static_cast<int>(f);
    if (!dv.vm_placement[0][f]) {
      double best = std::numeric_limits<double>::infinity();
      for (const int g : vm_fogs) {
        if (topo.fog_dist_km[f][g] < best) {
          best = topo.fog_dist_km[f][g];
          host = g;
        }
      }
    }
    dv.interfog_rate[0][f][host] = inflow[f];
    dv.dispatch_rate[f] = (1.0 - params.pi_f) * inflow[f];
    server_load[topo.nearest_server[f]] +=
        (1.0 - params.pi_f) * (1.0 - params.pi_cs) * inflow[f];
  }

  for (std::size_t s = 0; s < n_srv; ++s) {
    const double lo = topo.servers[s].cpu_freq_min;
    const double hi = topo.servers[s].cpu_freq_max;
    dv.cpu_freq[s] = lo + genome[n + n_fog + s] * (hi - lo);
    const double mu = costmodel::cloud_machine_rate(params, dv.cpu_freq[s]);
    dv.machines_on[s] = costmodel::machines_needed(server_load[s], mu, params.cloud_util_target,
                                                   topo.servers[s].machine_count_max);
    dv.cloud_on[s] = dv.machines_on[s] > 0 ? 1 : 0;
    dv.cloud_workload[s] = server_load[s];
  }
  return dv;
}

mde::Genome PlacementProblem::encode(const DecisionVector& dv) const {
  const Topology& topo = *topo_;
  const std::size_t n = static_cast<std::size_t>(topo.total_consumers());
  const std::size_t n_fog = topo.fog_nodes.size();
  mde::Genome genome(genome_length(), 0.5);
  for (std::size_t i = 0; i < n; ++i) {
    if (dv.assoc[i].empty()) continue;
    const int city = topo.consumer_city(static_cast<std::int64_t>(i));
    const auto& cand = candidates_[city];
    const auto it = std::find(cand.begin(), cand.end(), dv.assoc[i][0]);
    if (it != cand.end()) {
      const double idx = static_cast<double>(std::distance(cand.begin(), it));
      genome[i] = (idx + 0.5) / static_cast<double>(cand.size());
    }
  }
  for (std::size_t f = 0; f < n_fog; ++f) {
    genome[n + f] = dv.vm_placement[0][f] ? 0.75 : 0.25;
  }
  for (std::size_t s = 0; s < topo.servers.size(); ++s) {
    const double lo = topo.servers[s].cpu_freq_min;
    const double hi = topo.servers[s].cpu_freq_max;
    const double v = hi > lo ? (dv.cpu_freq[s] - lo) / (hi - lo) : 0.5;
    genome[n + n_fog + s] = std::clamp(v, 0.0, 1.0);
  }
  return genome;
}

PlacementProblem::Evaluation PlacementProblem::evaluate(const DecisionVector& dv) const {
  Evaluation ev;
  const feasibility::FeasibilityReport report = feasibility::check_all(dv, *topo_, *params_);
  ev.penalty = feasibility::penalty(report);
  try {
    ev.cost = costmodel::total_fog_cost(dv, *topo_, *params_).total;
  } catch (const queueing::UnstableQueueError&) {
    ev.cost = 1e12;
    ev.penalty += 1.0;
  } catch (const costmodel::UnservedConsumerError&) {
    ev.cost = 1e12;
    ev.penalty += 1.0;
  }
  ev.feasible = report.feasible() && ev.cost < 1e12;
  ev.objective = ev.cost + penalty_weight_ * ev.penalty;
  return ev;
}

DecisionVector PlacementProblem::greedy_seed() const {
  const std::size_t n = static_cast<std::size_t>(topo_->total_consumers());
  mde::Genome genome(genome_length(), 1.0);  // eta at max
  for (std::size_t i = 0; i < n; ++i) genome[i] = 0.0;  // nearest candidate
  // VMs everywhere to start; decode routes locally, then trim to used fogs.
  DecisionVector dv = decode(genome);
  for (std::size_t f = 0; f < topo_->fog_nodes.size(); ++f) {
    dv.vm_placement[0][f] = dv.processed_rate(0, static_cast<int>(f)) > 0.0 ? 1 : 0;
  }
  return dv;
}

mde::Problem PlacementProblem::as_mde_problem() const {
  mde::Problem problem;
  problem.genome_length = genome_length();
  problem.objective = [this](const mde::Genome& genome) {
    const Evaluation ev = evaluate(decode(genome));
    return std::make_pair(ev.objective, ev.feasible);
  };
  problem.seeds.push_back(encode(greedy_seed()));
  return problem;
}

}  // namespace fogplan::placement
