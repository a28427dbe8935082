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

#include "fogplan/toyvanet.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

namespace fogplan::toyvanet {

std::vector<int> ToyFixture::priced_rsus() const {
  std::vector<int> out;
  for (int r = 0; r < n_rsus; ++r) {
    if (uplink_price[r] >= 0.0) out.push_back(r);
  }
  return out;
}

std::vector<int> ToyFixture::capable_rsus() const {
  std::vector<int> out;
  for (int r = 0; r < n_rsus; ++r) {
    if (vm_capable[r]) out.push_back(r);
  }
  return out;
}

ToyFixture ToyFixture::standard() {
  ToyFixture f;
  // R1..R10 are indices 0..9. The chain R1-R2-R3-R4-R7 carries the VM hosts
  // of the first configuration; R5/R6 hang off R2 and rejoin at R4; R8-R9-R10
  // closes the far side back onto R4.
  f.links = {{0, 1}, {0, 7}, {1, 2}, {1, 4}, {4, 5}, {5, 3}, {7, 8}, {8, 3}, {3, 6}, {8, 9}};
  f.uplink_price.assign(f.n_rsus, -1.0);
  f.uplink_price[0] = 5.0;  // R1
  f.uplink_price[1] = 2.0;  // R2
  f.uplink_price[4] = 3.0;  // R5
  f.uplink_price[9] = 5.0;  // R10
  f.vm_capable.assign(f.n_rsus, 0);
  for (const int r : {0, 2, 3, 6, 8}) f.vm_capable[r] = 1;  // R1, R3, R4, R7, R9

  // BFS hop counts.
  std::vector<std::vector<int>> adjacency(f.n_rsus);
  for (const auto& [a, b] : f.links) {
    adjacency[a].push_back(b);
    adjacency[b].push_back(a);
  }
  f.hops.assign(f.n_rsus, std::vector<int>(f.n_rsus, -1));
  for (int start = 0; start < f.n_rsus; ++start) {
    std::deque<int> frontier{start};
    f.hops[start][start] = 0;
    while (!frontier.empty()) {
      const int u = frontier.front();
      frontier.pop_front();
      for (const int v : adjacency[u]) {
        if (f.hops[start][v] < 0) {
          f.hops[start][v] = f.hops[start][u] + 1;
          frontier.push_back(v);
        }
      }
    }
  }
  return f;
}

ToyAssignment scenario_one(const ToyFixture&) {
  // All four drivers upload through R1; VMs at R1, R3, R4 and R7.
  return ToyAssignment{{0, 0, 0, 0}, {0, 2, 3, 6}};
}

ToyAssignment scenario_two(const ToyFixture&) {
  // Drivers spread over the priced RSUs; VMs at R1, R3, R4 and R9.
  return ToyAssignment{{0, 1, 4, 9}, {0, 2, 3, 8}};
}

bool toy_feasible(const ToyFixture& fixture, const ToyAssignment& assignment) {
  std::vector<int> users_on(fixture.n_rsus, 0);
  std::vector<int> vms_on(fixture.n_rsus, 0);
  for (int u = 0; u < fixture.n_users; ++u) {
    const int a = assignment.assoc[u];
    const int h = assignment.vm_host[u];
    if (a < 0 || a >= fixture.n_rsus || fixture.uplink_price[a] < 0.0) return false;
    if (h < 0 || h >= fixture.n_rsus || !fixture.vm_capable[h]) return false;
    if (++users_on[a] > fixture.bus_per_rsu) return false;
    if (++vms_on[h] > 1) return false;
  }
  return true;
}

ToyBreakdown evaluate_toy(const ToyFixture& fixture, const ToyAssignment& assignment) {
  if (static_cast<int>(assignment.assoc.size()) != fixture.n_users ||
      static_cast<int>(assignment.vm_host.size()) != fixture.n_users) {
    throw std::invalid_argument("evaluate_toy: assignment shape mismatch");
  }
  ToyBreakdown out;
  std::vector<int> users_on(fixture.n_rsus, 0);
  for (int u = 0; u < fixture.n_users; ++u) ++users_on[assignment.assoc[u]];

  double delay_sum = 0.0;
  for (int u = 0; u < fixture.n_users; ++u) {
    const int a = assignment.assoc[u];
    const int h = assignment.vm_host[u];
    out.upload_cost += std::max(fixture.uplink_price[a], 0.0);
    out.vm_cost += fixture.vm_price;
    out.inter_rsu_cost += fixture.hop_price * fixture.hops[a][h];
    // BUs of the association RSU split evenly across its drivers.
    const double bus = static_cast<double>(fixture.bus_per_rsu) / users_on[a];
    delay_sum += costmodel::upload_latency(1.0, bus, fixture.bu_rate);
  }
  out.upload_delay = delay_sum / fixture.n_users;
  out.total = out.upload_cost + out.vm_cost + out.inter_rsu_cost;
  return out;
}

costmodel::CostBreakdown ToyBreakdown::as_cost_breakdown() const {
  costmodel::CostBreakdown b;
  b.comm = upload_cost + inter_rsu_cost;
  b.comp = vm_cost;
  b.latency.upload = upload_delay;
  b.latency.interfog = inter_rsu_cost;  // unit-cost mode: the abstract cost itself
  b.finalize();
  return b;
}

double improvement_percent(double base_total, double improved_total) {
  if (!(base_total > 0.0)) throw std::invalid_argument("improvement_percent: zero base");
  const double pct = (base_total - improved_total) / base_total * 100.0;
  return std::floor(pct * 100.0) / 100.0;
}

topology::Topology toy_topology(const ToyFixture& fixture) {
  topology::Topology topo;
  topo.cities.resize(fixture.n_rsus);
  topo.consumers_per_city.assign(fixture.n_rsus, 0);
  topo.consumers_per_city[0] = fixture.n_users;  // the EVs roam near R1's block
  for (int r = 0; r < fixture.n_rsus; ++r) {
    topo.cities[r] = topology::City{r, "rsu-" + std::to_string(r + 1), 1, 0.0, 0.001 * r};
  }
  topo.fog_nodes.resize(fixture.n_rsus);
  for (int r = 0; r < fixture.n_rsus; ++r) {
    topology::FogNode& f = topo.fog_nodes[r];
    f.id = r;
    f.city = r;
    f.bandwidth_units = fixture.bus_per_rsu;
    f.per_bu_rate = fixture.bu_rate;
    f.service_rate = 100.0;
    f.processing_elements = 1;
    f.physical_servers = fixture.vm_capable[r] ? 1 : 0;  // capability = VM cap
    f.vm_cap_per_server = 1;
    f.storage_cap = 1e6;
    f.proc_cap = 100.0;
    f.energy_rate = 3.7;
  }
  topo.fog_dist_km.assign(fixture.n_rsus, std::vector<double>(fixture.n_rsus, 0.0));
  for (int a = 0; a < fixture.n_rsus; ++a) {
    for (int b = 0; b < fixture.n_rsus; ++b) {
      topo.fog_dist_km[a][b] = static_cast<double>(fixture.hops[a][b]);
    }
  }
  topo.fog_server_dist_km.assign(fixture.n_rsus, {});
  topo.nearest_server.assign(fixture.n_rsus, 0);
  topo.reach_radius_km.assign(fixture.n_rsus, 0.0);
  // Drivers can associate exactly with the RSUs that sell uplink capacity.
  topo.pref_city_lists.assign(fixture.n_rsus, {});
  for (int r = 0; r < fixture.n_rsus; ++r) {
    if (fixture.uplink_price[r] >= 0.0) topo.pref_city_lists[r].push_back(0);
  }
  topo.rebuild_offsets();
  return topo;
}

costmodel::ScenarioParams toy_params(const ToyFixture& fixture) {
  costmodel::ScenarioParams p;
  p.pi_c = 0.0;
  p.pi_f = 1.0;  // everything is served within the RSU tier
  p.pi_cs = 0.0;
  p.n_consumers = fixture.n_users;
  p.n_fog = fixture.n_rsus;
  p.n_servers = 1;
  p.bu_per_fog = fixture.bus_per_rsu;
  p.bu_rate = fixture.bu_rate;
  p.volume_total = 1.0;
  p.volume_cloud = 0.0;
  p.volume_fog = 1.0;
  p.volume_sequential = 0.0;
  p.interfog_payload = 0.0;
  p.arrival_rate_per_consumer = 1.0;
  p.fog_service_rate = 100.0;
  p.fog_proc_cap = 100.0;
  p.delay_limits = {10.0};
  p.app_storage_demand = 1.0;
  return p;
}

feasibility::DecisionVector toy_decision_vector(const ToyFixture& fixture,
                                                const ToyAssignment& assignment) {
  const int n = fixture.n_users;
  feasibility::DecisionVector dv = feasibility::DecisionVector::make_empty(
      n, fixture.n_rsus, 0, /*apps=*/n);
  std::vector<int> users_on(fixture.n_rsus, 0);
  for (int u = 0; u < n; ++u) ++users_on[assignment.assoc[u]];

  std::vector<int> next_slot(fixture.n_rsus, 0);
  dv.bu_owners.assign(fixture.n_rsus, {});
  for (int r = 0; r < fixture.n_rsus; ++r) {
    dv.bu_owners[r].assign(fixture.bus_per_rsu, {});
  }
  for (int u = 0; u < n; ++u) {
    const int a = assignment.assoc[u];
    const int h = assignment.vm_host[u];
    dv.consumer_app[u] = u;
    dv.assoc[u] = {a};
    dv.offload_fog[u] = 1;
    dv.workload_rate[u] = 1.0;
    const int share = fixture.bus_per_rsu / users_on[a];
    dv.allocated_bus[u] = static_cast<double>(share);
    for (int s = 0; s < share; ++s) dv.bu_owners[a][next_slot[a]++] = {u};
    dv.vm_placement[u][h] = 1;
    dv.interfog_rate[u][a][h] = 1.0;  // the driver's stream is processed at h
  }
  return dv;
}

ToyAssignment decode_toy_genome(const ToyFixture& fixture, const mde::Genome& genome) {
  const std::vector<int> priced = fixture.priced_rsus();
  const std::vector<int> capable = fixture.capable_rsus();
  const int n = fixture.n_users;
  if (static_cast<int>(genome.size()) != 2 * n) {
    throw std::invalid_argument("decode_toy_genome: genome length mismatch");
  }
  ToyAssignment out;
  out.assoc.resize(n);
  out.vm_host.resize(n);
  for (int u = 0; u < n; ++u) {
    const auto a_idx = std::min<std::size_t>(
        static_cast<std::size_t>(genome[u] * static_cast<double>(priced.size())),
        priced.size() - 1);
    out.assoc[u] = priced[a_idx];
  }
  // Host decode over all RSUs; non-capable or already-claimed targets move to
  // the nearest free capable RSU, ties to the lowest index.
  std::vector<std::uint8_t> taken(fixture.n_rsus, 0);
  for (int u = 0; u < n; ++u) {
    const auto target = std::min<std::size_t>(
        static_cast<std::size_t>(genome[n + u] * static_cast<double>(fixture.n_rsus)),
        static_cast<std::size_t>(fixture.n_rsus - 1));
    int chosen = -1;
    int best_hops = std::numeric_limits<int>::max();
    for (const int c : capable) {
      if (taken[c]) continue;
      const int h = fixture.hops[static_cast<int>(target)][c];
      if (h < best_hops) {
        best_hops = h;
        chosen = c;
      }
    }
    if (chosen < 0) throw std::logic_error("decode_toy_genome: ran out of capable RSUs");
    taken[chosen] = 1;
    out.vm_host[u] = chosen;
  }
  return out;
}

mde::Problem toy_mde_problem(const ToyFixture& fixture) {
  mde::Problem problem;
  problem.genome_length = static_cast<std::size_t>(2 * fixture.n_users);
  problem.objective = [fixture](const mde::Genome& genome) {
    const ToyAssignment assignment = decode_toy_genome(fixture, genome);
    const ToyBreakdown breakdown = evaluate_toy(fixture, assignment);
    return std::make_pair(breakdown.total, toy_feasible(fixture, assignment));
  };
  return problem;
}

}  // namespace fogplan::toyvanet
