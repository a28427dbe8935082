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

#ifndef FOGPLAN_TOPOLOGY_HPP
#define FOGPLAN_TOPOLOGY_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fogplan/params.hpp"

namespace fogplan::topology {

struct City {
  int id = 0;
  std::string name;
  std::int64_t population = 0;
  double lat = 0.0;
  double lon = 0.0;
};

struct FogNode {
  int id = 0;
  int city = 0;
  int bandwidth_units = 0;
  double per_bu_rate = 0.0;  // delta, bytes/s per BU
  double service_rate = 0.0;
  int processing_elements = 0;
  int physical_servers = 0;
  int vm_cap_per_server = 0;
  double storage_cap = 0.0;
  double proc_cap = 0.0;
  double energy_rate = 0.0;

  int max_vms() const { return physical_servers * vm_cap_per_server; }
};

struct CloudServer {
  int id = 0;
  double lat = 0.0;
  double lon = 0.0;
  std::int64_t device_capacity = 0;  // one of 16K/32K/64K/128K
  double power_draw_w = 0.0;         // paired with device_capacity
  int machine_count_max = 0;
  double cpu_freq_min = 0.0;
  double cpu_freq_max = 0.0;
};

// The synthetic smart-grid network. Immutable once built; shared freely
// across threads. Consumers are numbered city-major, so all consumers of city
// c occupy [consumer_offset[c], consumer_offset[c+1]).
struct Topology {
  int schema_version = 1;
  std::vector<City> cities;
  std::vector<std::int64_t> consumers_per_city;
  std::vector<FogNode> fog_nodes;  // one per city
  std::vector<CloudServer> servers;
  std::vector<std::vector<double>> fog_dist_km;         // |F| x |F|, symmetric, zero diagonal
  std::vector<std::vector<double>> fog_server_dist_km;  // |F| x |D|
  std::vector<double> reach_radius_km;                  // per city
  std::vector<std::vector<int>> pref_city_lists;  // per fog: reachable city ids, by (distance, id)
  std::vector<int> nearest_server;                // per fog
  double consumer_link_bps = 1e9;
  double interfog_link_bps = 1e10;

  std::vector<std::int64_t> consumer_offset;  // prefix sums, size |cities|+1

  std::int64_t total_consumers() const {
    return consumer_offset.empty() ? 0 : consumer_offset.back();
  }
  int consumer_city(std::int64_t consumer) const;
  void rebuild_offsets();
};

// Planar distance after an equirectangular projection at the midpoint
// latitude of the pair. Uses the WGS84 equatorial radius, so one degree of
// longitude at the equator is ~111.32 km. Symmetric and zero at identity.
double euclidean_distance(double lat_a, double lon_a, double lat_b, double lon_b);

struct KmeansResult {
  std::vector<std::pair<double, double>> centroids;  // (lat, lon)
  std::vector<int> assignment;                       // per city
  std::vector<double> wcss_history;                  // after each assignment pass
};

// Population-weighted k-means on the projected plane, k-means++ seeding from
// the given seed, 100-iteration cap with a 1e-9 relative-improvement stop.
KmeansResult cluster_servers_detailed(const std::vector<City>& cities, int k, std::uint64_t seed);
std::vector<std::pair<double, double>> cluster_servers(const std::vector<City>& cities, int k,
                                                       std::uint64_t seed);

// Population-proportional integer apportionment by largest remainder; the
// result sums to total exactly.
std::vector<std::int64_t> apportion_consumers(const std::vector<City>& cities,
                                              std::int64_t total);

// Builds the whole network deterministically from config + seed: city table,
// population-proportional consumers (largest remainder, sums exactly to
// n_consumers), one fog node per city, clustered cloud servers, distance
// matrices and reachability lists.
Topology generate_topology(const costmodel::ScenarioParams& config, std::uint64_t seed);

// Consumer ids reachable from fog_id: all consumers of every city whose
// distance to the fog is within that city's reach radius (closed ball),
// ordered by distance then consumer index.
std::vector<int> reachable_set(int fog_id, const Topology& topo);

std::string topology_to_json(const Topology& topo);
Topology topology_from_json(const std::string& text);

// City dataset: CSV with header `name,population,lat,lon`.
std::vector<City> load_cities_csv(const std::string& path);
const std::vector<City>& default_cities();

}  // namespace fogplan::topology

#endif  // FOGPLAN_TOPOLOGY_HPP
