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

#include "fogplan/topology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "fogplan/errors.hpp"
#include "fogplan/rng.hpp"

namespace fogplan::topology {

namespace {

constexpr double kEarthRadiusKm = 6378.137;  // WGS84 equatorial
constexpr double kDegToRad = std::numbers::pi / 180.0;

void check_coord(double lat, double lon) {
  if (!(lat >= -90.0 && lat <= 90.0) || !(lon >= -180.0 && lon <= 180.0)) {
    throw std::invalid_argument("coordinate out of range");
  }
}

// Capacity classes from the evaluation setup: device counts paired with
// megawatt-scale power draws, index for index.
constexpr std::int64_t kDeviceClasses[4] = {16384, 32768, 65536, 131072};
constexpr double kPowerClassesW[4] = {9.7e6, 19.4e6, 38.7e6, 77.4e6};

// Largest-remainder apportionment; remainder ties go to the lower index.
std::vector<std::int64_t> largest_remainder(std::int64_t total,
                                            const std::vector<double>& weights) {
  const double wsum = std::accumulate(weights.begin(), weights.end(), 0.0);
  const std::size_t n = weights.size();
  std::vector<std::int64_t> out(n, 0);
  if (total <= 0 || wsum <= 0.0) return out;

  std::vector<double> remainder(n, 0.0);
  std::int64_t assigned = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double exact = static_cast<double>(total) * weights[i] / wsum;
    out[i] = static_cast<std::int64_t>(std::floor(exact));
    remainder[i] = exact - static_cast<double>(out[i]);
    assigned += out[i];
  }
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t j = 0; assigned < total; ++j) {
    out[order[j % n]] += 1;
    ++assigned;
  }
  return out;
}

}  // namespace

int Topology::consumer_city(std::int64_t consumer) const {
  const auto it = std::upper_bound(consumer_offset.begin(), consumer_offset.end(), consumer);
  return static_cast<int>(std::distance(consumer_offset.begin(), it)) - 1;
}

void Topology::rebuild_offsets() {
  consumer_offset.assign(1, 0);
  consumer_offset.reserve(consumers_per_city.size() + 1);
  for (const std::int64_t c : consumers_per_city) {
    consumer_offset.push_back(consumer_offset.back() + c);
  }
}

std::vector<std::int64_t> apportion_consumers(const std::vector<City>& cities,
                                              std::int64_t total) {
  std::vector<double> weights(cities.size());
  for (std::size_t i = 0; i < cities.size(); ++i) {
    weights[i] = static_cast<double>(cities[i].population);
  }
  return largest_remainder(total, weights);
}

double euclidean_distance(double lat_a, double lon_a, double lat_b, double lon_b) {
  check_coord(lat_a, lon_a);
  check_coord(lat_b, lon_b);
  const double mid_lat = 0.5 * (lat_a + lat_b) * kDegToRad;
  const double dx = (lon_b - lon_a) * kDegToRad * std::cos(mid_lat);
  const double dy = (lat_b - lat_a) * kDegToRad;
  return kEarthRadiusKm * std::hypot(dx, dy);
}

KmeansResult cluster_servers_detailed(const std::vector<City>& cities, int k,
                                      std::uint64_t seed) {
  if (k <= 0) throw ConfigError("cluster_servers: k must be positive");
  if (cities.empty()) throw ConfigError("cluster_servers: empty city table");
  if (static_cast<std::size_t>(k) > cities.size()) {
    throw ConfigError("cluster_servers: k exceeds number of cities");
  }

  const std::size_t n = cities.size();
  // Fixed global projection so the k-means objective lives in one plane.
  double wsum = 0.0, lat_ref = 0.0;
  for (const City& c : cities) {
    wsum += static_cast<double>(c.population);
    lat_ref += static_cast<double>(c.population) * c.lat;
  }
  lat_ref = lat_ref / wsum * kDegToRad;
  const double cos_ref = std::cos(lat_ref);

  std::vector<double> px(n), py(n), w(n);
  for (std::size_t i = 0; i < n; ++i) {
    px[i] = kEarthRadiusKm * cities[i].lon * kDegToRad * cos_ref;
    py[i] = kEarthRadiusKm * cities[i].lat * kDegToRad;
    w[i] = static_cast<double>(cities[i].population);
  }

  RngStream rng(seed);
  auto weighted_pick = [&](const std::vector<double>& weight) {
    double total = std::accumulate(weight.begin(), weight.end(), 0.0);
    if (total <= 0.0) return std::size_t{0};
    double u = rng.uniform01() * total;
    for (std::size_t i = 0; i < weight.size(); ++i) {
      u -= weight[i];
      if (u <= 0.0) return i;
    }
    return weight.size() - 1;
  };

  // k-means++ seeding with population weights.
  std::vector<double> cx(k), cy(k);
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());
  {
    const std::size_t first = weighted_pick(w);
    cx[0] = px[first];
    cy[0] = py[first];
    for (int c = 1; c < k; ++c) {
      std::vector<double> score(n);
      for (std::size_t i = 0; i < n; ++i) {
        const double dx = px[i] - cx[c - 1];
        const double dy = py[i] - cy[c - 1];
        d2[i] = std::min(d2[i], dx * dx + dy * dy);
        score[i] = w[i] * d2[i];
      }
      const std::size_t pick = weighted_pick(score);
      cx[c] = px[pick];
      cy[c] = py[pick];
    }
  }

  KmeansResult result;
  result.assignment.assign(n, 0);
  constexpr int kMaxIterations = 100;
  double prev_wcss = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    // Assignment pass; ties go to the lower centroid index.
    double wcss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      int best_c = 0;
      for (int c = 0; c < k; ++c) {
        const double dx = px[i] - cx[c];
        const double dy = py[i] - cy[c];
        const double dd = dx * dx + dy * dy;
        if (dd < best) {
          best = dd;
          best_c = c;
        }
      }
      result.assignment[i] = best_c;
      wcss += w[i] * best;
    }
    result.wcss_history.push_back(wcss);

    // Update pass: population-weighted centroids; an empty cluster jumps to
    // the point that currently contributes most to the objective.
    std::vector<double> sx(k, 0.0), sy(k, 0.0), sw(k, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const int c = result.assignment[i];
      sx[c] += w[i] * px[i];
      sy[c] += w[i] * py[i];
      sw[c] += w[i];
    }
    for (int c = 0; c < k; ++c) {
      if (sw[c] > 0.0) {
        cx[c] = sx[c] / sw[c];
        cy[c] = sy[c] / sw[c];
      } else {
        std::size_t worst = 0;
        double worst_score = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
          const double dx = px[i] - cx[result.assignment[i]];
          const double dy = py[i] - cy[result.assignment[i]];
          const double score = w[i] * (dx * dx + dy * dy);
          if (score > worst_score) {
            worst_score = score;
            worst = i;
          }
        }
        cx[c] = px[worst];
        cy[c] = py[worst];
      }
    }

    if (iter > 0 && prev_wcss - wcss <= 1e-9 * std::max(prev_wcss, 1e-30)) break;
    prev_wcss = wcss;
  }

  result.centroids.resize(k);
  for (int c = 0; c < k; ++c) {
    result.centroids[c] = {cy[c] / kEarthRadiusKm / kDegToRad,
                           cx[c] / kEarthRadiusKm / kDegToRad / cos_ref};
  }
  return result;
}

std::vector<std::pair<double, double>> cluster_servers(const std::vector<City>& cities, int k,
                                                       std::uint64_t seed) {
  return cluster_servers_detailed(cities, k, seed).centroids;
}

Topology generate_topology(const costmodel::ScenarioParams& config, std::uint64_t seed) {
  config.validate();
  std::vector<City> table =
      config.cities_csv.empty() ? default_cities() : load_cities_csv(config.cities_csv);
  if (table.empty()) throw ConfigError("generate_topology: empty city table");

  const int n_fog = std::min<int>(config.n_fog, static_cast<int>(table.size()));
  if (n_fog <= 0) throw ConfigError("generate_topology: n_fog must be positive");
  if (config.n_servers <= 0) throw ConfigError("generate_topology: n_servers must be positive");
  if (config.n_servers > n_fog) {
    throw ConfigError("generate_topology: more cloud servers than fog nodes");
  }

  Topology topo;
  topo.cities.assign(table.begin(), table.begin() + n_fog);
  for (int i = 0; i < n_fog; ++i) topo.cities[i].id = i;
  topo.consumer_link_bps = config.consumer_link_bps;
  topo.interfog_link_bps = config.interfog_link_bps;

  // Consumers proportional to population, exact total.
  topo.consumers_per_city = apportion_consumers(topo.cities, config.n_consumers);
  topo.rebuild_offsets();
  std::vector<double> weights(n_fog);
  for (int i = 0; i < n_fog; ++i) weights[i] = static_cast<double>(topo.cities[i].population);

  // One fog node per city, homogeneous parameters.
  topo.fog_nodes.resize(n_fog);
  for (int i = 0; i < n_fog; ++i) {
    FogNode& f = topo.fog_nodes[i];
    f.id = i;
    f.city = i;
    f.bandwidth_units = config.bu_per_fog;
    f.per_bu_rate = config.bu_rate;
    f.service_rate = config.fog_service_rate;
    f.processing_elements = config.fog_processing_elements;
    f.physical_servers = config.fog_physical_servers;
    f.vm_cap_per_server = config.fog_vm_cap_per_server;
    f.storage_cap = config.fog_storage_cap;
    f.proc_cap = config.fog_proc_cap;
    f.energy_rate = config.fog_energy_rate;
  }

  // Cloud servers by population clustering; the heavier the cluster, the
  // larger the device-capacity class.
  RngStream rng(seed);
  const KmeansResult clusters =
      cluster_servers_detailed(topo.cities, config.n_servers, rng.split(1).next_u64());
  std::vector<double> cluster_weight(config.n_servers, 0.0);
  for (int i = 0; i < n_fog; ++i) {
    cluster_weight[clusters.assignment[i]] += weights[i];
  }
  std::vector<int> order(config.n_servers);
  for (int i = 0; i < config.n_servers; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return cluster_weight[a] > cluster_weight[b]; });

  topo.servers.resize(config.n_servers);
  std::vector<int> rank_of(config.n_servers);
  for (int r = 0; r < config.n_servers; ++r) rank_of[order[r]] = r;
  for (int s = 0; s < config.n_servers; ++s) {
    CloudServer& srv = topo.servers[s];
    srv.id = s;
    srv.lat = clusters.centroids[s].first;
    srv.lon = clusters.centroids[s].second;
    const int cls = (config.n_servers - 1 - rank_of[s]) * 4 / config.n_servers;
    srv.device_capacity = kDeviceClasses[cls];
    srv.power_draw_w = kPowerClassesW[cls];
    srv.machine_count_max = config.cloud_machine_count_max;
    srv.cpu_freq_min = config.cloud_cpu_freq_min;
    srv.cpu_freq_max = config.cloud_cpu_freq_max;
  }

  // Distances.
  topo.fog_dist_km.assign(n_fog, std::vector<double>(n_fog, 0.0));
  for (int i = 0; i < n_fog; ++i) {
    for (int j = i + 1; j < n_fog; ++j) {
      const double d = euclidean_distance(topo.cities[i].lat, topo.cities[i].lon,
                                          topo.cities[j].lat, topo.cities[j].lon);
      topo.fog_dist_km[i][j] = d;
      topo.fog_dist_km[j][i] = d;
    }
  }
  topo.fog_server_dist_km.assign(n_fog, std::vector<double>(config.n_servers, 0.0));
  topo.nearest_server.assign(n_fog, 0);
  for (int i = 0; i < n_fog; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (int s = 0; s < config.n_servers; ++s) {
      const double d = euclidean_distance(topo.cities[i].lat, topo.cities[i].lon,
                                          topo.servers[s].lat, topo.servers[s].lon);
      topo.fog_server_dist_km[i][s] = d;
      if (d < best) {
        best = d;
        topo.nearest_server[i] = s;
      }
    }
  }

  // Reach radius per city: fixed override, or the distance to the
  // reach_neighbors-th nearest fog (own fog counts, at distance zero).
  topo.reach_radius_km.assign(n_fog, 0.0);
  for (int c = 0; c < n_fog; ++c) {
    if (config.reach_radius_km >= 0.0) {
      topo.reach_radius_km[c] = config.reach_radius_km;
      continue;
    }
    std::vector<double> d = topo.fog_dist_km[c];
    std::sort(d.begin(), d.end());
    const std::size_t idx = std::min<std::size_t>(
        static_cast<std::size_t>(std::max(config.reach_neighbors, 1)) - 1, d.size() - 1);
    topo.reach_radius_km[c] = d[idx];
  }

  // Per-fog preference lists at city granularity.
  topo.pref_city_lists.assign(n_fog, {});
  for (int f = 0; f < n_fog; ++f) {
    std::vector<std::pair<double, int>> in_range;
    for (int c = 0; c < n_fog; ++c) {
      const double d = topo.fog_dist_km[f][c];
      if (d <= topo.reach_radius_km[c]) in_range.emplace_back(d, c);
    }
    std::sort(in_range.begin(), in_range.end());
    topo.pref_city_lists[f].reserve(in_range.size());
    for (const auto& [d, c] : in_range) topo.pref_city_lists[f].push_back(c);
  }

  return topo;
}

std::vector<int> reachable_set(int fog_id, const Topology& topo) {
  if (fog_id < 0 || fog_id >= static_cast<int>(topo.fog_nodes.size())) {
    throw std::invalid_argument("reachable_set: fog id out of range");
  }
  std::vector<int> out;
  for (const int city : topo.pref_city_lists[fog_id]) {
    const std::int64_t begin = topo.consumer_offset[city];
    const std::int64_t end = topo.consumer_offset[city + 1];
    for (std::int64_t i = begin; i < end; ++i) out.push_back(static_cast<int>(i));
  }
  return out;
}

namespace {

using nlohmann::json;

json city_to_json(const City& c) {
  return json{{"id", c.id}, {"name", c.name}, {"population", c.population},
              {"lat", c.lat}, {"lon", c.lon}};
}

json fog_to_json(const FogNode& f) {
  return json{{"id", f.id},
              {"city", f.city},
              {"bandwidth_units", f.bandwidth_units},
              {"per_bu_rate", f.per_bu_rate},
              {"service_rate", f.service_rate},
              {"processing_elements", f.processing_elements},
              {"physical_servers", f.physical_servers},
              {"vm_cap_per_server", f.vm_cap_per_server},
              {"storage_cap", f.storage_cap},
              {"proc_cap", f.proc_cap},
              {"energy_rate", f.energy_rate}};
}

json server_to_json(const CloudServer& s) {
  return json{{"id", s.id},
              {"lat", s.lat},
              {"lon", s.lon},
              {"device_capacity", s.device_capacity},
              {"power_draw_w", s.power_draw_w},
              {"machine_count_max", s.machine_count_max},
              {"cpu_freq_min", s.cpu_freq_min},
              {"cpu_freq_max", s.cpu_freq_max}};
}

}  // namespace

std::string topology_to_json(const Topology& topo) {
  json j;
  j["schema_version"] = topo.schema_version;
  j["cities"] = json::array();
  for (const City& c : topo.cities) j["cities"].push_back(city_to_json(c));
  j["consumers_per_city"] = topo.consumers_per_city;
  j["fog_nodes"] = json::array();
  for (const FogNode& f : topo.fog_nodes) j["fog_nodes"].push_back(fog_to_json(f));
  j["servers"] = json::array();
  for (const CloudServer& s : topo.servers) j["servers"].push_back(server_to_json(s));
  j["fog_dist_km"] = topo.fog_dist_km;
  j["fog_server_dist_km"] = topo.fog_server_dist_km;
  j["reach_radius_km"] = topo.reach_radius_km;
  j["pref_city_lists"] = topo.pref_city_lists;
  j["nearest_server"] = topo.nearest_server;
  j["consumer_link_bps"] = topo.consumer_link_bps;
  j["interfog_link_bps"] = topo.interfog_link_bps;
  return j.dump(2);
}

Topology topology_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("topology JSON parse error: ") + e.what());
  }
  try {
    if (j.at("schema_version").get<int>() != 1) {
      throw ConfigError("topology: unsupported schema version");
    }
    Topology topo;
    for (const json& c : j.at("cities")) {
      topo.cities.push_back(City{c.at("id").get<int>(), c.at("name").get<std::string>(),
                                 c.at("population").get<std::int64_t>(), c.at("lat").get<double>(),
                                 c.at("lon").get<double>()});
    }
    topo.consumers_per_city = j.at("consumers_per_city").get<std::vector<std::int64_t>>();
    for (const json& f : j.at("fog_nodes")) {
      FogNode node;
      node.id = f.at("id").get<int>();
      node.city = f.at("city").get<int>();
      node.bandwidth_units = f.at("bandwidth_units").get<int>();
      node.per_bu_rate = f.at("per_bu_rate").get<double>();
      node.service_rate = f.at("service_rate").get<double>();
      node.processing_elements = f.at("processing_elements").get<int>();
      node.physical_servers = f.at("physical_servers").get<int>();
      node.vm_cap_per_server = f.at("vm_cap_per_server").get<int>();
      node.storage_cap = f.at("storage_cap").get<double>();
      node.proc_cap = f.at("proc_cap").get<double>();
      node.energy_rate = f.at("energy_rate").get<double>();
      topo.fog_nodes.push_back(node);
    }
    for (const json& s : j.at("servers")) {
      CloudServer srv;
      srv.id = s.at("id").get<int>();
      srv.lat = s.at("lat").get<double>();
      srv.lon = s.at("lon").get<double>();
      srv.device_capacity = s.at("device_capacity").get<std::int64_t>();
      srv.power_draw_w = s.at("power_draw_w").get<double>();
      srv.machine_count_max = s.at("machine_count_max").get<int>();
      srv.cpu_freq_min = s.at("cpu_freq_min").get<double>();
      srv.cpu_freq_max = s.at("cpu_freq_max").get<double>();
      topo.servers.push_back(srv);
    }
    topo.fog_dist_km = j.at("fog_dist_km").get<std::vector<std::vector<double>>>();
    topo.fog_server_dist_km = j.at("fog_server_dist_km").get<std::vector<std::vector<double>>>();
    topo.reach_radius_km = j.at("reach_radius_km").get<std::vector<double>>();
    topo.pref_city_lists = j.at("pref_city_lists").get<std::vector<std::vector<int>>>();
    topo.nearest_server = j.at("nearest_server").get<std::vector<int>>();
    topo.consumer_link_bps = j.at("consumer_link_bps").get<double>();
    topo.interfog_link_bps = j.at("interfog_link_bps").get<double>();
    topo.rebuild_offsets();
    return topo;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("topology JSON field error: ") + e.what());
  }
}

}  // namespace fogplan::topology
