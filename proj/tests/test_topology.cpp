#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <set>

#include "fogplan/errors.hpp"
#include "fogplan/params.hpp"
#include "fogplan/rng.hpp"
#include "fogplan/topology.hpp"

using namespace fogplan;
using namespace fogplan::topology;

TEST_CASE("euclidean_distance identity and oracle value") {
  CHECK(euclidean_distance(12.5, -7.25, 12.5, -7.25) == 0.0);
  // One degree of longitude at the equator under the WGS84 equatorial radius.
  const double oracle = 6378.137 * (std::acos(-1.0) / 180.0);
  CHECK(euclidean_distance(0.0, 0.0, 0.0, 1.0) == doctest::Approx(oracle).epsilon(1e-12));
  CHECK(oracle == doctest::Approx(111.3195).epsilon(1e-4));
}

TEST_CASE("euclidean_distance symmetry on random pairs") {
  RngStream rng(17);
  for (int i = 0; i < 100; ++i) {
    const double a_lat = rng.uniform01() * 180.0 - 90.0;
    const double a_lon = rng.uniform01() * 360.0 - 180.0;
    const double b_lat = rng.uniform01() * 180.0 - 90.0;
    const double b_lon = rng.uniform01() * 360.0 - 180.0;
    const double ab = euclidean_distance(a_lat, a_lon, b_lat, b_lon);
    CHECK(ab == euclidean_distance(b_lat, b_lon, a_lat, a_lon));
    CHECK(ab >= 0.0);
  }
}

TEST_CASE("euclidean_distance rejects bad coordinates") {
  CHECK_THROWS_AS(euclidean_distance(91.0, 0.0, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(euclidean_distance(0.0, 200.0, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("cluster_servers k=1 is the population-weighted centroid") {
  std::vector<City> cities = {
      {0, "a", 1000, 10.0, 20.0}, {1, "b", 3000, 14.0, 24.0}, {2, "c", 1000, 12.0, 28.0}};
  const auto centroids = cluster_servers(cities, 1, 7);
  REQUIRE(centroids.size() == 1);
  // Weighted mean latitude is exact under the projection (y is linear in lat).
  const double lat_oracle = (1000.0 * 10 + 3000.0 * 14 + 1000.0 * 12) / 5000.0;
  CHECK(centroids[0].first == doctest::Approx(lat_oracle).epsilon(1e-12));
  const double lon_oracle = (1000.0 * 20 + 3000.0 * 24 + 1000.0 * 28) / 5000.0;
  CHECK(centroids[0].second == doctest::Approx(lon_oracle).epsilon(1e-12));
}

TEST_CASE("cluster_servers separates two distant blobs, matching the best 2-partition") {
  // Two tight groups far apart; brute force over all 2-partitions gives the
  // optimal weighted WCSS to compare against.
  std::vector<City> cities = {{0, "a0", 100, 0.0, 0.0},  {1, "a1", 200, 0.1, 0.1},
                              {2, "a2", 150, -0.1, 0.1}, {3, "b0", 120, 40.0, 60.0},
                              {4, "b1", 180, 40.1, 60.1}, {5, "b2", 90, 39.9, 59.9}};
  const auto result = cluster_servers_detailed(cities, 2, 3);

  // Projected coordinates, same construction as the implementation applies.
  const double pi = std::acos(-1.0);
  double wsum = 0.0, lat_ref = 0.0;
  for (const auto& c : cities) {
    wsum += static_cast<double>(c.population);
    lat_ref += static_cast<double>(c.population) * c.lat;
  }
  lat_ref = lat_ref / wsum * pi / 180.0;
  auto px = [&](const City& c) { return 6378.137 * c.lon * pi / 180.0 * std::cos(lat_ref); };
  auto py = [&](const City& c) { return 6378.137 * c.lat * pi / 180.0; };

  auto partition_wcss = [&](unsigned mask) {
    double total = 0.0;
    for (int side = 0; side < 2; ++side) {
      double sx = 0.0, sy = 0.0, sw = 0.0;
      for (std::size_t i = 0; i < cities.size(); ++i) {
        if (((mask >> i) & 1u) != static_cast<unsigned>(side)) continue;
        sx += cities[i].population * px(cities[i]);
        sy += cities[i].population * py(cities[i]);
        sw += cities[i].population;
      }
      if (sw == 0.0) return std::numeric_limits<double>::infinity();
      const double cx = sx / sw, cy = sy / sw;
      for (std::size_t i = 0; i < cities.size(); ++i) {
        if (((mask >> i) & 1u) != static_cast<unsigned>(side)) continue;
        const double dx = px(cities[i]) - cx, dy = py(cities[i]) - cy;
        total += cities[i].population * (dx * dx + dy * dy);
      }
    }
    return total;
  };
  double best = std::numeric_limits<double>::infinity();
  for (unsigned mask = 1; mask < 63; ++mask) best = std::min(best, partition_wcss(mask));

  CHECK(result.wcss_history.back() == doctest::Approx(best).epsilon(1e-9));
  // One centroid per blob.
  std::set<int> groups;
  for (int i = 0; i < 3; ++i) groups.insert(result.assignment[i]);
  CHECK(groups.size() == 1);
  std::set<int> groups_b;
  for (int i = 3; i < 6; ++i) groups_b.insert(result.assignment[i]);
  CHECK(groups_b.size() == 1);
  CHECK(*groups.begin() != *groups_b.begin());
}

TEST_CASE("cluster objective is non-increasing and stable across reruns") {
  const auto& cities = default_cities();
  const auto a = cluster_servers_detailed(cities, 8, 42);
  const auto b = cluster_servers_detailed(cities, 8, 42);
  REQUIRE(a.centroids.size() == 8);
  CHECK(a.centroids == b.centroids);
  for (std::size_t i = 1; i < a.wcss_history.size(); ++i) {
    CHECK(a.wcss_history[i] <= a.wcss_history[i - 1] + 1e-9);
  }
  CHECK_THROWS_AS(cluster_servers(cities, 0, 1), ConfigError);
  CHECK_THROWS_AS(cluster_servers(cities, static_cast<int>(cities.size()) + 1, 1), ConfigError);
}

TEST_CASE("generate_topology default shape") {
  const auto params = costmodel::default_params();
  const Topology topo = generate_topology(params, 42);
  CHECK(topo.fog_nodes.size() == 100);
  CHECK(topo.servers.size() == 8);
  CHECK(topo.total_consumers() == params.n_consumers);

  // Symmetric distances with a zero diagonal.
  for (std::size_t i = 0; i < topo.fog_nodes.size(); ++i) {
    CHECK(topo.fog_dist_km[i][i] == 0.0);
    for (std::size_t j = 0; j < i; ++j) {
      CHECK(topo.fog_dist_km[i][j] == topo.fog_dist_km[j][i]);
    }
  }

  // Every city appears in at least one preference list (its own fog is at
  // distance zero, inside any radius).
  std::set<int> covered;
  for (const auto& list : topo.pref_city_lists) covered.insert(list.begin(), list.end());
  CHECK(covered.size() == topo.cities.size());

  // Preference lists ordered by distance, ties by id.
  for (std::size_t f = 0; f < topo.fog_nodes.size(); ++f) {
    const auto& list = topo.pref_city_lists[f];
    for (std::size_t k = 1; k < list.size(); ++k) {
      const double prev = topo.fog_dist_km[f][list[k - 1]];
      const double cur = topo.fog_dist_km[f][list[k]];
      CHECK(prev <= cur);
      if (prev == cur) CHECK(list[k - 1] < list[k]);
    }
  }

  // Fog node VM cap from the physical layout.
  CHECK(topo.fog_nodes[0].max_vms() ==
        params.fog_physical_servers * params.fog_vm_cap_per_server);
  CHECK(topo.fog_nodes[0].energy_rate == 3.7);
}

TEST_CASE("generate_topology is byte-reproducible for a fixed seed") {
  const auto params = costmodel::default_params();
  const std::string a = topology_to_json(generate_topology(params, 42));
  const std::string b = topology_to_json(generate_topology(params, 42));
  CHECK(a == b);
}

TEST_CASE("generate_topology degenerate single city") {
  auto params = costmodel::default_params();
  params.n_fog = 1;
  params.n_servers = 1;
  params.n_consumers = 10;
  const Topology topo = generate_topology(params, 5);
  CHECK(topo.fog_nodes.size() == 1);
  CHECK(topo.fog_dist_km.size() == 1);
  CHECK(topo.fog_dist_km[0][0] == 0.0);
  CHECK(topo.consumers_per_city[0] == 10);
}

TEST_CASE("generate_topology error paths") {
  auto params = costmodel::default_params();
  params.cities_csv = "/nonexistent/cities.csv";
  CHECK_THROWS_AS(generate_topology(params, 1), ConfigError);

  auto too_many_servers = costmodel::default_params();
  too_many_servers.n_fog = 4;
  too_many_servers.n_servers = 8;
  CHECK_THROWS_AS(generate_topology(too_many_servers, 1), ConfigError);
}

TEST_CASE("consumer apportionment sums exactly and follows population") {
  const auto& cities = default_cities();
  for (const std::int64_t n : {10000LL, 33333LL, 100000LL}) {
    const auto counts = apportion_consumers(cities, n);
    std::int64_t sum = 0;
    for (const auto c : counts) sum += c;
    CHECK(sum == n);
  }
  const auto counts = apportion_consumers(cities, 100000);
  CHECK(counts[0] > counts[50]);  // larger city, more consumers
}

TEST_CASE("reachable_set radius boundaries") {
  auto params = costmodel::default_params();
  params.n_fog = 5;
  params.n_servers = 1;
  params.n_consumers = 50;

  // Radius zero: only co-located consumers.
  params.reach_radius_km = 0.0;
  const Topology zero = generate_topology(params, 9);
  for (int f = 0; f < 5; ++f) {
    const auto reachable = reachable_set(f, zero);
    for (const int consumer : reachable) {
      CHECK(zero.consumer_city(consumer) == f);
    }
    CHECK(static_cast<std::int64_t>(reachable.size()) == zero.consumers_per_city[f]);
  }

  // Effectively infinite radius: everyone.
  params.reach_radius_km = 1e9;
  const Topology all = generate_topology(params, 9);
  for (int f = 0; f < 5; ++f) {
    CHECK(static_cast<std::int64_t>(reachable_set(f, all).size()) == all.total_consumers());
  }

  // A consumer exactly at the radius is included (closed ball).
  const double d01 = euclidean_distance(all.cities[0].lat, all.cities[0].lon, all.cities[1].lat,
                                        all.cities[1].lon);
  params.reach_radius_km = d01;
  const Topology edge = generate_topology(params, 9);
  const auto from_fog0 = reachable_set(0, edge);
  bool found_city1 = false;
  for (const int consumer : from_fog0) {
    if (edge.consumer_city(consumer) == 1) found_city1 = true;
  }
  CHECK(found_city1);
}

TEST_CASE("topology JSON round trip") {
  auto params = costmodel::default_params();
  params.n_fog = 10;
  params.n_servers = 3;
  params.n_consumers = 1000;
  const Topology topo = generate_topology(params, 11);
  const Topology back = topology_from_json(topology_to_json(topo));
  CHECK(topology_to_json(back) == topology_to_json(topo));
  CHECK(back.total_consumers() == topo.total_consumers());
  CHECK_THROWS_AS(topology_from_json("{not json"), ConfigError);
}

TEST_CASE("bundled dataset and the shipped CSV agree") {
  const auto& built_in = default_cities();
  CHECK(built_in.size() == 100);
  const auto from_file = load_cities_csv(std::string(FOGPLAN_TEST_DATA_DIR) + "/cities.csv");
  REQUIRE(from_file.size() == built_in.size());
  for (std::size_t i = 0; i < built_in.size(); ++i) {
    CHECK(from_file[i].name == built_in[i].name);
    CHECK(from_file[i].population == built_in[i].population);
    CHECK(from_file[i].lat == built_in[i].lat);
    CHECK(from_file[i].lon == built_in[i].lon);
  }
}

TEST_CASE("every BU id belongs to exactly one fog node") {
  // BU identity is (fog, slot); the generator gives every fog its own block.
  const auto params = costmodel::default_params();
  const Topology topo = generate_topology(params, 42);
  for (const auto& fog : topo.fog_nodes) {
    CHECK(fog.bandwidth_units == params.bu_per_fog);
    CHECK(fog.per_bu_rate == params.bu_rate);
  }
}
