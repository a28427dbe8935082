#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <json.hpp>

#include "fogplan/costmodel.hpp"
#include "fogplan/errors.hpp"
#include "fogplan/placement.hpp"
#include "fogplan/queueing.hpp"

using namespace fogplan;
using namespace fogplan::costmodel;

TEST_CASE("upload_latency worked example") {
  // One unit of data at rate one through a single BU takes one time unit;
  // four BUs cut it to a quarter.
  CHECK(upload_latency(1.0, 1.0, 1.0) == doctest::Approx(1.0));
  CHECK(upload_latency(1.0, 4.0, 1.0) == doctest::Approx(0.25));
  CHECK(upload_latency(0.0, 3.0, 2.0) == 0.0);
  CHECK_THROWS_AS(upload_latency(1.0, 0.0, 1.0), UnservedConsumerError);
}

TEST_CASE("interfog_latency") {
  CHECK(interfog_latency(10.0, 5.0) == doctest::Approx(2.0));
  CHECK(interfog_latency(0.0, 5.0) == 0.0);
  CHECK_THROWS_AS(interfog_latency(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("dispatch_latency") {
  CHECK(dispatch_latency(2.0, 3.0) == doctest::Approx(6.0));
  CHECK(dispatch_latency(2.0, 0.0) == 0.0);
  CHECK(dispatch_latency(2.0, 6.0) == doctest::Approx(2.0 * dispatch_latency(2.0, 3.0)));
}

TEST_CASE("fog_comm_cost branch structure") {
  LatencyTerms lat{1.0, 1.0, 1.0, 1.0, 1.0};
  CHECK(fog_comm_cost(lat, 1.0, 0.0, 2.0) == doctest::Approx(2.0 * 3.0));
  CHECK(fog_comm_cost(lat, 0.0, 1.0, 2.0) == doctest::Approx(2.0 * 3.0));
  CHECK(fog_comm_cost(lat, 0.5, 0.0, 1.0) == doctest::Approx(3.5));
  CHECK_THROWS_AS(fog_comm_cost(lat, 1.5, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("traffic_cost products") {
  using Matrix = std::vector<std::vector<double>>;
  std::vector<std::vector<std::uint8_t>> unplaced = {{0, 0}, {0, 0}};
  Matrix theta = {{0.0, 5.0}, {0.0, 0.0}};
  Matrix price = {{0.0, 2.0}, {2.0, 0.0}};
  CHECK(traffic_cost(unplaced, theta, price) == 0.0);

  std::vector<std::vector<std::uint8_t>> placed = {{1, 0}, {0, 1}};
  CHECK(traffic_cost(placed, theta, price) == doctest::Approx(10.0));

  std::vector<std::vector<std::uint8_t>> doubled = {{1, 1}, {0, 1}};
  CHECK_THROWS_AS(traffic_cost(doubled, theta, price), std::invalid_argument);
}

TEST_CASE("traffic_cost reproduces the VANET scenario-2 inter-RSU total") {
  // Each driver is a (source VM at the association RSU, compute VM at the
  // host) pair with unit traffic between them and hop-priced links:
  // hops (0,1,2,1) at 5 per hop add up to 20.
  const int hops[4] = {0, 1, 2, 1};
  std::vector<std::vector<std::uint8_t>> placement(8, std::vector<std::uint8_t>(8, 0));
  std::vector<std::vector<double>> theta(8, std::vector<double>(8, 0.0));
  std::vector<std::vector<double>> price(8, std::vector<double>(8, 0.0));
  for (int u = 0; u < 4; ++u) {
    placement[u][u] = 1;           // source VM at node u
    placement[4 + u][4 + u] = 1;   // compute VM at node 4+u
    theta[u][4 + u] = 1.0;
    price[u][4 + u] = 5.0 * hops[u];
  }
  CHECK(traffic_cost(placement, theta, price) == doctest::Approx(20.0));
}

TEST_CASE("fog_comp_power quadratic curve") {
  FogPowerCoeffs simple{1.0, 0.0, 0.0};
  const double y1[1] = {2.0};
  CHECK(fog_comp_power(y1, simple, 1.0, 1.0, true) == doctest::Approx(4.0));
  CHECK(fog_comp_power(y1, simple, 1.0, 1.0, false) == 0.0);

  // Superlinearity with b=c=0: doubling the load more than doubles the power.
  const double y2[1] = {4.0};
  CHECK(fog_comp_power(y2, simple, 1.0, 1.0, true) >
        2.0 * fog_comp_power(y1, simple, 1.0, 1.0, true));

  // Strict convexity of the midpoint.
  const double a[1] = {1.0}, b[1] = {5.0}, mid[1] = {3.0};
  const double pa = fog_comp_power(a, simple, 1.0, 1.0, true);
  const double pb = fog_comp_power(b, simple, 1.0, 1.0, true);
  const double pm = fog_comp_power(mid, simple, 1.0, 1.0, true);
  CHECK(pm < 0.5 * (pa + pb));

  FogPowerCoeffs broken{0.0, 1.0, 1.0};
  CHECK_THROWS_AS(fog_comp_power(y1, broken, 1.0, 1.0, true), ConfigError);
}

TEST_CASE("cloud_comp_power values") {
  CloudPowerCoeffs cube{1.0, 0.0, 3.0};
  CHECK(cloud_comp_power(true, 1, 2.0, cube, false) == doctest::Approx(8.0));
  CHECK(cloud_comp_power(false, 1, 2.0, cube, false) == 0.0);
  CloudPowerCoeffs fitted{2.0, 5.0, 2.5};
  // 3 * (2 * 1.5^2.5 + 5), evaluated independently.
  CHECK(cloud_comp_power(true, 3, 1.5, fitted, false) ==
        doctest::Approx(31.534055763786450).epsilon(1e-12));
  // A fog-associated workload draws nothing from the cloud pool.
  CHECK(cloud_comp_power(true, 3, 1.5, fitted, true) == 0.0);
}

TEST_CASE("emission_cost unit chain") {
  ScenarioParams p;
  p.pi_f = 0.0;
  p.emission_price = 1.0;
  p.emission_rate = 1.0;
  p.pue = 1.0;
  p.cloud_server_power = 1.0;
  p.horizon_slots = 3600.0;
  p.slot_seconds = 1.0;
  // 1 W for 1 h = 0.001 kWh -> 0.001 g -> USD 0.001.
  CHECK(emission_cost(0.0, p) == doctest::Approx(0.001).epsilon(1e-12));
  CHECK(emission_cost(1.0, p) == 0.0);
  ScenarioParams halved = p;
  halved.pue = 0.5;
  CHECK(emission_cost(0.0, halved) == doctest::Approx(0.0005).epsilon(1e-12));
}

TEST_CASE("fne definition and regimes") {
  CHECK(fne(0.0, 100.0) == doctest::Approx(1.0));   // Edge
  CHECK(fne(100.0, 100.0) == doctest::Approx(0.0)); // Pure cloud
  CHECK(fne(20.0, 100.0) == doctest::Approx(0.8));
  CHECK_THROWS_AS(fne(0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(fne(5.0, 4.0), std::invalid_argument);
}

TEST_CASE("fne matches Bernoulli dispatch simulation within 0.01") {
  RngStream rng(2026);
  const double pi_f = 0.37;
  const double packets = 100000;
  double to_cloud = 0.0;
  for (int i = 0; i < static_cast<int>(packets); ++i) {
    if (rng.uniform01() >= pi_f) to_cloud += 1.0;
  }
  CHECK(std::abs(fne(to_cloud, packets) - pi_f) < 0.01);
}

namespace {

topology::Topology small_topo(ScenarioParams& params, int fogs, int servers,
                              std::int64_t consumers) {
  params.n_fog = fogs;
  params.n_servers = servers;
  params.n_consumers = consumers;
  return topology::generate_topology(params, 7);
}

}  // namespace

TEST_CASE("net_power zero workload and branch elimination") {
  ScenarioParams params = default_params();
  const auto topo = small_topo(params, 4, 1, 0);
  const auto dv = placement::make_fog_assignment(topo, params);
  CHECK(net_power(dv, topo, params) == 0.0);

  ScenarioParams loaded = default_params();
  const auto topo2 = small_topo(loaded, 4, 1, 100);
  loaded.pi_f = 1.0;
  const auto dv2 = placement::make_fog_assignment(topo2, loaded);
  const PowerTerms terms = net_power_terms(dv2, topo2, loaded);
  // Full fog service: no WAN leg in the transmission term, no cloud pool.
  const double rate = 100.0 * loaded.arrival_rate_per_consumer;
  const double expected_tx = loaded.tx_energy_access * rate * loaded.volume_fog +
                             loaded.tx_energy_interfog * rate *
                                 (loaded.volume_fog - loaded.volume_sequential);
  CHECK(terms.tx == doctest::Approx(expected_tx).epsilon(1e-12));
  CHECK(terms.cloud_comp == 0.0);
}

TEST_CASE("net_power matches an independent straight-line recomputation") {
  ScenarioParams params = default_params();
  params.pi_f = 0.5;
  const auto topo = small_topo(params, 3, 1, 30);
  const auto dv = placement::make_fog_assignment(topo, params);
  const PowerTerms terms = net_power_terms(dv, topo, params);

  // Straight-line recomputation from raw inputs.
  const double rate = 30.0;
  double tx = params.tx_energy_access * rate * params.volume_fog;
  tx += params.pi_f * params.tx_energy_interfog * rate *
        (params.volume_fog - params.volume_sequential);
  tx += (1.0 - params.pi_f) * params.tx_energy_wan * rate * params.volume_fog;
  double fog_power = 0.0;
  for (int f = 0; f < 3; ++f) {
    double processed = 0.0;
    for (int g = 0; g < 3; ++g) processed += dv.interfog_rate[0][g][f];
    if (processed > 0.0 || dv.inflow_rate(0, f) > 0.0) {
      fog_power += params.fog_comp_energy * params.fog_weight *
                   (params.fog_power.a * processed * processed +
                    params.fog_power.b * processed + params.fog_power.c);
    }
  }
  double cloud_power = 0.0;
  for (std::size_t s = 0; s < topo.servers.size(); ++s) {
    if (dv.machines_on[s] > 0 && dv.cloud_workload[s] > 0.0) {
      cloud_power += dv.machines_on[s] *
                     (params.cloud_power.a * std::pow(dv.cpu_freq[s], params.cloud_power.delta) +
                      params.cloud_power.b);
    }
  }
  CHECK(terms.tx == doctest::Approx(tx).epsilon(1e-12));
  CHECK(terms.fog_comp == doctest::Approx(fog_power).epsilon(1e-12));
  CHECK(terms.cloud_comp == doctest::Approx(cloud_power).epsilon(1e-12));
}

TEST_CASE("total_cloud_cost zero workload is an all-zero breakdown") {
  ScenarioParams params = default_params();
  const auto topo = small_topo(params, 4, 2, 0);
  const auto dv = placement::make_cloud_assignment(topo, params);
  const CostBreakdown b = total_cloud_cost(dv, topo, params);
  CHECK(b.comm == 0.0);
  CHECK(b.comp == 0.0);
  CHECK(b.cons == 0.0);
  CHECK(b.ems == 0.0);
  CHECK(b.total == 0.0);
}

TEST_CASE("total_cloud_cost default scenario: positive components, exact additivity") {
  ScenarioParams params = default_params();
  const auto topo = topology::generate_topology(params, 42);
  const auto dv = placement::make_cloud_assignment(topo, params);
  const CostBreakdown b = total_cloud_cost(dv, topo, params);
  CHECK(b.comm > 0.0);
  CHECK(b.comp > 0.0);
  CHECK(b.cons > 0.0);
  CHECK(b.ems > 0.0);
  CHECK(b.total == b.comm + b.comp + b.cons + b.ems);
}

TEST_CASE("total_cloud_cost matches a straight-line oracle on a tiny instance") {
  ScenarioParams params = default_params();
  const auto topo = small_topo(params, 1, 1, 10);
  const auto dv = placement::make_cloud_assignment(topo, params);
  const CostBreakdown b = total_cloud_cost(dv, topo, params);

  const double rate = 10.0;
  const double t_sec = params.horizon_seconds();
  const double hours = params.horizon_hours();
  const double bus = std::floor(100.0 / 10.0);
  const double upload = params.volume_total / (bus * params.bu_rate);
  const double dispatch = params.wan_delay_factor * rate;
  const double mu = params.cloud_machine_service_rate;
  const int machines = static_cast<int>(
      std::ceil(rate / (mu * params.cloud_util_target)));
  const double cloud = queueing::mmn_response_time(machines, rate, mu);
  const double comm = params.alpha_comm * rate * t_sec * (upload + dispatch + cloud);
  CHECK(b.comm == doctest::Approx(comm).epsilon(1e-9));

  const double byte_rate = rate * params.volume_total;
  const double power = params.tx_energy_wan * byte_rate +
                       machines * (params.cloud_power.a *
                                       std::pow(params.cloud_cpu_freq_max,
                                                params.cloud_power.delta) +
                                   params.cloud_power.b);
  CHECK(b.cons == doctest::Approx(params.alpha_cons * power * t_sec).epsilon(1e-9));

  const double comp = params.vm_hosting_price_per_hour * 0.0 * hours +
                      params.router_port_price_per_year / 8760.0 * 1.0 * hours +
                      params.server_price_per_year / 8760.0 * 1.0 * hours +
                      params.upload_tariff_per_byte() * byte_rate * t_sec +
                      params.storage_price_per_hour * hours;
  CHECK(b.comp == doctest::Approx(comp).epsilon(1e-9));

  const double ems = params.emission_price * params.emission_rate * params.pue *
                     params.cloud_server_power * hours / 1000.0;
  CHECK(b.ems == doctest::Approx(ems).epsilon(1e-9));
}

TEST_CASE("total_fog_cost degenerates to the cloud baseline") {
  ScenarioParams params = default_params();
  params.pi_c = 1.0;
  const auto topo = small_topo(params, 6, 2, 120);
  auto dv = placement::make_cloud_assignment(topo, params);  // BV1 = 0 everywhere
  const CostBreakdown fog = total_fog_cost(dv, topo, params);
  const CostBreakdown cloud = total_cloud_cost(dv, topo, params);
  CHECK(fog.total == doctest::Approx(cloud.total).epsilon(1e-9));
  CHECK(fog.comm == doctest::Approx(cloud.comm).epsilon(1e-9));
  CHECK(fog.comp == doctest::Approx(cloud.comp).epsilon(1e-9));
  CHECK(fog.cons == doctest::Approx(cloud.cons).epsilon(1e-9));
  CHECK(fog.ems == doctest::Approx(cloud.ems).epsilon(1e-9));
}

TEST_CASE("total_fog_cost pure fog path and additivity") {
  ScenarioParams params = default_params();
  params.pi_c = 0.0;
  const auto topo = small_topo(params, 6, 2, 120);
  const auto dv = placement::make_fog_assignment(topo, params);
  const CostBreakdown b = total_fog_cost(dv, topo, params);
  CHECK(b.total == b.comm + b.comp + b.cons + b.ems);
  CHECK(b.total > 0.0);
  CHECK(b.latency.upload > 0.0);
  CHECK(b.latency.fog_comp > 0.0);
}

TEST_CASE("service latency monotone in BUs and arrival rate") {
  ScenarioParams params = default_params();
  const auto topo = small_topo(params, 4, 1, 40);

  // More BUs never increase the chain.
  auto dv = placement::make_fog_assignment(topo, params);
  const CostBreakdown base = total_fog_cost(dv, topo, params);
  for (double& b : dv.allocated_bus) b *= 2.0;
  const CostBreakdown wide = total_fog_cost(dv, topo, params);
  const auto chain = [&](const CostBreakdown& x) {
    return x.latency.upload + x.latency.fog_comp + params.pi_f * x.latency.interfog +
           (1.0 - params.pi_f) * (x.latency.dispatch + x.latency.cloud_comp);
  };
  CHECK(chain(wide) <= chain(base));

  // Higher arrival rate never decreases it.
  ScenarioParams heavier = params;
  heavier.arrival_rate_per_consumer = 2.0;
  const auto dv2 = placement::make_fog_assignment(topo, heavier);
  const CostBreakdown heavy = total_fog_cost(dv2, topo, heavier);
  CHECK(chain(heavy) >= chain(base));
}

TEST_CASE("CostBreakdown CSV row has the stable column order") {
  CHECK(CostBreakdown::csv_header() ==
        "scenario_id,n_consumers,fne,comm,comp,cons,ems,total,lat_upload,lat_fogcomp,"
        "lat_interfog,lat_dispatch,lat_cloudcomp,power_tx,power_fog,power_cloud");
  CostBreakdown b;
  b.comm = 1.5;
  b.comp = 0.25;
  b.finalize();
  const std::string row = b.to_csv_row("fog", 100, 0.5);
  CHECK(row.substr(0, 4) == "fog,");
  CHECK(row.find("1.75") != std::string::npos);

  // JSON round trip preserves numbers exactly.
  const auto j = nlohmann::json::parse(b.to_json_string("fog", 100, 0.5));
  CHECK(j.at("total").get<double>() == b.total);
  CHECK(j.at("comm").get<double>() == 1.5);
}

TEST_CASE("params validation catches broken configs") {
  ScenarioParams p;
  p.pi_f = 1.5;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = ScenarioParams{};
  p.cloud_power.delta = 3.5;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = ScenarioParams{};
  p.fog_power.a = 0.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = ScenarioParams{};
  p.volume_cloud = 200.0;
  p.volume_fog = 100.0;
  p.volume_total = 192.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = ScenarioParams{};
  p.alpha_comm = -1.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
}

TEST_CASE("params JSON round trip and hash stability") {
  ScenarioParams p = default_params();
  p.pi_f = 0.33;
  p.n_consumers = 77777;
  p.delay_limits = {0.5, 2.0};
  const ScenarioParams q = ScenarioParams::from_json_string(p.to_json_string());
  CHECK(q.pi_f == p.pi_f);
  CHECK(q.n_consumers == p.n_consumers);
  CHECK(q.delay_limits == p.delay_limits);
  CHECK(q.config_hash() == p.config_hash());
  CHECK(q.config_hash() != default_params().config_hash());

  CHECK_THROWS_AS(ScenarioParams::from_json_string("{\"no_such_key\": 1}"), ConfigError);
  CHECK_THROWS_AS(ScenarioParams::from_json_string("[1,2]"), ConfigError);

  // Partial configs override only what they mention.
  const ScenarioParams partial = ScenarioParams::from_json_string("{\"pi_f\": 0.25}");
  CHECK(partial.pi_f == 0.25);
  CHECK(partial.n_consumers == default_params().n_consumers);
}
