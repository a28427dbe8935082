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

#include "fogplan/costmodel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "fogplan/errors.hpp"
#include "fogplan/queueing.hpp"

namespace fogplan::costmodel {

using nlohmann::json;

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

constexpr double kHoursPerYear = 8760.0;

}  // namespace

// ---------------------------------------------------------------------------
// ScenarioParams

// Field lists shared by the JSON reader and writer.
#define FOGPLAN_PARAM_DOUBLES(X)                                                               \
  X(pi_c) X(pi_f) X(pi_cs) X(horizon_slots) X(slot_seconds) X(volume_total) X(volume_cloud)    \
  X(volume_fog) X(volume_sequential) X(arrival_rate_per_consumer) X(traffic_per_capita)        \
  X(bu_rate) X(consumer_link_bps) X(interfog_link_bps) X(interfog_payload) X(interfog_hops)    \
  X(interfog_fraction) X(wan_delay_factor) X(reach_radius_km) X(fog_service_rate)              \
  X(fog_storage_cap) X(fog_proc_cap) X(fog_energy_rate) X(fog_weight) X(fog_comp_energy)       \
  X(cloud_machine_service_rate) X(cloud_util_target) X(cloud_cpu_freq_min)                     \
  X(cloud_cpu_freq_max) X(cloud_server_power) X(cycles_per_request) X(tx_energy_access)        \
  X(tx_energy_interfog) X(tx_energy_wan) X(alpha_comm) X(alpha_cons) X(emission_price)         \
  X(emission_rate) X(pue) X(upload_tariff) X(storage_price_per_hour)                           \
  X(router_port_price_per_year) X(server_price_per_year) X(vm_hosting_price_per_hour)          \
  X(scale_factor) X(app_storage_demand) X(big_m) X(qos_margin)

#define FOGPLAN_PARAM_INTS(X)                                                            \
  X(schema_version) X(n_fog) X(n_servers) X(bu_per_fog) X(fog_processing_elements)       \
  X(fog_physical_servers) X(fog_vm_cap_per_server) X(cloud_machine_count_max)            \
  X(reach_neighbors)

#define FOGPLAN_PARAM_BOOLS(X) X(derive_service_rate_from_cycles) X(upload_tariff_literal_per_byte)

void ScenarioParams::validate() const {
  auto probability = [](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw ConfigError(std::string("params: ") + name + " must lie in [0,1]");
    }
  };
  probability(pi_c, "pi_c");
  probability(pi_f, "pi_f");
  probability(pi_cs, "pi_cs");
  probability(interfog_fraction, "interfog_fraction");
  probability(cloud_util_target, "cloud_util_target");

  if (volume_cloud + volume_fog > volume_total * (1.0 + 1e-12)) {
    throw ConfigError("params: volume_cloud + volume_fog exceeds volume_total");
  }
  if (volume_total < 0.0 || volume_cloud < 0.0 || volume_fog < 0.0 || volume_sequential < 0.0) {
    throw ConfigError("params: volumes must be non-negative");
  }
  if (!(cloud_power.delta >= 2.5 && cloud_power.delta <= 3.0)) {
    throw ConfigError("params: cloud power exponent must lie in [2.5, 3]");
  }
  if (!(fog_power.a > 0.0)) {
    throw ConfigError("params: fog power curve needs a > 0 (strict convexity)");
  }
  const double prices[] = {alpha_comm,
                           alpha_cons,
                           emission_price,
                           emission_rate,
                           upload_tariff,
                           storage_price_per_hour,
                           router_port_price_per_year,
                           server_price_per_year,
                           vm_hosting_price_per_hour};
  for (const double p : prices) {
    if (p < 0.0) throw ConfigError("params: prices must be non-negative");
  }
  if (!(pue > 0.0)) throw ConfigError("params: pue must be positive");
  if (n_consumers < 0) throw ConfigError("params: n_consumers must be non-negative");
  if (n_fog < 1) throw ConfigError("params: n_fog must be at least 1");
  if (n_servers < 1) throw ConfigError("params: n_servers must be at least 1");
  if (bu_per_fog < 1) throw ConfigError("params: bu_per_fog must be at least 1");
  if (!(bu_rate > 0.0)) throw ConfigError("params: bu_rate must be positive");
  if (!(fog_service_rate > 0.0)) throw ConfigError("params: fog_service_rate must be positive");
  if (!(cloud_machine_service_rate > 0.0)) {
    throw ConfigError("params: cloud_machine_service_rate must be positive");
  }
  if (cloud_machine_count_max < 1) {
    throw ConfigError("params: cloud_machine_count_max must be at least 1");
  }
  if (!(cloud_cpu_freq_min > 0.0) || cloud_cpu_freq_max < cloud_cpu_freq_min) {
    throw ConfigError("params: bad cpu frequency range");
  }
  if (!(big_m > 0.0)) throw ConfigError("params: big_m must be positive");
  if (delay_limits.empty()) throw ConfigError("params: delay_limits must not be empty");
  for (const double d : delay_limits) {
    if (!(d > 0.0)) throw ConfigError("params: delay limits must be positive");
  }
}

std::string ScenarioParams::to_json_string() const {
  json j;
#define FOGPLAN_WRITE(field) j[#field] = field;
  FOGPLAN_PARAM_DOUBLES(FOGPLAN_WRITE)
  FOGPLAN_PARAM_INTS(FOGPLAN_WRITE)
  FOGPLAN_PARAM_BOOLS(FOGPLAN_WRITE)
#undef FOGPLAN_WRITE
  j["n_consumers"] = n_consumers;
  j["fog_power"] = json{{"a", fog_power.a}, {"b", fog_power.b}, {"c", fog_power.c}};
  j["cloud_power"] =
      json{{"a", cloud_power.a}, {"b", cloud_power.b}, {"delta", cloud_power.delta}};
  j["delay_limits"] = delay_limits;
  j["cities_csv"] = cities_csv;
  return j.dump(2);
}

ScenarioParams ScenarioParams::from_json_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");

  ScenarioParams p;
  try {
    for (const auto& [key, value] : j.items()) {
      bool known = false;
#define FOGPLAN_READ_DOUBLE(field)   \
  if (key == #field) {               \
    p.field = value.get<double>();   \
    known = true;                    \
  }
      FOGPLAN_PARAM_DOUBLES(FOGPLAN_READ_DOUBLE)
#undef FOGPLAN_READ_DOUBLE
#define FOGPLAN_READ_INT(field)      \
  if (key == #field) {               \
    p.field = value.get<int>();      \
    known = true;                    \
  }
      FOGPLAN_PARAM_INTS(FOGPLAN_READ_INT)
#undef FOGPLAN_READ_INT
#define FOGPLAN_READ_BOOL(field)     \
  if (key == #field) {               \
    p.field = value.get<bool>();     \
    known = true;                    \
  }
      FOGPLAN_PARAM_BOOLS(FOGPLAN_READ_BOOL)
#undef FOGPLAN_READ_BOOL
      if (key == "n_consumers") {
        p.n_consumers = value.get<std::int64_t>();
        known = true;
      } else if (key == "fog_power") {
        p.fog_power.a = value.at("a").get<double>();
        p.fog_power.b = value.at("b").get<double>();
        p.fog_power.c = value.at("c").get<double>();
        known = true;
      } else if (key == "cloud_power") {
        p.cloud_power.a = value.at("a").get<double>();
        p.cloud_power.b = value.at("b").get<double>();
        p.cloud_power.delta = value.at("delta").get<double>();
        known = true;
      } else if (key == "delay_limits") {
        p.delay_limits = value.get<std::vector<double>>();
        known = true;
      } else if (key == "cities_csv") {
        p.cities_csv = value.get<std::string>();
        known = true;
      }
      if (!known) throw ConfigError("config: unknown key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field error: ") + e.what());
  }
  p.validate();
  return p;
}

ScenarioParams ScenarioParams::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_string(buf.str());
}

std::string ScenarioParams::config_hash() const {
  const std::string text = to_json_string();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ScenarioParams default_params() { return ScenarioParams{}; }

ScenarioParams pilot_params() {
  ScenarioParams p;
  p.n_consumers = 80;
  p.n_fog = 50;
  p.n_servers = 2;
  p.bu_per_fog = 5;
  p.bu_rate = 2.5e7;  // 1 Gbps split across 5 BUs
  p.fog_service_rate = 12.0;  // RSU-class processing
  p.fog_proc_cap = 12.0;
  p.cloud_machine_count_max = 64;
  p.volume_fog = 192.0;
  p.volume_total = 192.0;
  return p;
}

// ---------------------------------------------------------------------------
// Elementary formulas

double upload_latency(double volume_bytes, double allocated_bus, double bu_rate) {
  if (!(allocated_bus > 0.0)) {
    throw UnservedConsumerError("upload_latency: consumer holds no bandwidth units");
  }
  if (volume_bytes < 0.0 || !(bu_rate > 0.0)) {
    throw std::invalid_argument("upload_latency: bad volume or BU rate");
  }
  return volume_bytes / (allocated_bus * bu_rate);
}

double interfog_latency(double payload_bytes, double link_rate) {
  if (payload_bytes < 0.0) throw std::invalid_argument("interfog_latency: negative payload");
  if (!(link_rate > 0.0)) throw std::invalid_argument("interfog_latency: zero link rate");
  return payload_bytes / link_rate;
}

double dispatch_latency(double wan_factor, double dispatch_rate) {
  if (wan_factor < 0.0 || dispatch_rate < 0.0) {
    throw std::invalid_argument("dispatch_latency: negative argument");
  }
  return wan_factor * dispatch_rate;
}

double fog_comm_cost(const LatencyTerms& lat, double pi_f, double pi_cs, double alpha_comm) {
  if (!(pi_f >= 0.0 && pi_f <= 1.0) || !(pi_cs >= 0.0 && pi_cs <= 1.0)) {
    throw std::invalid_argument("fog_comm_cost: probabilities must lie in [0,1]");
  }
  return alpha_comm * (lat.upload + lat.fog_comp + pi_f * lat.interfog +
                       (1.0 - pi_f) * lat.dispatch +
                       (1.0 - pi_f) * (1.0 - pi_cs) * lat.cloud_comp);
}

double traffic_cost(const std::vector<std::vector<std::uint8_t>>& vm_placement,
                    const std::vector<std::vector<double>>& inter_vm_traffic,
                    const std::vector<std::vector<double>>& unit_price) {
  const std::size_t n_vm = vm_placement.size();
  std::vector<int> host(n_vm, -1);
  for (std::size_t i = 0; i < n_vm; ++i) {
    for (std::size_t f = 0; f < vm_placement[i].size(); ++f) {
      if (!vm_placement[i][f]) continue;
      if (host[i] >= 0) {
        throw std::invalid_argument("traffic_cost: placement row is not one-hot");
      }
      host[i] = static_cast<int>(f);
    }
  }
  double cost = 0.0;
  for (std::size_t i = 0; i < n_vm; ++i) {
    if (host[i] < 0) continue;
    for (std::size_t jv = 0; jv < n_vm; ++jv) {
      if (host[jv] < 0) continue;
      const double theta = inter_vm_traffic[i][jv];
      if (theta == 0.0) continue;
      cost += theta * unit_price[host[i]][host[jv]];
    }
  }
  return cost;
}

double fog_comp_power(std::span<const double> loads, const FogPowerCoeffs& coeffs, double weight,
                      double energy, bool associated) {
  if (!(coeffs.a > 0.0)) {
    throw ConfigError("fog_comp_power: quadratic coefficient must be positive");
  }
  if (!associated) return 0.0;
  double sum = 0.0;
  for (const double y : loads) {
    if (y < 0.0) throw std::invalid_argument("fog_comp_power: negative load");
    sum += coeffs.a * y * y + coeffs.b * y + coeffs.c;
  }
  return energy * weight * sum;
}

double cloud_comp_power(bool server_on, int machines, double freq, const CloudPowerCoeffs& coeffs,
                        bool associated) {
  if (machines < 0 || !(freq > 0.0)) {
    throw std::invalid_argument("cloud_comp_power: bad machine count or frequency");
  }
  if (associated || !server_on) return 0.0;
  return static_cast<double>(machines) * (coeffs.a * std::pow(freq, coeffs.delta) + coeffs.b);
}

double emission_cost(double pi_f, const ScenarioParams& params) {
  if (!(pi_f >= 0.0 && pi_f <= 1.0)) {
    throw std::invalid_argument("emission_cost: pi_f must lie in [0,1]");
  }
  // watts -> kWh over the horizon, then grams, then USD.
  const double kwh = params.pue * params.cloud_server_power * params.horizon_hours() / 1000.0;
  return (1.0 - pi_f) * params.emission_price * params.emission_rate * kwh;
}

double fne(double packets_to_cloud, double packets_into_fog) {
  if (!(packets_into_fog > 0.0)) {
    throw std::invalid_argument("fne: no packets entered the fog network");
  }
  if (packets_to_cloud < 0.0 || packets_to_cloud > packets_into_fog) {
    throw std::invalid_argument("fne: packets_to_cloud must lie in [0, packets_into_fog]");
  }
  return (packets_into_fog - packets_to_cloud) / packets_into_fog;
}

double cloud_machine_rate(const ScenarioParams& params, double freq) {
  if (params.derive_service_rate_from_cycles) {
    return freq * 1e9 / params.cycles_per_request;
  }
  return params.cloud_machine_service_rate * freq / params.cloud_cpu_freq_max;
}

int machines_needed(double arrival_rate, double machine_rate, double util_target,
                    int machine_max) {
  if (!(arrival_rate > 0.0)) return 0;
  const double target = machine_rate * std::clamp(util_target, 1e-6, 1.0);
  const int n = static_cast<int>(std::ceil(arrival_rate / target));
  return std::clamp(n, 1, machine_max);
}

// ---------------------------------------------------------------------------
// Assignment-level evaluation

std::string CostBreakdown::csv_header() {
  return "scenario_id,n_consumers,fne,comm,comp,cons,ems,total,lat_upload,lat_fogcomp,"
         "lat_interfog,lat_dispatch,lat_cloudcomp,power_tx,power_fog,power_cloud";
}

std::string CostBreakdown::to_csv_row(const std::string& scenario_id, std::int64_t n_consumers,
                                      double fne_value) const {
  std::ostringstream row;
  row << scenario_id << ',' << n_consumers << ',' << fmt17(fne_value) << ',' << fmt17(comm) << ','
      << fmt17(comp) << ',' << fmt17(cons) << ',' << fmt17(ems) << ',' << fmt17(total) << ','
      << fmt17(latency.upload) << ',' << fmt17(latency.fog_comp) << ',' << fmt17(latency.interfog)
      << ',' << fmt17(latency.dispatch) << ',' << fmt17(latency.cloud_comp) << ','
      << fmt17(power.tx) << ',' << fmt17(power.fog_comp) << ',' << fmt17(power.cloud_comp);
  return row.str();
}

std::string CostBreakdown::to_json_string(const std::string& scenario_id,
                                          std::int64_t n_consumers, double fne_value) const {
  json j;
  j["scenario_id"] = scenario_id;
  j["n_consumers"] = n_consumers;
  j["fne"] = fne_value;
  j["comm"] = comm;
  j["comp"] = comp;
  j["cons"] = cons;
  j["ems"] = ems;
  j["total"] = total;
  j["latency"] = json{{"upload", latency.upload},
                      {"fog_comp", latency.fog_comp},
                      {"interfog", latency.interfog},
                      {"dispatch", latency.dispatch},
                      {"cloud_comp", latency.cloud_comp}};
  j["power"] = json{
      {"tx", power.tx}, {"fog_comp", power.fog_comp}, {"cloud_comp", power.cloud_comp}};
  return j.dump(2);
}

namespace {

using feasibility::DecisionVector;
using topology::Topology;

int gateway_fog(const DecisionVector& dv, const Topology& topo, std::size_t consumer) {
  if (consumer < dv.assoc.size() && !dv.assoc[consumer].empty()) return dv.assoc[consumer][0];
  return topo.consumer_city(static_cast<std::int64_t>(consumer));
}

double consumer_rate(const DecisionVector& dv, const ScenarioParams& params,
                     std::size_t consumer) {
  // Builders bake arrival_rate_per_consumer * traffic_per_capita into the
  // decision vector, so the checks and the cost model read the same numbers.
  (void)params;
  return consumer < dv.workload_rate.size() ? dv.workload_rate[consumer] : 0.0;
}

// Mean M/M/n response at the dv-provisioned machine pool of a server.
double server_response(const DecisionVector& dv, const ScenarioParams& params, int server,
                       double arrival) {
  const int machines = server < static_cast<int>(dv.machines_on.size()) ? dv.machines_on[server] : 0;
  if (arrival <= 0.0) {
    // No load: pure service time at one machine if provisioned, else zero.
    if (machines <= 0) return 0.0;
    const double mu = cloud_machine_rate(params, dv.cpu_freq[server]);
    return 1.0 / mu;
  }
  if (machines <= 0) {
    throw queueing::UnstableQueueError("cloud server receives traffic with no machines on");
  }
  const double mu = cloud_machine_rate(params, dv.cpu_freq[server]);
  return queueing::mmn_response_time(machines, arrival, mu);
}

struct FogSideState {
  std::vector<double> inflow;        // per fog, fog-path consumers only
  std::vector<double> processed;     // per fog, from the inter-fog flow matrix
  std::vector<double> proc_latency;  // expected processing latency of flow entering fog f
  std::vector<double> server_spill;  // per server, compute-needing dispatch
};

FogSideState fog_side_state(const DecisionVector& dv, const Topology& topo,
                            const ScenarioParams& params) {
  const std::size_t n_fog = topo.fog_nodes.size();
  FogSideState st;
  st.inflow.assign(n_fog, 0.0);
  st.processed.assign(n_fog, 0.0);
  st.proc_latency.assign(n_fog, 0.0);
  st.server_spill.assign(topo.servers.size(), 0.0);

  for (std::size_t i = 0; i < dv.n_consumers(); ++i) {
    if (!dv.offload_fog[i]) continue;
    if (dv.assoc[i].empty()) {
      throw UnservedConsumerError("fog-path consumer with no association");
    }
    st.inflow[dv.assoc[i][0]] += consumer_rate(dv, params, i);
  }
  for (const auto& per_app : dv.interfog_rate) {
    for (std::size_t f = 0; f < per_app.size(); ++f) {
      for (std::size_t g = 0; g < per_app[f].size(); ++g) {
        st.processed[g] += per_app[f][g];
      }
    }
  }
  // Expected M/M/1 latency seen by flow entering fog f, following the
  // inter-fog routing split.
  std::vector<double> mm1_at(n_fog, 0.0);
  for (std::size_t f = 0; f < n_fog; ++f) {
    mm1_at[f] = st.processed[f] > 0.0
                    ? queueing::mm1_latency(topo.fog_nodes[f].service_rate, st.processed[f])
                    : 1.0 / topo.fog_nodes[f].service_rate;
  }
  for (std::size_t f = 0; f < n_fog; ++f) {
    double row_sum = 0.0;
    double acc = 0.0;
    for (const auto& per_app : dv.interfog_rate) {
      if (f >= per_app.size()) continue;
      for (std::size_t g = 0; g < per_app[f].size(); ++g) {
        row_sum += per_app[f][g];
        acc += per_app[f][g] * mm1_at[g];
      }
    }
    st.proc_latency[f] = row_sum > 0.0 ? acc / row_sum : mm1_at[f];
  }
  for (std::size_t f = 0; f < n_fog; ++f) {
    const double spill = (1.0 - params.pi_f) * (1.0 - params.pi_cs) * st.inflow[f];
    if (spill > 0.0) st.server_spill[topo.nearest_server[f]] += spill;
  }
  return st;
}

// Amortized equipment charges common to both paths.
double equipment_cost(const ScenarioParams& params, int used_ports, int servers_on, int n_vms,
                      double cloud_bytes) {
  const double hours = params.horizon_hours();
  double cost = 0.0;
  cost += params.vm_hosting_price_per_hour * n_vms * hours;
  cost += params.router_port_price_per_year / kHoursPerYear * used_ports * hours;
  cost += params.server_price_per_year / kHoursPerYear * servers_on * hours;
  cost += params.upload_tariff_per_byte() * cloud_bytes;
  if (cloud_bytes > 0.0) cost += params.storage_price_per_hour * hours;
  return cost;
}

// Cost of running the given consumer subset purely against the cloud.
CostBreakdown cloud_subset_cost(const DecisionVector& dv, const Topology& topo,
                                const ScenarioParams& params,
                                const std::vector<std::size_t>& consumers,
                                const std::vector<double>& extra_server_load) {
  CostBreakdown out;
  const std::size_t n_fog = topo.fog_nodes.size();
  std::vector<double> gateway_load(n_fog, 0.0);
  for (const std::size_t i : consumers) {
    gateway_load[gateway_fog(dv, topo, i)] += consumer_rate(dv, params, i);
  }
  std::vector<double> server_load(topo.servers.size(), 0.0);
  for (std::size_t f = 0; f < n_fog; ++f) {
    server_load[topo.nearest_server[f]] += gateway_load[f];
  }
  for (std::size_t s = 0; s < server_load.size(); ++s) {
    server_load[s] += extra_server_load[s];
  }

  const double t_sec = params.horizon_seconds();
  double total_rate = 0.0;
  double weighted_upload = 0.0, weighted_dispatch = 0.0, weighted_cloud = 0.0;
  for (const std::size_t i : consumers) {
    const double rate = consumer_rate(dv, params, i);
    const int g = gateway_fog(dv, topo, i);
    const double up =
        upload_latency(params.volume_total, dv.allocated_bus[i], topo.fog_nodes[g].per_bu_rate);
    const double disp = dispatch_latency(params.wan_delay_factor, gateway_load[g]);
    const double cloud =
        server_response(dv, params, topo.nearest_server[g], server_load[topo.nearest_server[g]]);
    total_rate += rate;
    weighted_upload += rate * up;
    weighted_dispatch += rate * disp;
    weighted_cloud += rate * cloud;
    out.comm += params.alpha_comm * rate * t_sec * (up + disp + cloud);
  }
  if (total_rate > 0.0) {
    out.latency.upload = weighted_upload / total_rate;
    out.latency.dispatch = weighted_dispatch / total_rate;
    out.latency.cloud_comp = weighted_cloud / total_rate;
  }

  // Power: WAN transmission of the full volume plus the machine pools that
  // carry this subset (the pool is shared; charge the subset's share).
  const double byte_rate = total_rate * params.volume_total;
  out.power.tx = params.tx_energy_wan * byte_rate;
  int servers_on = 0;
  double cloud_power_total = 0.0;
  for (std::size_t s = 0; s < topo.servers.size(); ++s) {
    const double direct = server_load[s] - extra_server_load[s];
    if (dv.machines_on.size() <= s || dv.machines_on[s] <= 0) continue;
    ++servers_on;
    const double pool = cloud_comp_power(dv.cloud_on.empty() ? true : dv.cloud_on[s] != 0,
                                         dv.machines_on[s], dv.cpu_freq[s], params.cloud_power,
                                         /*associated=*/false);
    const double share = server_load[s] > 0.0 ? direct / server_load[s] : 0.0;
    cloud_power_total += pool * share;
  }
  out.power.cloud_comp = cloud_power_total;
  out.cons = params.alpha_cons * out.power.total() * t_sec;

  int used_ports = 0;
  for (std::size_t f = 0; f < n_fog; ++f) {
    if (gateway_load[f] > 0.0) ++used_ports;
  }
  out.comp = equipment_cost(params, used_ports, total_rate > 0.0 ? servers_on : 0, 0,
                            byte_rate * t_sec);
  out.ems = total_rate > 0.0 ? emission_cost(0.0, params) : 0.0;
  out.finalize();
  return out;
}

CostBreakdown fog_subset_cost(const DecisionVector& dv, const Topology& topo,
                              const ScenarioParams& params,
                              const std::vector<std::size_t>& consumers,
                              const FogSideState& st,
                              const std::vector<double>& extra_server_load) {
  CostBreakdown out;
  const double t_sec = params.horizon_seconds();
  const std::size_t n_fog = topo.fog_nodes.size();

  // Cloud queueing sees the combined arrival stream (spill plus any direct
  // traffic); this path is charged only its share of the machine pools.
  std::vector<double> server_load = st.server_spill;
  for (std::size_t s = 0; s < server_load.size(); ++s) {
    server_load[s] += extra_server_load[s];
  }

  const double hop_latency =
      params.interfog_hops *
      interfog_latency(params.interfog_payload, topo.interfog_link_bps / 8.0);

  double total_rate = 0.0;
  LatencyTerms mean{};
  for (const std::size_t i : consumers) {
    const double rate = consumer_rate(dv, params, i);
    const int f = dv.assoc[i][0];
    LatencyTerms lt;
    lt.upload =
        upload_latency(params.volume_fog, dv.allocated_bus[i], topo.fog_nodes[f].per_bu_rate);
    lt.fog_comp = st.proc_latency[f];
    lt.interfog = hop_latency;
    lt.dispatch = dispatch_latency(params.wan_delay_factor,
                                   f < static_cast<int>(dv.dispatch_rate.size())
                                       ? dv.dispatch_rate[f]
                                       : 0.0);
    lt.cloud_comp =
        server_response(dv, params, topo.nearest_server[f], server_load[topo.nearest_server[f]]);
    out.comm += rate * t_sec * fog_comm_cost(lt, params.pi_f, params.pi_cs, params.alpha_comm);
    total_rate += rate;
    mean.upload += rate * lt.upload;
    mean.fog_comp += rate * lt.fog_comp;
    mean.interfog += rate * lt.interfog;
    mean.dispatch += rate * lt.dispatch;
    mean.cloud_comp += rate * lt.cloud_comp;
  }
  if (total_rate > 0.0) {
    out.latency.upload = mean.upload / total_rate;
    out.latency.fog_comp = mean.fog_comp / total_rate;
    out.latency.interfog = mean.interfog / total_rate;
    out.latency.dispatch = mean.dispatch / total_rate;
    out.latency.cloud_comp = mean.cloud_comp / total_rate;
  }

  // Power (the square-bracket transmission term of the net-power identity,
  // plus both computation profiles).
  const double spill_total =
      std::accumulate(st.server_spill.begin(), st.server_spill.end(), 0.0);
  out.power.tx = params.tx_energy_access * total_rate * params.volume_fog +
                 params.pi_f * params.tx_energy_interfog * total_rate *
                     (params.volume_fog - params.volume_sequential) +
                 (1.0 - params.pi_f) * params.tx_energy_wan * total_rate * params.volume_fog;
  for (std::size_t f = 0; f < n_fog; ++f) {
    const bool associated = st.inflow[f] > 0.0 || st.processed[f] > 0.0;
    const double load[1] = {st.processed[f]};
    out.power.fog_comp += fog_comp_power(load, params.fog_power, params.fog_weight,
                                         params.fog_comp_energy, associated);
  }
  int servers_on = 0;
  for (std::size_t s = 0; s < topo.servers.size(); ++s) {
    if (dv.machines_on.size() <= s || dv.machines_on[s] <= 0) continue;
    if (st.server_spill[s] <= 0.0) continue;
    ++servers_on;
    const double pool =
        cloud_comp_power(dv.cloud_on.empty() ? true : dv.cloud_on[s] != 0, dv.machines_on[s],
                         dv.cpu_freq[s], params.cloud_power, /*associated=*/false);
    out.power.cloud_comp += pool * (st.server_spill[s] / server_load[s]);
  }
  out.cons = params.alpha_cons * out.power.total() * t_sec;

  int used_ports = 0;
  int n_vms = 0;
  for (std::size_t f = 0; f < n_fog; ++f) {
    if (st.inflow[f] > 0.0) ++used_ports;
  }
  for (const auto& row : dv.vm_placement) {
    for (const std::uint8_t v : row) n_vms += v ? 1 : 0;
  }
  const double cloud_bytes = spill_total > 0.0
                                 ? (1.0 - params.pi_f) * total_rate * params.volume_fog * t_sec
                                 : 0.0;
  out.comp = equipment_cost(params, used_ports, servers_on, n_vms, cloud_bytes);
  out.ems = spill_total > 0.0 ? emission_cost(params.pi_f, params) : 0.0;
  out.finalize();
  return out;
}

}  // namespace

PowerTerms net_power_terms(const DecisionVector& dv, const Topology& topo,
                           const ScenarioParams& params) {
  const FogSideState st = fog_side_state(dv, topo, params);
  std::vector<std::size_t> fog_consumers;
  for (std::size_t i = 0; i < dv.n_consumers(); ++i) {
    if (dv.offload_fog[i]) fog_consumers.push_back(i);
  }
  const std::vector<double> no_extra(topo.servers.size(), 0.0);
  const CostBreakdown b = fog_subset_cost(dv, topo, params, fog_consumers, st, no_extra);
  return b.power;
}

double net_power(const DecisionVector& dv, const Topology& topo, const ScenarioParams& params) {
  return net_power_terms(dv, topo, params).total();
}

CostBreakdown total_cloud_cost(const DecisionVector& dv, const Topology& topo,
                               const ScenarioParams& params) {
  std::vector<std::size_t> all(dv.n_consumers());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  const std::vector<double> no_extra(topo.servers.size(), 0.0);
  return cloud_subset_cost(dv, topo, params, all, no_extra);
}

CostBreakdown total_fog_cost(const DecisionVector& dv, const Topology& topo,
                             const ScenarioParams& params) {
  std::vector<std::size_t> fog_set, cloud_set;
  for (std::size_t i = 0; i < dv.n_consumers(); ++i) {
    (dv.offload_fog[i] ? fog_set : cloud_set).push_back(i);
  }
  const FogSideState st = fog_side_state(dv, topo, params);
  std::vector<double> direct_load(topo.servers.size(), 0.0);
  for (const std::size_t i : cloud_set) {
    direct_load[topo.nearest_server[gateway_fog(dv, topo, i)]] += consumer_rate(dv, params, i);
  }
  const CostBreakdown fog_part = fog_subset_cost(dv, topo, params, fog_set, st, direct_load);
  const CostBreakdown cloud_part = cloud_subset_cost(dv, topo, params, cloud_set, st.server_spill);

  CostBreakdown out;
  const double wf = 1.0 - params.pi_c;
  const double wc = params.pi_c;
  out.comm = wf * fog_part.comm + wc * cloud_part.comm;
  out.comp = wf * fog_part.comp + wc * cloud_part.comp;
  out.cons = wf * fog_part.cons + wc * cloud_part.cons;
  out.ems = wf * fog_part.ems + wc * cloud_part.ems;
  out.latency = fog_set.empty() ? cloud_part.latency : fog_part.latency;
  out.power.tx = wf * fog_part.power.tx + wc * cloud_part.power.tx;
  out.power.fog_comp = wf * fog_part.power.fog_comp + wc * cloud_part.power.fog_comp;
  out.power.cloud_comp = wf * fog_part.power.cloud_comp + wc * cloud_part.power.cloud_comp;
  out.finalize();
  return out;
}

}  // namespace fogplan::costmodel
