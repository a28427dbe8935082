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

#ifndef FOGPLAN_PARAMS_HPP
#define FOGPLAN_PARAMS_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace fogplan::costmodel {

// Coefficients of the quadratic fog power curve a*y^2 + b*y + c. a must stay
// positive: that is what makes the curve strictly convex.
struct FogPowerCoeffs {
  double a = 1e-5;
  double b = 1e-3;
  double c = 3.7;
};

// Cloud machine power A*eta^Delta + B. Delta is constrained to [2.5, 3].
struct CloudPowerCoeffs {
  double a = 1030.0;
  double b = 200.0;
  double delta = 3.0;
};

// Every rate, probability, price, power coefficient and conversion factor the
// simulator consumes, in SI-ish units: seconds, bytes, watts, joules, grams,
// USD. Defaults reproduce the evaluation setup; any subset can be overridden
// from a JSON config file.
struct ScenarioParams {
  int schema_version = 1;

  // Offloading probabilities.
  double pi_c = 0.0;   // packet bypasses the fog tier and goes straight to cloud
  double pi_f = 0.5;   // packet entering the fog tier is served there (the FNE)
  double pi_cs = 0.0;  // dispatched packet needs cloud storage only, no compute

  // Horizon and slotting.
  double horizon_slots = 3600.0;
  double slot_seconds = 1.0;

  // Per-request volumes in bytes (volume_cloud + volume_fog <= volume_total).
  double volume_total = 192.0;       // Omega
  double volume_cloud = 0.0;         // Omega_1, direct-to-cloud share
  double volume_fog = 192.0;         // Omega_2, uploaded to the fog tier
  double volume_sequential = 48.0;   // Omega_3, results of fog analytics

  // Demand.
  double arrival_rate_per_consumer = 1.0;  // requests/s per consumer
  double traffic_per_capita = 1.0;         // scales demand; paper gives no constant
  std::int64_t n_consumers = 10000;
  int n_fog = 100;
  int n_servers = 8;

  // Consumer to fog access.
  int bu_per_fog = 100;
  double bu_rate = 1.25e6;          // delta, bytes/s contributed by one BU
  double consumer_link_bps = 1e9;   // 1 Gbps consumer-fog links
  double interfog_link_bps = 1e10;  // 10 Gbps fog-fog links
  double interfog_payload = 512.0;  // l_c, bytes needing multi-fog hops
  double interfog_hops = 1.0;
  double interfog_fraction = 0.05;  // share of fog traffic routed to a peer fog
  double wan_delay_factor = 5e-6;   // chi, seconds per unit dispatch rate
  double reach_radius_km = -1.0;    // negative: use the k-nearest-fog rule
  int reach_neighbors = 5;

  // Fog nodes (homogeneous).
  double fog_service_rate = 10000.0;  // r^s, requests/s
  int fog_processing_elements = 4;
  int fog_physical_servers = 4;
  int fog_vm_cap_per_server = 8;
  double fog_storage_cap = 1e9;    // Q_f^s bytes
  double fog_proc_cap = 10000.0;   // Q_f^p requests/s
  double fog_energy_rate = 3.7;    // watts
  FogPowerCoeffs fog_power;
  double fog_weight = 1.0;       // psi_f
  double fog_comp_energy = 1.0;  // p_f^comp multiplier

  // Cloud servers (homogeneous machines).
  double cloud_machine_service_rate = 125.0;  // requests/s per machine at max freq
  int cloud_machine_count_max = 512;
  double cloud_util_target = 0.7;
  double cloud_cpu_freq_min = 1.0;
  double cloud_cpu_freq_max = 3.0;
  CloudPowerCoeffs cloud_power;
  double cloud_server_power = 9.7e6;  // beta_c, watts
  bool derive_service_rate_from_cycles = false;
  double cycles_per_request = 2.4e7;  // K, used only behind the flag above

  // Transmission energies, joules per byte.
  double tx_energy_access = 2e-7;    // p_{a-f}
  double tx_energy_interfog = 1e-7;  // p_{f-f'}
  double tx_energy_wan = 5e-7;       // p_{f-c}

  // Prices and conversion factors.
  double alpha_comm = 0.01;          // USD per accumulated latency-second
  double alpha_cons = 1.389e-8;      // USD per joule (USD 50 / MWh)
  double emission_price = 1e-3;      // zeta, USD per gram (USD 1000 / ton)
  double emission_rate = 500.0;      // R, grams per kWh
  double pue = 1.2;
  double upload_tariff = 12.0;       // USD per GB unless the literal flag is set
  bool upload_tariff_literal_per_byte = false;
  double storage_price_per_hour = 0.5;
  double router_port_price_per_year = 50.0;
  double server_price_per_year = 4000.0;
  double vm_hosting_price_per_hour = 0.01;

  // QoS.
  std::vector<double> delay_limits = {1.0};  // L^a seconds, per application
  double scale_factor = 1.0;                 // epsilon^a
  double app_storage_demand = 1e6;           // Q_a^s bytes
  double big_m = 1e9;                        // the linearization constant
  double qos_margin = 1e-6;                  // slack standing in for strict inequality

  // City dataset; empty means the bundled snapshot.
  std::string cities_csv;

  double horizon_hours() const { return horizon_slots * slot_seconds / 3600.0; }
  double horizon_seconds() const { return horizon_slots * slot_seconds; }
  double upload_tariff_per_byte() const {
    return upload_tariff_literal_per_byte ? upload_tariff : upload_tariff / 1e9;
  }
  double delay_limit_for(int app) const {
    if (delay_limits.empty()) return 1.0;
    const std::size_t i = static_cast<std::size_t>(app);
    return i < delay_limits.size() ? delay_limits[i] : delay_limits.back();
  }

  // Throws ConfigError when a probability leaves [0,1], a convexity or range
  // requirement is broken, or a price is negative.
  void validate() const;

  std::string to_json_string() const;
  static ScenarioParams from_json_string(const std::string& text);
  static ScenarioParams from_json_file(const std::string& path);

  // FNV-1a hash of the canonical JSON form, as 16 hex digits.
  std::string config_hash() const;
};

// Defaults for the full 100-city evaluation topology.
ScenarioParams default_params();

// The small pilot network used by the optimizer sweeps: 80 consumers,
// 50 fog nodes with 5 BUs each, slow RSU-class service rates.
ScenarioParams pilot_params();

}  // namespace fogplan::costmodel

#endif  // FOGPLAN_PARAMS_HPP
