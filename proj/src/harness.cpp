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

#include "fogplan/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "fogplan/costmodel.hpp"
#include "fogplan/errors.hpp"
#include "fogplan/mde.hpp"
#include "fogplan/parallel.hpp"
#include "fogplan/placement.hpp"
#include "fogplan/queueing.hpp"

namespace fogplan::harness {

using costmodel::ScenarioParams;
using topology::Topology;

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (const char c : field) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

// --- The FNE-parameterized analytic path model --------------------------------
//
// Per-packet expectations across the population. A share fne of the traffic
// entering the fog tier is served there; the remainder is dispatched onward.
// At fne = 0 the fog tier degenerates into a pass-through and both paths
// coincide exactly; at fne = 1 no cloud term survives.

struct PathMetrics {
  double transmission = 0.0;
  double processing = 0.0;
  bool stable = true;
  double service() const { return transmission + processing; }
};

struct EnergyMetrics {
  double tx = 0.0;
  double fog = 0.0;
  double cloud = 0.0;
  double total() const { return tx + fog + cloud; }
};

double bu_share_of(const topology::FogNode& fog, std::int64_t k) {
  if (k <= 0) return 0.0;
  const int slots = fog.bandwidth_units;
  if (k <= slots) return static_cast<double>(std::max<std::int64_t>(1, slots / k));
  return static_cast<double>(slots) / static_cast<double>(k);
}

struct SweepPoint {
  PathMetrics fog;
  PathMetrics cloud;
  EnergyMetrics fog_energy;
  EnergyMetrics cloud_energy;
};

SweepPoint evaluate_point(const Topology& topo, const ScenarioParams& params,
                          const std::vector<std::int64_t>& consumers_per_city, double fne) {
  SweepPoint pt;
  const std::size_t n_fog = topo.fog_nodes.size();
  const double rate = params.arrival_rate_per_consumer * params.traffic_per_capita;
  const double hop_latency =
      params.interfog_hops *
      costmodel::interfog_latency(params.interfog_payload, topo.interfog_link_bps / 8.0);

  std::int64_t total_consumers = 0;
  std::vector<double> inflow(n_fog, 0.0);
  for (std::size_t f = 0; f < n_fog; ++f) {
    total_consumers += consumers_per_city[f];
    inflow[f] = static_cast<double>(consumers_per_city[f]) * rate;
  }
  if (total_consumers == 0) return pt;
  const double nd = static_cast<double>(total_consumers);

  // Cloud pools, sized by the same policy for both paradigms.
  std::vector<double> full_load(topo.servers.size(), 0.0);
  std::vector<double> spill_load(topo.servers.size(), 0.0);
  for (std::size_t f = 0; f < n_fog; ++f) {
    full_load[topo.nearest_server[f]] += inflow[f];
    spill_load[topo.nearest_server[f]] += (1.0 - fne) * (1.0 - params.pi_cs) * inflow[f];
  }
  auto pool_response = [&](const std::vector<double>& load, std::size_t s) {
    const double mu = costmodel::cloud_machine_rate(params, topo.servers[s].cpu_freq_max);
    const int machines = costmodel::machines_needed(load[s], mu, params.cloud_util_target,
                                                    topo.servers[s].machine_count_max);
    if (machines == 0) return 0.0;
    return queueing::mmn_response_time(machines, load[s], mu);
  };
  std::vector<double> full_response(topo.servers.size(), 0.0);
  std::vector<double> spill_response(topo.servers.size(), 0.0);
  try {
    for (std::size_t s = 0; s < topo.servers.size(); ++s) {
      full_response[s] = pool_response(full_load, s);
      spill_response[s] = pool_response(spill_load, s);
    }
  } catch (const queueing::UnstableQueueError&) {
    pt.fog.stable = pt.cloud.stable = false;
    return pt;
  }

  for (std::size_t f = 0; f < n_fog; ++f) {
    const std::int64_t k = consumers_per_city[f];
    if (k == 0) continue;
    const double weight = static_cast<double>(k) / nd;
    const double upload = costmodel::upload_latency(
        params.volume_fog, bu_share_of(topo.fog_nodes[f], k), topo.fog_nodes[f].per_bu_rate);
    const int s = topo.nearest_server[f];

    // Fog-assisted path.
    double fog_queue = 0.0;
    if (fne > 0.0) {
      const double served = fne * inflow[f];
      if (served >= topo.fog_nodes[f].service_rate) {
        pt.fog.stable = false;
      } else {
        fog_queue = queueing::mm1_latency(topo.fog_nodes[f].service_rate, served);
      }
    }
    const double dispatch =
        costmodel::dispatch_latency(params.wan_delay_factor, (1.0 - fne) * inflow[f]);
    pt.fog.transmission += weight * (upload + fne * hop_latency + (1.0 - fne) * dispatch);
    pt.fog.processing += weight * (fne * fog_queue + (1.0 - fne) * spill_response[s]);

    // Cloud-only path.
    const double cloud_dispatch =
        costmodel::dispatch_latency(params.wan_delay_factor, inflow[f]);
    pt.cloud.transmission += weight * (upload + cloud_dispatch);
    pt.cloud.processing += weight * full_response[s];
  }

  // Energy. Transmission energy follows the byte streams; computation energy
  // follows the machine pools actually provisioned.
  const double total_rate = nd * rate;
  pt.fog_energy.tx = params.tx_energy_access * total_rate * params.volume_fog +
                     fne * params.tx_energy_interfog * total_rate *
                         (params.volume_fog - params.volume_sequential) +
                     (1.0 - fne) * params.tx_energy_wan * total_rate * params.volume_fog;
  for (std::size_t f = 0; f < n_fog; ++f) {
    if (inflow[f] <= 0.0) continue;
    const double served[1] = {fne * inflow[f]};
    pt.fog_energy.fog += costmodel::fog_comp_power(served, params.fog_power, params.fog_weight,
                                                   params.fog_comp_energy, true);
  }
  pt.cloud_energy.tx = params.tx_energy_wan * total_rate * params.volume_total;
  for (std::size_t s = 0; s < topo.servers.size(); ++s) {
    const double mu = costmodel::cloud_machine_rate(params, topo.servers[s].cpu_freq_max);
    const int full_m = costmodel::machines_needed(full_load[s], mu, params.cloud_util_target,
                                                  topo.servers[s].machine_count_max);
    const int spill_m = costmodel::machines_needed(spill_load[s], mu, params.cloud_util_target,
                                                   topo.servers[s].machine_count_max);
    pt.cloud_energy.cloud += costmodel::cloud_comp_power(
        full_m > 0, full_m, topo.servers[s].cpu_freq_max, params.cloud_power, false);
    pt.fog_energy.cloud += costmodel::cloud_comp_power(
        spill_m > 0, spill_m, topo.servers[s].cpu_freq_max, params.cloud_power, false);
  }
  return pt;
}

const char* regime_label(double fne) {
  if (fne >= 1.0) return "Edge";
  if (fne <= 0.0) return "Pure cloud";
  return "Fog assisted cloud";
}

}  // namespace

// ---------------------------------------------------------------------------
// Experiments

ResultTable run_latency_compare(const ExperimentSpec& spec, const Topology& topo,
                                const ScenarioParams& params) {
  ResultTable table;
  table.columns = {"consumers",   "fne",         "fog_transmission", "fog_processing",
                   "fog_service", "cloud_transmission", "cloud_processing", "cloud_service",
                   "service_ratio", "flag"};
  table.config_hash = params.config_hash();
  table.seed = spec.seed;
  for (const std::int64_t n : spec.consumer_sweep) {
    const auto consumers = topology::apportion_consumers(topo.cities, n);
    const SweepPoint pt = evaluate_point(topo, params, consumers, spec.fne);
    const bool ok = pt.fog.stable && pt.cloud.stable;
    std::vector<Cell> row;
    row.push_back(Cell::of(static_cast<double>(n)));
    row.push_back(Cell::of(spec.fne));
    row.push_back(Cell::of(pt.fog.transmission));
    row.push_back(Cell::of(pt.fog.processing));
    row.push_back(Cell::of(pt.fog.service()));
    row.push_back(Cell::of(pt.cloud.transmission));
    row.push_back(Cell::of(pt.cloud.processing));
    row.push_back(Cell::of(pt.cloud.service()));
    row.push_back(Cell::of(pt.cloud.service() > 0.0 ? pt.fog.service() / pt.cloud.service() : 0.0));
    row.push_back(Cell::of(std::string(ok ? "ok" : "unstable")));
    table.rows.push_back(std::move(row));
  }
  return table;
}

ResultTable run_fne_sweep(const ExperimentSpec& spec, const Topology& topo,
                          const ScenarioParams& params) {
  ResultTable table;
  table.columns = {"fne",         "regime",      "consumers",        "fog_transmission",
                   "fog_processing", "fog_service", "cloud_transmission", "cloud_processing",
                   "cloud_service", "service_ratio", "flag"};
  table.config_hash = params.config_hash();
  table.seed = spec.seed;
  const auto consumers = topology::apportion_consumers(topo.cities, spec.fne_consumers);
  for (const double fne : spec.fne_levels) {
    const SweepPoint pt = evaluate_point(topo, params, consumers, fne);
    const bool ok = pt.fog.stable && pt.cloud.stable;
    std::vector<Cell> row;
    row.push_back(Cell::of(fne));
    row.push_back(Cell::of(std::string(regime_label(fne))));
    row.push_back(Cell::of(static_cast<double>(spec.fne_consumers)));
    row.push_back(Cell::of(pt.fog.transmission));
    row.push_back(Cell::of(pt.fog.processing));
    row.push_back(Cell::of(pt.fog.service()));
    row.push_back(Cell::of(pt.cloud.transmission));
    row.push_back(Cell::of(pt.cloud.processing));
    row.push_back(Cell::of(pt.cloud.service()));
    row.push_back(Cell::of(pt.cloud.service() > 0.0 ? pt.fog.service() / pt.cloud.service() : 0.0));
    row.push_back(Cell::of(std::string(ok ? "ok" : "unstable")));
    table.rows.push_back(std::move(row));
  }
  return table;
}

ResultTable run_energy_compare(const ExperimentSpec& spec, const Topology& topo,
                               const ScenarioParams& params) {
  ResultTable table;
  table.columns = {"consumers",      "fne",          "fog_power_tx", "fog_power_fog",
                   "fog_power_cloud", "fog_power_total", "cloud_power_tx", "cloud_power_cloud",
                   "cloud_power_total", "savings_pct"};
  table.config_hash = params.config_hash();
  table.seed = spec.seed;
  const double fne = params.pi_f;  // Fig 7 runs at the configured FNE
  for (const std::int64_t n : spec.consumer_sweep) {
    const auto consumers = topology::apportion_consumers(topo.cities, n);
    const SweepPoint pt = evaluate_point(topo, params, consumers, fne);
    const double fog_total = pt.fog_energy.total();
    const double cloud_total = pt.cloud_energy.total();
    std::vector<Cell> row;
    row.push_back(Cell::of(static_cast<double>(n)));
    row.push_back(Cell::of(fne));
    row.push_back(Cell::of(pt.fog_energy.tx));
    row.push_back(Cell::of(pt.fog_energy.fog));
    row.push_back(Cell::of(pt.fog_energy.cloud));
    row.push_back(Cell::of(fog_total));
    row.push_back(Cell::of(pt.cloud_energy.tx));
    row.push_back(Cell::of(pt.cloud_energy.cloud));
    row.push_back(Cell::of(cloud_total));
    row.push_back(Cell::of(cloud_total > 0.0 ? (1.0 - fog_total / cloud_total) * 100.0 : 0.0));
    table.rows.push_back(std::move(row));
  }
  return table;
}

ResultTable run_cost_sweep(const ExperimentSpec& spec, const ScenarioParams& pilot) {
  struct Point {
    std::string curve;
    double x = 0.0;
    ScenarioParams params;
  };
  std::vector<Point> points;
  for (const std::int64_t n : spec.pilot_consumers) {
    Point p{"consumers", static_cast<double>(n), pilot};
    p.params.n_consumers = n;
    points.push_back(std::move(p));
  }
  for (const double a : spec.arrival_sweep) {
    Point p{"arrival_rate", a, pilot};
    p.params.arrival_rate_per_consumer = a;
    points.push_back(std::move(p));
  }
  for (const int f : spec.fog_sweep) {
    Point p{"fog_count", static_cast<double>(f), pilot};
    p.params.n_fog = f;
    points.push_back(std::move(p));
  }

  struct Outcome {
    double best_cost = 0.0;
    bool feasible = false;
    std::size_t generations = 0;
  };
  std::vector<Outcome> outcomes(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    const Topology topo = topology::generate_topology(points[i].params, spec.seed);
    placement::PlacementProblem problem(topo, points[i].params);
    mde::MdeConfig config;
    config.pop_size = spec.cost_pop;
    config.max_generations = spec.cost_generations;
    config.seed = spec.seed ^ (0x9e37u + i * 0x85ebca6bull);
    config.parallel = false;  // points already run concurrently
    const mde::EvolveResult result = mde::evolve(problem.as_mde_problem(), config);
    outcomes[i].best_cost = result.best.raw_fitness;
    outcomes[i].feasible = result.feasible_found;
    outcomes[i].generations = result.generations_run;
  });

  ResultTable table;
  table.columns = {"curve", "x", "best_cost", "feasible", "generations"};
  table.config_hash = pilot.config_hash();
  table.seed = spec.seed;
  for (std::size_t i = 0; i < points.size(); ++i) {
    std::vector<Cell> row;
    row.push_back(Cell::of(points[i].curve));
    row.push_back(Cell::of(points[i].x));
    row.push_back(Cell::of(outcomes[i].best_cost));
    row.push_back(Cell::of(std::string(outcomes[i].feasible ? "yes" : "no")));
    row.push_back(Cell::of(static_cast<double>(outcomes[i].generations)));
    table.rows.push_back(std::move(row));
  }
  return table;
}

ToyVanetResult run_toy_vanet() {
  const toyvanet::ToyFixture fixture = toyvanet::ToyFixture::standard();
  ToyVanetResult result;
  result.scenario1 = toyvanet::evaluate_toy(fixture, toyvanet::scenario_one(fixture));
  result.scenario2 = toyvanet::evaluate_toy(fixture, toyvanet::scenario_two(fixture));
  result.improvement_percent =
      toyvanet::improvement_percent(result.scenario1.total, result.scenario2.total);

  result.table.columns = {"scenario", "upload_cost", "vm_cost", "inter_rsu_cost",
                          "total",    "upload_delay"};
  result.table.config_hash = "toy-vanet-fixture";
  result.table.seed = 0;
  for (const auto& [name, b] :
       {std::pair<const char*, const toyvanet::ToyBreakdown*>{"scenario-1", &result.scenario1},
        std::pair<const char*, const toyvanet::ToyBreakdown*>{"scenario-2", &result.scenario2}}) {
    std::vector<Cell> row;
    row.push_back(Cell::of(std::string(name)));
    row.push_back(Cell::of(b->upload_cost));
    row.push_back(Cell::of(b->vm_cost));
    row.push_back(Cell::of(b->inter_rsu_cost));
    row.push_back(Cell::of(b->total));
    row.push_back(Cell::of(b->upload_delay));
    result.table.rows.push_back(std::move(row));
  }
  return result;
}

PicEstimateResult run_pic_estimate(const ExperimentSpec& spec, const Topology& topo,
                                   const ScenarioParams& params,
                                   const montecarlo::McConfig& mc_config) {
  // Cloud-only baseline once; per trial, the offload split follows the
  // sampled pi_c (the leading share of each city's consumers goes straight to
  // cloud) and the savings are baseline minus mixed cost.
  const feasibility::DecisionVector cloud_dv = placement::make_cloud_assignment(topo, params);
  const double baseline = costmodel::total_cloud_cost(cloud_dv, topo, params).total;

  auto objective = [&](double pi_c, const std::vector<double>&) {
    ScenarioParams trial = params;
    trial.pi_c = pi_c;
    const feasibility::DecisionVector dv = placement::make_mixed_assignment(topo, trial, pi_c);
    return baseline - costmodel::total_fog_cost(dv, topo, trial).total;
  };

  PicEstimateResult result;
  result.mc = montecarlo::estimate_pi_c(objective, mc_config);
  result.table.columns = {"trial", "pi_c", "savings", "running_mean", "halfwidth"};
  result.table.config_hash = params.config_hash();
  result.table.seed = spec.seed;
  for (const montecarlo::TrialOutcome& t : result.mc.samples) {
    std::vector<Cell> row;
    row.push_back(Cell::of(static_cast<double>(t.trial)));
    row.push_back(Cell::of(t.pi_c));
    row.push_back(Cell::of(t.savings));
    row.push_back(Cell::of(t.running_mean));
    row.push_back(Cell::of(t.halfwidth));
    result.table.rows.push_back(std::move(row));
  }
  return result;
}

// ---------------------------------------------------------------------------
// Emission

std::string Cell::render() const { return is_number ? fmt17(number) : text; }

double ResultTable::number_at(std::size_t row, const std::string& column) const {
  const auto it = std::find(columns.begin(), columns.end(), column);
  if (it == columns.end()) throw std::out_of_range("no column " + column);
  const Cell& cell = rows.at(row).at(static_cast<std::size_t>(it - columns.begin()));
  return cell.is_number ? cell.number : std::stod(cell.text);
}

std::string ResultTable::text_at(std::size_t row, const std::string& column) const {
  const auto it = std::find(columns.begin(), columns.end(), column);
  if (it == columns.end()) throw std::out_of_range("no column " + column);
  return rows.at(row).at(static_cast<std::size_t>(it - columns.begin())).render();
}

EmitFormat emit_format_from_string(const std::string& name) {
  if (name == "csv") return EmitFormat::kCsv;
  if (name == "json") return EmitFormat::kJson;
  if (name == "svg") return EmitFormat::kSvg;
  throw ConfigError("unknown output format: " + name);
}

std::string to_csv(const ResultTable& table) {
  std::ostringstream out;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out << ',';
    out << csv_escape(table.columns[c]);
  }
  out << ",config_hash,seed,tool_version\r\n";
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ',';
      out << csv_escape(row[c].render());
    }
    out << ',' << csv_escape(table.config_hash) << ',' << table.seed << ','
        << csv_escape(table.tool_version) << "\r\n";
  }
  return out.str();
}

std::string to_json(const ResultTable& table) {
  nlohmann::json j;
  j["metadata"] = {{"config_hash", table.config_hash},
                   {"seed", table.seed},
                   {"tool_version", table.tool_version}};
  j["columns"] = table.columns;
  j["rows"] = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json jrow = nlohmann::json::array();
    for (const Cell& cell : row) {
      if (cell.is_number) {
        jrow.push_back(cell.number);
      } else {
        jrow.push_back(cell.text);
      }
    }
    j["rows"].push_back(std::move(jrow));
  }
  return j.dump(2);
}

std::string to_svg(const ResultTable& table) {
  if (table.rows.empty()) throw std::invalid_argument("to_svg: empty table");

  // First numeric column is the x axis, every other numeric column a series.
  std::vector<std::size_t> numeric;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    bool all_numbers = true;
    for (const auto& row : table.rows) {
      if (!row[c].is_number) {
        all_numbers = false;
        break;
      }
    }
    if (all_numbers) numeric.push_back(c);
  }
  if (numeric.size() < 2) throw std::invalid_argument("to_svg: need an x column and a series");
  const std::size_t xcol = numeric.front();

  const double width = 860.0, height = 540.0, ml = 80.0, mr = 220.0, mt = 40.0, mb = 60.0;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& row : table.rows) {
    xmin = std::min(xmin, row[xcol].number);
    xmax = std::max(xmax, row[xcol].number);
    for (std::size_t k = 1; k < numeric.size(); ++k) {
      ymin = std::min(ymin, row[numeric[k]].number);
      ymax = std::max(ymax, row[numeric[k]].number);
    }
  }
  if (xmax <= xmin) xmax = xmin + 1.0;
  if (ymax <= ymin) ymax = ymin + 1.0;
  auto sx = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (width - ml - mr); };
  auto sy = [&](double y) { return height - mb - (y - ymin) / (ymax - ymin) * (height - mt - mb); };

  static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                   "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  out << "<!-- config_hash: " << table.config_hash << " seed: " << table.seed << " -->\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\"" << width - mr
      << "\" y2=\"" << height - mb << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << height - mb
      << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << (ml + width - mr) / 2.0 << "\" y=\"" << height - 18.0
      << "\" text-anchor=\"middle\" font-size=\"14\">" << table.columns[xcol] << "</text>\n";
  out << "<text x=\"20\" y=\"" << (mt + height - mb) / 2.0
      << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 20 "
      << (mt + height - mb) / 2.0 << ")\">value</text>\n";
  out << "<text x=\"" << ml << "\" y=\"" << mt - 14.0 << "\" font-size=\"12\">" << fmt17(ymax)
      << "</text>\n";

  for (std::size_t k = 1; k < numeric.size(); ++k) {
    const std::size_t col = numeric[k];
    const char* color = kPalette[(k - 1) % 10];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (const auto& row : table.rows) {
      out << sx(row[xcol].number) << ',' << sy(row[col].number) << ' ';
    }
    out << "\"/>\n";
    const double ly = mt + 18.0 * static_cast<double>(k);
    out << "<line x1=\"" << width - mr + 10 << "\" y1=\"" << ly << "\" x2=\"" << width - mr + 40
        << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << width - mr + 46 << "\" y=\"" << ly + 4 << "\" font-size=\"12\">"
        << table.columns[col] << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

void emit(const ResultTable& table, EmitFormat format, std::ostream& out) {
  switch (format) {
    case EmitFormat::kCsv: out << to_csv(table); break;
    case EmitFormat::kJson: out << to_json(table); break;
    case EmitFormat::kSvg: out << to_svg(table); break;
  }
}

void emit_to_file(const ResultTable& table, EmitFormat format, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write output file: " + path);
  emit(table, format, out);
  if (!out.good()) throw ConfigError("write failed: " + path);
}

ResultTable parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      record.push_back(std::move(field));
      field.clear();
    } else if (c == '\r') {
      // consumed with the following newline
    } else if (c == '\n') {
      record.push_back(std::move(field));
      field.clear();
      records.push_back(std::move(record));
      record.clear();
    } else {
      field += c;
    }
  }
  if (!field.empty() || !record.empty()) {
    record.push_back(std::move(field));
    records.push_back(std::move(record));
  }
  if (records.empty()) throw ConfigError("parse_csv: empty input");

  ResultTable table;
  const auto& header = records.front();
  if (header.size() < 3) throw ConfigError("parse_csv: missing metadata columns");
  table.columns.assign(header.begin(), header.end() - 3);
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.size() != header.size()) throw ConfigError("parse_csv: ragged row");
    std::vector<Cell> row;
    for (std::size_t c = 0; c + 3 < rec.size(); ++c) row.push_back(Cell::of(rec[c]));
    table.rows.push_back(std::move(row));
    table.config_hash = rec[rec.size() - 3];
    table.seed = std::stoull(rec[rec.size() - 2]);
    table.tool_version = rec[rec.size() - 1];
  }
  return table;
}

}  // namespace fogplan::harness
