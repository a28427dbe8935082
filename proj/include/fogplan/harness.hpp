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

#ifndef FOGPLAN_HARNESS_HPP
#define FOGPLAN_HARNESS_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fogplan/montecarlo.hpp"
#include "fogplan/params.hpp"
#include "fogplan/topology.hpp"
#include "fogplan/toyvanet.hpp"

namespace fogplan::harness {

inline constexpr const char* kToolVersion = "fogplan 1.0.0";

struct ExperimentSpec {
  enum class Kind {
    kLatencyCompare,
    kFneSweep,
    kEnergyCompare,
    kCostSweep,
    kToyVanet,
    kPicEstimate,
  };
  Kind kind = Kind::kLatencyCompare;

  double fne = 0.25;  // Fig-5 operating point
  std::vector<std::int64_t> consumer_sweep = {10000, 20000, 30000, 40000,  50000,
                                              60000, 70000, 80000, 90000, 100000};
  std::vector<double> fne_levels = {1.0, 0.8, 0.5, 0.01, 0.0};
  std::int64_t fne_consumers = 50000;

  // Pilot-scale cost sweeps (each point runs the optimizer).
  std::vector<std::int64_t> pilot_consumers = {50, 55, 60, 65, 70, 75, 80, 85, 90, 95};
  std::vector<double> arrival_sweep = {0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0};
  std::vector<int> fog_sweep = {20, 26, 32, 38, 44, 50};
  std::size_t cost_generations = 200;
  std::size_t cost_pop = 60;

  int replications = 1;
  std::uint64_t seed = 42;
};

// A cell is either a number (rendered with 17 significant digits) or text.
struct Cell {
  bool is_number = false;
  double number = 0.0;
  std::string text;

  static Cell of(double v) { return Cell{true, v, {}}; }
  static Cell of(std::string v) { return Cell{false, 0.0, std::move(v)}; }
  std::string render() const;
};

struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::string config_hash;
  std::uint64_t seed = 0;
  std::string tool_version = kToolVersion;

  double number_at(std::size_t row, const std::string& column) const;
  std::string text_at(std::size_t row, const std::string& column) const;
};

// --- Experiments -------------------------------------------------------------

// Fig 5: transmission / processing / service latency against consumer count
// for both paradigms at the spec's FNE.
ResultTable run_latency_compare(const ExperimentSpec& spec, const topology::Topology& topo,
                                const costmodel::ScenarioParams& params);

// Table 1 / Fig 6: the same metrics across FNE levels at a fixed population.
ResultTable run_fne_sweep(const ExperimentSpec& spec, const topology::Topology& topo,
                          const costmodel::ScenarioParams& params);

// Fig 7: total power against consumer count, with the savings percentage.
ResultTable run_energy_compare(const ExperimentSpec& spec, const topology::Topology& topo,
                               const costmodel::ScenarioParams& params);

// Fig 8: optimized total cost against consumers, arrival rate and fog count
// on the pilot network; one optimizer run per point.
ResultTable run_cost_sweep(const ExperimentSpec& spec, const costmodel::ScenarioParams& pilot);

struct ToyVanetResult {
  toyvanet::ToyBreakdown scenario1;
  toyvanet::ToyBreakdown scenario2;
  double improvement_percent = 0.0;
  ResultTable table;
};
ToyVanetResult run_toy_vanet();

// Monte Carlo calibration of pi_c on the configured scenario: per-trial
// savings of the mixed execution against the cloud-only baseline.
struct PicEstimateResult {
  montecarlo::McResult mc;
  ResultTable table;
};
PicEstimateResult run_pic_estimate(const ExperimentSpec& spec, const topology::Topology& topo,
                                   const costmodel::ScenarioParams& params,
                                   const montecarlo::McConfig& mc_config);

// --- Emission ----------------------------------------------------------------

enum class EmitFormat { kCsv, kJson, kSvg };
EmitFormat emit_format_from_string(const std::string& name);

void emit(const ResultTable& table, EmitFormat format, std::ostream& out);
void emit_to_file(const ResultTable& table, EmitFormat format, const std::string& path);

std::string to_csv(const ResultTable& table);
std::string to_json(const ResultTable& table);
std::string to_svg(const ResultTable& table);

// Inverse of to_csv: cells come back as verbatim text, so re-emitting a
// parsed table reproduces the input bytes.
ResultTable parse_csv(const std::string& text);

}  // namespace fogplan::harness

#endif  // FOGPLAN_HARNESS_HPP
