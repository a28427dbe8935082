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

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fogplan/costmodel.hpp"
#include "fogplan/errors.hpp"
#include "fogplan/harness.hpp"
#include "fogplan/mde.hpp"
#include "fogplan/montecarlo.hpp"
#include "fogplan/placement.hpp"
#include "fogplan/queueing.hpp"
#include "fogplan/topology.hpp"
#include "fogplan/toyvanet.hpp"

namespace {

using fogplan::costmodel::ScenarioParams;

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 1;
constexpr int kExitInfeasible = 2;

struct GlobalOptions {
  std::string config_path;
  std::string out_path;
  std::string format = "csv";
  std::uint64_t seed = 42;
  bool pilot = false;
};

ScenarioParams load_params(const GlobalOptions& opts) {
  ScenarioParams params = opts.pilot ? fogplan::costmodel::pilot_params()
                                     : fogplan::costmodel::default_params();
  if (!opts.config_path.empty()) {
    params = ScenarioParams::from_json_file(opts.config_path);
  }
  params.validate();
  return params;
}

void write_text(const GlobalOptions& opts, const std::string& text) {
  if (opts.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(opts.out_path, std::ios::binary);
  if (!out) throw fogplan::ConfigError("cannot write output file: " + opts.out_path);
  out << text;
}

void write_table(const GlobalOptions& opts, const fogplan::harness::ResultTable& table) {
  const auto format = fogplan::harness::emit_format_from_string(opts.format);
  if (opts.out_path.empty()) {
    fogplan::harness::emit(table, format, std::cout);
  } else {
    fogplan::harness::emit_to_file(table, format, opts.out_path);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fog-assisted smart-grid placement simulator and optimizer"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags are accepted after the subcommand too

  GlobalOptions opts;
  app.add_option("--config", opts.config_path, "Scenario parameters (JSON)");
  app.add_option("--seed", opts.seed, "Base RNG seed");
  app.add_option("--out", opts.out_path, "Output path (default: stdout)");
  app.add_option("--format", opts.format, "Output format: csv, json or svg")
      ->check(CLI::IsMember({"csv", "json", "svg"}));
  app.add_flag("--pilot", opts.pilot, "Start from the pilot-network defaults");

  auto* gen = app.add_subcommand("gen-topology", "Generate the network and print it as JSON");

  auto* evaluate =
      app.add_subcommand("evaluate", "Cost breakdown of the fog-assisted and cloud-only paths");
  std::int64_t eval_consumers = -1;
  double eval_fne = -1.0;
  evaluate->add_option("--consumers", eval_consumers, "Override consumer count");
  evaluate->add_option("--fne", eval_fne, "Override the fog network efficiency");

  auto* optimize = app.add_subcommand("optimize", "Run the placement optimizer");
  std::size_t opt_generations = 200;
  std::size_t opt_pop = 60;
  std::string opt_history_path;
  std::string opt_solution_path;
  optimize->add_option("--generations", opt_generations, "Generation budget");
  optimize->add_option("--pop", opt_pop, "Population size");
  optimize->add_option("--history", opt_history_path, "Write per-generation history CSV here");
  optimize->add_option("--solution", opt_solution_path, "Write the best decision vector here");

  auto* sweep = app.add_subcommand("sweep", "Reproduce one of the evaluation sweeps");
  std::string sweep_kind;
  double sweep_fne = 0.25;
  sweep->add_option("--kind", sweep_kind, "latency, fne, energy or cost")
      ->required()
      ->check(CLI::IsMember({"latency", "fne", "energy", "cost"}));
  sweep->add_option("--fne", sweep_fne, "FNE level for the latency sweep");

  auto* toy = app.add_subcommand("toy-vanet", "The four-driver VANET worked example");

  auto* pic = app.add_subcommand("estimate-pic", "Monte Carlo calibration of pi_c");
  std::size_t pic_trials = 1000;
  pic->add_option("--trials", pic_trials, "Trial cap");

  CLI11_PARSE(app, argc, argv);

  try {
    const ScenarioParams params = load_params(opts);
    fogplan::harness::ExperimentSpec spec;
    spec.seed = opts.seed;

    if (gen->parsed()) {
      const auto topo = fogplan::topology::generate_topology(params, opts.seed);
      write_text(opts, fogplan::topology::topology_to_json(topo) + "\n");
      return kExitOk;
    }

    if (evaluate->parsed()) {
      ScenarioParams p = params;
      if (eval_consumers >= 0) p.n_consumers = eval_consumers;
      if (eval_fne >= 0.0) p.pi_f = eval_fne;
      const auto topo = fogplan::topology::generate_topology(p, opts.seed);
      const auto fog_dv = fogplan::placement::make_fog_assignment(topo, p);
      const auto cloud_dv = fogplan::placement::make_cloud_assignment(topo, p);
      const auto fog = fogplan::costmodel::total_fog_cost(fog_dv, topo, p);
      const auto cloud = fogplan::costmodel::total_cloud_cost(cloud_dv, topo, p);
      std::ostringstream out;
      if (opts.format == "json") {
        out << "[\n"
            << fog.to_json_string("fog", p.n_consumers, p.pi_f) << ",\n"
            << cloud.to_json_string("cloud", p.n_consumers, 0.0) << "\n]\n";
      } else {
        out << fogplan::costmodel::CostBreakdown::csv_header() << "\r\n"
            << fog.to_csv_row("fog", p.n_consumers, p.pi_f) << "\r\n"
            << cloud.to_csv_row("cloud", p.n_consumers, 0.0) << "\r\n";
      }
      write_text(opts, out.str());
      return kExitOk;
    }

    if (optimize->parsed()) {
      const ScenarioParams p =
          opts.config_path.empty() && !opts.pilot ? fogplan::costmodel::pilot_params() : params;
      const auto topo = fogplan::topology::generate_topology(p, opts.seed);
      fogplan::placement::PlacementProblem problem(topo, p);
      fogplan::mde::MdeConfig config;
      config.pop_size = opt_pop;
      config.max_generations = opt_generations;
      config.seed = opts.seed;
      const auto result = fogplan::mde::evolve(problem.as_mde_problem(), config);
      if (!opt_history_path.empty()) {
        std::ofstream hist(opt_history_path, std::ios::binary);
        if (!hist) throw fogplan::ConfigError("cannot write " + opt_history_path);
        hist << result.history_csv();
      }
      if (!result.feasible_found) {
        std::cerr << "no feasible placement found; best-penalty objective "
                  << result.best.raw_fitness << "\n";
        return kExitInfeasible;
      }
      const auto dv = problem.decode(result.best.genome);
      const auto ev = problem.evaluate(dv);
      if (!opt_solution_path.empty()) {
        std::ofstream sol(opt_solution_path, std::ios::binary);
        if (!sol) throw fogplan::ConfigError("cannot write " + opt_solution_path);
        sol << dv.to_json_string() << "\n";
      }
      std::ostringstream out;
      out << "best_cost," << ev.cost << "\r\n";
      out << "generations," << result.generations_run << "\r\n";
      out << "feasible," << (ev.feasible ? "yes" : "no") << "\r\n";
      write_text(opts, out.str());
      return kExitOk;
    }

    if (sweep->parsed()) {
      if (sweep_kind == "cost") {
        const ScenarioParams pilot =
            opts.config_path.empty() ? fogplan::costmodel::pilot_params() : params;
        spec.kind = fogplan::harness::ExperimentSpec::Kind::kCostSweep;
        write_table(opts, fogplan::harness::run_cost_sweep(spec, pilot));
        return kExitOk;
      }
      const auto topo = fogplan::topology::generate_topology(params, opts.seed);
      if (sweep_kind == "latency") {
        spec.kind = fogplan::harness::ExperimentSpec::Kind::kLatencyCompare;
        spec.fne = sweep_fne;
        write_table(opts, fogplan::harness::run_latency_compare(spec, topo, params));
      } else if (sweep_kind == "fne") {
        spec.kind = fogplan::harness::ExperimentSpec::Kind::kFneSweep;
        write_table(opts, fogplan::harness::run_fne_sweep(spec, topo, params));
      } else {
        spec.kind = fogplan::harness::ExperimentSpec::Kind::kEnergyCompare;
        write_table(opts, fogplan::harness::run_energy_compare(spec, topo, params));
      }
      return kExitOk;
    }

    if (toy->parsed()) {
      const auto result = fogplan::harness::run_toy_vanet();
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.2f", result.improvement_percent);
      std::cerr << "scenario-1: upload " << result.scenario1.upload_cost << ", vm "
                << result.scenario1.vm_cost << ", inter-rsu " << result.scenario1.inter_rsu_cost
                << ", total " << result.scenario1.total << ", upload delay "
                << result.scenario1.upload_delay << "\n"
                << "scenario-2: upload " << result.scenario2.upload_cost << ", vm "
                << result.scenario2.vm_cost << ", inter-rsu " << result.scenario2.inter_rsu_cost
                << ", total " << result.scenario2.total << ", upload delay "
                << result.scenario2.upload_delay << "\n"
                << "improvement: " << buf << "%\n";
      write_table(opts, result.table);
      return kExitOk;
    }

    if (pic->parsed()) {
      const auto topo = fogplan::topology::generate_topology(params, opts.seed);
      fogplan::montecarlo::McConfig mc;
      mc.max_trials = pic_trials;
      mc.seed = opts.seed;
      spec.kind = fogplan::harness::ExperimentSpec::Kind::kPicEstimate;
      const auto result = fogplan::harness::run_pic_estimate(spec, topo, params, mc);
      std::cerr << "pi_c estimate " << result.mc.estimate << " (best savings "
                << result.mc.best_savings << ", trials " << result.mc.trials_used << ")\n";
      write_table(opts, result.table);
      return kExitOk;
    }
  } catch (const fogplan::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const fogplan::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const fogplan::queueing::UnstableQueueError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const fogplan::costmodel::UnservedConsumerError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  return kExitOk;
}
