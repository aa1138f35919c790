// Copyright 2026 The vmplace Authors
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
//
// vmplace CLI: trace generation, simulation runs, and method comparison.
//
// Exit codes: 0 success, 1 usage/config error, 2 input schema error,
// 3 infeasible instance.
//
// All written artifacts are byte-deterministic for fixed (args, seed);
// wall-clock timings go to stdout only.

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "vmplace/config.hpp"
#include "vmplace/report.hpp"
#include "vmplace/simulation.hpp"
#include "vmplace/trace.hpp"
#include "vmplace/tracegen.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct GenTraceArgs {
  std::string config;
  std::string out;
  std::int64_t seed = -1;  // < 0: keep the config's seed
};

int cmd_gen_trace(const GenTraceArgs& args) {
  vmp::TraceConfig tc = vmp::load_trace_config(args.config);
  if (args.seed >= 0) {
    tc.cwtg.rng_seed = static_cast<std::uint64_t>(args.seed);
    tc.legacy.rng_seed = static_cast<std::uint64_t>(args.seed);
  }
  const std::vector<vmp::TraceEvent> events = tc.mode == vmp::TraceConfig::Mode::Legacy
                                                  ? vmp::legacy_workload(tc.legacy)
                                                  : vmp::generate(tc.cwtg);
  vmp::atomic_write_file(args.out, vmp::write_csv(events));

  json manifest;
  manifest["output"] = fs::path(args.out).filename().string();
  manifest["params"] = vmp::trace_config_to_json(tc);
  manifest["rows"] = events.size();
  vmp::atomic_write_file(args.out + ".manifest.json", manifest.dump(2) + "\n");
  std::cout << "wrote " << events.size() << " rows to " << args.out << "\n";
  return 0;
}

struct RunArgs {
  std::string config;
  std::string trace;
  std::string algo = "ff";
  std::string scalarizer;  // empty: keep the config's choice
  std::string load_profile;
  std::string scenario;  // label for compare; default: trace file stem
  std::string label;     // method label; default: algo or algo-scalarizer
  std::string out = ".";
  std::int64_t seed = -1;
  int num_seeds = 1;
  int t_max = -1;
  bool emit_convergence = false;
};

std::string steps_csv(const vmp::SimulationRun& run) {
  std::string out =
      "t,f1_raw,f2_raw,f3_raw,f4_raw,f1_norm,f2_norm,f3_norm,f4_norm,F,"
      "alive_vms,powered_pms,mean_vm_cpu_util,vmpr_adopted\n";
  for (const auto& r : run.steps) {
    out += std::to_string(r.t);
    for (double x : r.obj.raw) {
      out += ',';
      out += vmp::format_double(x);
    }
    for (double x : r.obj.norm) {
      out += ',';
      out += vmp::format_double(x);
    }
    out += ',';
    out += vmp::format_double(r.scalar);
    out += ',' + std::to_string(r.alive_vms);
    out += ',' + std::to_string(r.powered_pms);
    out += ',';
    out += vmp::format_double(r.mean_vm_cpu_util);
    out += r.vmpr_adopted ? ",1\n" : ",0\n";
  }
  return out;
}

struct RunStats {
  double mean_cost = 0.0;
  std::array<double, 4> mean_raw{};
  std::array<double, 4> mean_norm{};
};

RunStats stats_of(const vmp::SimulationRun& run) {
  RunStats s;
  s.mean_cost = vmp::scenario_average(run);
  for (const auto& r : run.steps)
    for (std::size_t i = 0; i < 4; ++i) {
      s.mean_raw[i] += r.obj.raw[i];
      s.mean_norm[i] += r.obj.norm[i];
    }
  for (std::size_t i = 0; i < 4; ++i) {
    s.mean_raw[i] /= static_cast<double>(run.steps.size());
    s.mean_norm[i] /= static_cast<double>(run.steps.size());
  }
  return s;
}

json summary_json(const RunArgs& args, const std::string& method, const std::string& scenario,
                  const std::string& load, const vmp::ProblemConfig& config,
                  std::uint64_t seed, const RunStats& stats, double migration_count,
                  double migration_gb, std::size_t steps) {
  json j;
  j["method"] = method;
  j["algo"] = args.algo;
  j["scalarizer"] = vmp::to_string(config.scalarizer);
  j["objective_set"] = vmp::to_string(config.objective_set);
  j["scenario"] = scenario;
  j["load"] = load;
  j["seed"] = seed;
  j["mean_cost"] = stats.mean_cost;
  j["mean_raw"] = stats.mean_raw;
  j["mean_norm"] = stats.mean_norm;
  j["migration_count"] = migration_count;
  j["migration_gb"] = migration_gb;
  j["steps"] = steps;
  j["manifest"] = {{"config", args.config}, {"trace", args.trace},
                   {"out", args.out},       {"load_profile", load},
                   {"t_max", args.t_max},   {"seeds", args.num_seeds}};
  return j;
}

int cmd_run(const RunArgs& args) {
  for (const std::string& path : {args.config, args.trace})
    if (!fs::exists(path)) throw vmp::ConfigError("no such file: " + path);

  vmp::RunConfig rc = vmp::load_run_config(args.config);
  if (!args.scalarizer.empty()) {
    if (args.scalarizer == "ws")
      rc.problem.scalarizer = vmp::ScalarMethod::WeightedSum;
    else if (args.scalarizer == "ed")
      rc.problem.scalarizer = vmp::ScalarMethod::Euclidean;
    else if (args.scalarizer == "cd")
      rc.problem.scalarizer = vmp::ScalarMethod::Chebyshev;
    else
      throw vmp::ConfigError("scalarizer must be ws, ed, or cd");
  }
  const auto algo = vmp::parse_algo(args.algo);
  if (!algo) throw vmp::ConfigError("unknown algorithm '" + args.algo + "'");

  std::string load = args.load_profile.empty() ? rc.load_profile : args.load_profile;
  std::vector<vmp::PhysicalMachine> pms;
  if (!load.empty()) {
    pms = vmp::builtin_fleet(load);
  } else if (!rc.pm_catalog.empty()) {
    fs::path catalog = rc.pm_catalog;
    if (catalog.is_relative()) catalog = fs::path(args.config).parent_path() / catalog;
    pms = vmp::parse_pm_catalog(vmp::read_file(catalog));
    load = catalog.stem().string();
  } else {
    throw vmp::ConfigError("config needs a pm_catalog or a load_profile");
  }

  const std::vector<vmp::TraceEvent> trace = vmp::parse_csv(vmp::read_file(args.trace));
  const std::string scenario =
      args.scenario.empty() ? fs::path(args.trace).stem().string() : args.scenario;
  std::string method = args.label;
  if (method.empty())
    method = args.algo + "-" + vmp::to_string(rc.problem.scalarizer);

  vmp::RunOptions options;
  options.t_max = args.t_max;
  options.ivmp_heuristic = rc.ivmp_heuristic;

  std::vector<RunStats> per_seed;
  double mig_count_sum = 0.0, mig_gb_sum = 0.0;
  std::size_t steps = 0;
  for (int k = 0; k < args.num_seeds; ++k) {
    vmp::ProblemConfig config = rc.problem;
    vmp::MaParams ma = rc.ma;
    if (args.seed >= 0) {
      config.rng_seed = static_cast<std::uint64_t>(args.seed) + static_cast<std::uint64_t>(k);
      ma.rng_seed = config.rng_seed;
    } else if (k > 0) {
      ma.rng_seed += static_cast<std::uint64_t>(k);
      config.rng_seed += static_cast<std::uint64_t>(k);
    }

    const vmp::SimulationRun run =
        vmp::run_simulation(trace, pms, config, ma, *algo, options);
    const RunStats stats = stats_of(run);
    per_seed.push_back(stats);
    mig_count_sum += static_cast<double>(run.migration_count);
    mig_gb_sum += run.migration_gb;
    steps = run.steps.size();

    const std::string stem = method + "_seed" + std::to_string(config.rng_seed);
    const fs::path outdir = args.out;
    vmp::atomic_write_file(outdir / ("steps_" + stem + ".csv"), steps_csv(run));
    vmp::atomic_write_file(
        outdir / ("summary_" + stem + ".json"),
        summary_json(args, method, scenario, load, config, config.rng_seed, stats,
                     static_cast<double>(run.migration_count), run.migration_gb, steps)
                .dump(2) +
            "\n");
    if (args.emit_convergence && !run.convergence.empty()) {
      std::string conv = "evolve,generation,best_cost\n";
      for (std::size_t e = 0; e < run.convergence.size(); ++e)
        for (std::size_t g = 0; g < run.convergence[e].size(); ++g)
          conv += std::to_string(e) + ',' + std::to_string(g) + ',' +
                  vmp::format_double(run.convergence[e][g]) + '\n';
      vmp::atomic_write_file(outdir / ("convergence_" + stem + ".csv"), conv);
    }
    std::cout << method << " seed=" << config.rng_seed << " mean_cost=" << stats.mean_cost
              << " migrations=" << run.migration_count << " (" << run.migration_gb
              << " GB) wall_ms ivmp=" << run.ivmp_wall_ms << " vmpr=" << run.vmpr_wall_ms
              << "\n";
  }

  if (args.num_seeds > 1) {
    RunStats mean;
    for (const auto& s : per_seed) {
      mean.mean_cost += s.mean_cost;
      for (std::size_t i = 0; i < 4; ++i) {
        mean.mean_raw[i] += s.mean_raw[i];
        mean.mean_norm[i] += s.mean_norm[i];
      }
    }
    const double n = static_cast<double>(per_seed.size());
    mean.mean_cost /= n;
    for (std::size_t i = 0; i < 4; ++i) {
      mean.mean_raw[i] /= n;
      mean.mean_norm[i] /= n;
    }
    vmp::atomic_write_file(
        fs::path(args.out) / ("summary_" + method + "_mean.json"),
        summary_json(args, method, scenario, load, rc.problem, 0, mean, mig_count_sum / n,
                     mig_gb_sum / n, steps)
                .dump(2) +
            "\n");
    std::cout << method << " mean over " << args.num_seeds
              << " seeds: mean_cost=" << mean.mean_cost << "\n";
  }
  return 0;
}

struct CompareArgs {
  std::vector<std::string> summaries;
  std::string out = ".";
};

int cmd_compare(const CompareArgs& args) {
  std::vector<vmp::MethodResult> results;
  for (const std::string& path : args.summaries) {
    if (!fs::exists(path)) throw vmp::ConfigError("no such file: " + path);
    json j;
    try {
      j = json::parse(vmp::read_file(path));
    } catch (const json::parse_error& e) {
      throw vmp::ConfigError(path + ": " + e.what());
    }
    for (const char* key : {"method", "objective_set", "scenario", "mean_cost"})
      if (!j.contains(key)) throw vmp::ConfigError(path + ": missing key '" + key + "'");

    vmp::MethodScenario sc;
    sc.scenario = j.at("scenario").get<std::string>();
    sc.load = j.value("load", std::string{});
    sc.mean_cost = j.at("mean_cost").get<double>();
    if (j.contains("mean_raw")) sc.mean_raw = j.at("mean_raw").get<std::array<double, 4>>();
    if (j.contains("mean_norm")) sc.mean_norm = j.at("mean_norm").get<std::array<double, 4>>();

    const std::string method = j.at("method").get<std::string>();
    auto it = std::find_if(results.begin(), results.end(),
                           [&](const vmp::MethodResult& r) { return r.method == method; });
    if (it == results.end()) {
      results.push_back({method, j.at("objective_set").get<std::string>(), {}});
      it = results.end() - 1;
    }
    it->scenarios.push_back(std::move(sc));
  }

  const std::vector<vmp::ReportTable> tables = vmp::build_report(results);
  for (const auto& t : tables) {
    vmp::atomic_write_file(fs::path(args.out) / ("report_" + t.name + ".txt"), t.to_text());
    vmp::atomic_write_file(fs::path(args.out) / ("report_" + t.name + ".csv"), t.to_csv());
    std::cout << t.to_text() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vmplace: VM placement simulation and optimization"};
  app.require_subcommand(1);

  GenTraceArgs gen;
  CLI::App* gen_cmd = app.add_subcommand("gen-trace", "generate a workload trace CSV");
  gen_cmd->add_option("--config", gen.config, "generator config (JSON)")->required();
  gen_cmd->add_option("--out", gen.out, "output trace path")->required();
  gen_cmd->add_option("--seed", gen.seed, "override the config's rng_seed");

  RunArgs run;
  CLI::App* run_cmd = app.add_subcommand("run", "simulate one trace with one algorithm");
  run_cmd->add_option("--config", run.config, "problem config (JSON)")->required();
  run_cmd->add_option("--trace", run.trace, "workload trace CSV")->required();
  run_cmd->add_option("--algo", run.algo, "ff|bf|wf|ffd|bfd|ma|two-phase")->required();
  run_cmd->add_option("--scalarizer", run.scalarizer, "ws|ed|cd (default from config)");
  run_cmd->add_option("--seed", run.seed, "base rng seed (seed+i for run i)");
  run_cmd->add_option("--seeds", run.num_seeds, "number of repeated runs")
      ->check(CLI::PositiveNumber);
  run_cmd->add_option("--load-profile", run.load_profile, "built-in PM fleet: part1|low|high");
  run_cmd->add_option("--scenario", run.scenario, "scenario label (default: trace stem)");
  run_cmd->add_option("--label", run.label, "method label (default: algo-scalarizer)");
  run_cmd->add_option("--t-max", run.t_max, "steps to simulate (default: from trace)");
  run_cmd->add_option("--out", run.out, "output directory");
  run_cmd->add_flag("--convergence", run.emit_convergence, "emit per-generation best costs");

  CompareArgs cmp;
  CLI::App* cmp_cmd = app.add_subcommand("compare", "build ranking tables from run summaries");
  cmp_cmd->add_option("summaries", cmp.summaries, "summary JSON files")->required();
  cmp_cmd->add_option("--out", cmp.out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*gen_cmd) return cmd_gen_trace(gen);
    if (*run_cmd) return cmd_run(run);
    if (*cmp_cmd) return cmd_compare(cmp);
  } catch (const vmp::SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return 2;
  } catch (const vmp::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 3;
  } catch (const vmp::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
