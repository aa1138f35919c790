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
// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line;
// the exit code is the number of failures.
//
// Usage: vmplace_acceptance [path-to-cli] [path-to-configs-dir]
// (both arguments are needed only by the determinism criterion)

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "vmplace/config.hpp"
#include "vmplace/memetic.hpp"
#include "vmplace/report.hpp"
#include "vmplace/simulation.hpp"
#include "vmplace/tracegen.hpp"

namespace fs = std::filesystem;
using namespace vmp;

namespace {

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(bool ok, const std::string& what) {
  if (!ok) throw Failure(what);
}

std::string cli_path;      // argv[1]
std::string configs_path;  // argv[2]

// ---------------------------------------------------------------------------
// Shared scenario machinery
// ---------------------------------------------------------------------------

ProblemConfig part1_config() {
  ProblemConfig c;
  c.s = 5;
  c.c_hat = 1000.0;
  c.protection = Resources::uniform(1.0);
  c.objective_set = ObjectiveSet::PartI;
  c.scalarizer = ScalarMethod::WeightedSum;
  c.ws_weights = {1.3903, 2.1379, 2.7393, 1.4586};
  return c;
}

ProblemConfig part2_config() {
  ProblemConfig c;
  c.s = 1;
  c.protection = Resources::uniform(0.75);
  c.objective_set = ObjectiveSet::PartII;
  c.scalarizer = ScalarMethod::WeightedSum;
  c.ws_weights = {0.25, 0.25, 0.25, 0.25};
  c.vmpr_period = 25;
  c.vmpr_duration = 4;
  return c;
}

MaParams part1_ma(std::uint64_t seed) {
  MaParams p;
  p.population_size = 24;
  p.generations = 24;
  p.local_search_moves = 2;
  p.rng_seed = seed;
  return p;
}

MaParams part2_ma(std::uint64_t seed) {
  MaParams p;
  p.population_size = 50;
  p.generations = 60;
  p.local_search_moves = 6;
  p.rng_seed = seed;
  return p;
}

/// Eight elastic/overbooked scenarios: the cross-product of the two candidate
/// distributions over four uncertain parameters, reduced to its first half,
/// at a desk-scale duration of 200 steps.
std::vector<GeneratorParams> part2_scenarios() {
  const Pdf horizontal[2] = {Pdf::uniform(0, 10), Pdf::poisson(7)};
  const Pdf vertical[2] = {Pdf::uniform(0, 10), Pdf::poisson(5)};
  const Pdf server[2] = {Pdf::uniform(0, 100), Pdf::poisson(70)};
  const Pdf network[2] = {Pdf::uniform(0, 100), Pdf::poisson(70)};
  std::vector<GeneratorParams> out;
  for (int combo = 0; combo < 8; ++combo) {
    GeneratorParams g;
    g.duration = 200;
    g.num_services = 100;
    g.max_vms_per_service = 10;
    g.horizontal_elasticity = horizontal[combo & 1];
    g.vertical_elasticity = vertical[(combo >> 1) & 1];
    g.server_util = server[(combo >> 2) & 1];
    g.network_util = network[(combo >> 3) & 1];
    g.rng_seed = 1000 + static_cast<std::uint64_t>(combo);
    out.push_back(g);
  }
  return out;
}

std::array<double, 4> mean_norm_of(const SimulationRun& run) {
  std::array<double, 4> m{};
  for (const auto& r : run.steps)
    for (std::size_t i = 0; i < 4; ++i) m[i] += r.obj.norm[i];
  for (auto& x : m) x /= static_cast<double>(run.steps.size());
  return m;
}

std::array<double, 4> mean_raw_of(const SimulationRun& run) {
  std::array<double, 4> m{};
  for (const auto& r : run.steps)
    for (std::size_t i = 0; i < 4; ++i) m[i] += r.obj.raw[i];
  for (auto& x : m) x /= static_cast<double>(run.steps.size());
  return m;
}

// ---------------------------------------------------------------------------
// 1. brute-force optimality oracle
// ---------------------------------------------------------------------------

void criterion_optimality() {
  RngEngine rng(20260101);
  int ma_runs = 0, ma_hits = 0;
  for (int instance = 0; instance < 50; ++instance) {
    const int n = static_cast<int>(uniform_int(rng, 1, 3));
    const int m = static_cast<int>(uniform_int(rng, 1, 5));
    std::vector<PhysicalMachine> pms;
    for (int i = 1; i <= n; ++i) {
      PhysicalMachine pm;
      pm.pm_id = i;
      pm.capacity = {static_cast<double>(uniform_int(rng, 4, 16)),
                     static_cast<double>(uniform_int(rng, 4, 16)),
                     static_cast<double>(uniform_int(rng, 100, 1000))};
      pm.max_power = static_cast<double>(uniform_int(rng, 500, 1000));
      pms.push_back(pm);
    }
    ProblemConfig config = part1_config();
    config.protection = Resources::uniform(0.75);

    DatacenterState state(pms, config.protection);
    std::vector<int> ids;
    for (int id = 1; id <= m; ++id) {
      VirtualMachine vm;
      vm.vm_id = id;
      vm.demand = {static_cast<double>(uniform_int(rng, 1, 8)),
                   static_cast<double>(uniform_int(rng, 1, 8)),
                   static_cast<double>(uniform_int(rng, 10, 500))};
      vm.utilization = {uniform_real(rng, 0.0, 1.0), uniform_real(rng, 0.0, 1.0),
                        uniform_real(rng, 0.0, 1.0)};
      vm.revenue = uniform_real(rng, 0.1, 1.5);
      vm.sla = static_cast<int>(uniform_int(rng, 1, config.s));
      state.create_vm(vm);
      ids.push_back(id);
    }

    // (b) every online heuristic lands inside the feasible set
    for (Heuristic h : {Heuristic::FirstFit, Heuristic::BestFit, Heuristic::WorstFit,
                        Heuristic::FirstFitDecreasing, Heuristic::BestFitDecreasing}) {
      DatacenterState probe = state;
      place_batch(probe, ids, h, config);
      check(validate_placement(probe, config).empty(),
            "heuristic placement violates constraints");
    }

    // incumbent for the search
    place_batch(state, ids, Heuristic::FirstFit, config);

    // exhaustive enumeration through the reference evaluation path
    std::array<double, 3> best;
    best.fill(std::numeric_limits<double>::infinity());
    const ScalarMethod methods[3] = {ScalarMethod::WeightedSum, ScalarMethod::Euclidean,
                                     ScalarMethod::Chebyshev};
    std::vector<int> genes(static_cast<std::size_t>(m), 0);
    long total = 1;
    for (int j = 0; j < m; ++j) total *= n + 1;
    for (long code = 0; code < total; ++code) {
      long rest = code;
      Placement p;
      for (int j = 0; j < m; ++j) {
        const int g = static_cast<int>(rest % (n + 1));
        rest /= n + 1;
        p[ids[static_cast<std::size_t>(j)]] =
            g == 0 ? VmLocation::federated() : VmLocation::on_pm(g);
      }
      DatacenterState probe = state;
      probe.reset_placement(p);
      if (!validate_placement(probe, config).empty()) continue;
      const ObjectiveVector vec = evaluate_objectives(probe, config);
      for (int k = 0; k < 3; ++k)
        best[k] = std::min(best[k], scalarize(vec, methods[k], config.ws_weights));
    }

    for (int k = 0; k < 3; ++k) {
      ProblemConfig solver_config = config;
      solver_config.scalarizer = methods[k];
      MaParams params;
      params.population_size = 50;
      params.generations = 200;
      params.rng_seed = mix_seed(static_cast<std::uint64_t>(instance), k);
      const MaResult result = evolve(state, params, solver_config);
      check(result.cost >= best[k] - 1e-9, "search beat the exhaustive optimum (oracle bug)");
      ++ma_runs;
      if (result.cost <= best[k] + 1e-9) ++ma_hits;
    }
  }
  const double hit_rate = static_cast<double>(ma_hits) / ma_runs;
  std::printf("    optimum attained in %d/%d runs (%.1f%%)\n", ma_hits, ma_runs,
              100.0 * hit_rate);
  check(hit_rate >= 0.95, "memetic search missed the exhaustive optimum too often");
}

// ---------------------------------------------------------------------------
// 2. offline search dominates every online heuristic (direction check)
// ---------------------------------------------------------------------------

void criterion_offline_dominates() {
  const ProblemConfig config = part1_config();
  const auto pms = builtin_fleet("part1");
  struct Workload {
    const char* name;
    LegacyParams params;
  };
  std::vector<Workload> workloads;
  for (auto [name, kind, lambda] :
       {std::tuple{"poisson10", LegacyKind::Poisson, 10.0},
        std::tuple{"poisson50", LegacyKind::Poisson, 50.0},
        std::tuple{"poisson70", LegacyKind::Poisson, 70.0},
        std::tuple{"uniform", LegacyKind::Uniform, 0.0}}) {
    LegacyParams p;
    p.kind = kind;
    p.lambda = lambda;
    p.duration = 100;
    p.num_vms = 100;
    p.rng_seed = 42;
    workloads.push_back({name, p});
  }

  for (const auto& w : workloads) {
    const auto trace = legacy_workload(w.params);
    std::map<std::string, double> heuristic_cost;
    for (auto [label, algo] :
         {std::pair{"ff", Algo::FirstFit}, std::pair{"bf", Algo::BestFit},
          std::pair{"wf", Algo::WorstFit}, std::pair{"ffd", Algo::FirstFitDecreasing},
          std::pair{"bfd", Algo::BestFitDecreasing}}) {
      const auto run = run_simulation(trace, pms, config, part1_ma(1), algo, {});
      heuristic_cost[label] = scenario_average(run);
    }
    double ma_sum = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const auto run = run_simulation(trace, pms, config, part1_ma(seed), Algo::Memetic, {});
      ma_sum += scenario_average(run);
    }
    const double ma_mean = ma_sum / 10.0;
    std::printf("    %-10s ma=%.4f", w.name, ma_mean);
    for (const auto& [label, cost] : heuristic_cost)
      std::printf(" %s=%.4f", label.c_str(), cost);
    std::printf("\n");
    for (const auto& [label, cost] : heuristic_cost)
      check(ma_mean <= cost + 1e-12,
            std::string("offline search lost to ") + label + " on " + w.name);
  }
}

// ---------------------------------------------------------------------------
// 3. normalization range and scalarizer ordering under fuzzing
// ---------------------------------------------------------------------------

void criterion_normalization() {
  RngEngine rng(33);
  const std::vector<double> unit{1.0, 1.0, 1.0, 1.0};
  int states = 0;
  for (int trial = 0; trial < 100000; ++trial) {
    const int n = static_cast<int>(uniform_int(rng, 1, 3));
    std::vector<PhysicalMachine> pms;
    for (int i = 1; i <= n; ++i) {
      PhysicalMachine pm;
      pm.pm_id = i;
      pm.capacity = {static_cast<double>(uniform_int(rng, 2, 32)),
                     static_cast<double>(uniform_int(rng, 2, 32)),
                     static_cast<double>(uniform_int(rng, 50, 2000))};
      pm.max_power = static_cast<double>(uniform_int(rng, 100, 2000));
      pms.push_back(pm);
    }
    ProblemConfig config;
    config.objective_set =
        (trial & 1) == 0 ? ObjectiveSet::PartI : ObjectiveSet::PartII;
    config.s = 5;
    DatacenterState state(pms, Resources::uniform(uniform_real(rng, 0.0, 1.0)));
    const int m = static_cast<int>(uniform_int(rng, 0, 6));
    for (int id = 1; id <= m; ++id) {
      VirtualMachine vm;
      vm.vm_id = id;
      vm.demand = {static_cast<double>(uniform_int(rng, 0, 16)),
                   static_cast<double>(uniform_int(rng, 0, 16)),
                   static_cast<double>(uniform_int(rng, 0, 1000))};
      vm.utilization = {uniform_real(rng, 0.0, 1.0), uniform_real(rng, 0.0, 1.0),
                        uniform_real(rng, 0.0, 1.0)};
      vm.revenue = uniform_real(rng, 0.0, 2.0);
      vm.sla = static_cast<int>(uniform_int(rng, 1, 5));
      state.create_vm(vm);
      // deliberately unchecked: fuzzing covers oversubscribed states too
      const int g = static_cast<int>(uniform_int(rng, 0, n));
      state.assign(id, g == 0 ? VmLocation::federated() : VmLocation::on_pm(g));
    }
    const ObjectiveVector vec =
        evaluate_objectives(state, config, uniform_real(rng, 0.0, 50.0));
    for (double f : vec.norm)
      check(f >= 0.0 && f <= 1.0, "normalized objective left the unit interval");

    const double cd = scalarize(vec, ScalarMethod::Chebyshev, unit);
    const double ed = scalarize(vec, ScalarMethod::Euclidean, unit);
    const double l1 = scalarize(vec, ScalarMethod::WeightedSum, unit);
    check(cd <= ed + 1e-12 && ed <= l1 + 1e-12, "norm ordering max <= l2 <= l1 broke");

    ObjectiveVector bumped = vec;
    const int i = static_cast<int>(uniform_int(rng, 0, 3));
    bumped.norm[static_cast<std::size_t>(i)] =
        std::min(1.0, bumped.norm[static_cast<std::size_t>(i)] + uniform_real(rng, 0.0, 0.5));
    for (ScalarMethod mth :
         {ScalarMethod::WeightedSum, ScalarMethod::Euclidean, ScalarMethod::Chebyshev})
      check(scalarize(vec, mth, unit) <= scalarize(bumped, mth, unit) + 1e-12,
            "scalarizer is not monotone");
    ++states;
  }
  std::printf("    %d fuzzed states checked\n", states);
}

// ---------------------------------------------------------------------------
// 4. constraint suite
// ---------------------------------------------------------------------------

void criterion_constraints() {
  // every simulated step is validated (validate_each_step is on by default
  // and any breach throws); run one representative simulation per mode
  const auto trace = legacy_workload({LegacyKind::Poisson, 10.0, 100, 100, 7});
  const auto pms = builtin_fleet("part1");
  ProblemConfig p1 = part1_config();
  run_simulation(trace, pms, p1, part1_ma(3), Algo::FirstFitDecreasing, {});
  run_simulation(trace, pms, p1, part1_ma(3), Algo::Memetic, {});
  GeneratorParams gen = part2_scenarios()[0];
  gen.duration = 60;
  ProblemConfig p2 = part2_config();
  p2.vmpr_period = 10;
  run_simulation(generate(gen), builtin_fleet("high"), p2, part2_ma(3), Algo::TwoPhase, {});

  // an injected violation must be detected
  DatacenterState state(builtin_fleet("part1"), p1.protection);
  VirtualMachine a, b;
  a.vm_id = 1;
  a.demand = {6, 4, 100};
  a.utilization = Resources::uniform(1.0);
  b = a;
  b.vm_id = 2;
  state.create_vm(a);
  state.create_vm(b);
  state.assign(1, VmLocation::on_pm(1));
  state.assign(2, VmLocation::on_pm(1));  // 12 ECU on an 8 ECU machine
  const auto violations = validate_placement(state, p1);
  check(!violations.empty(), "an injected oversubscription went undetected");
  check(violations.front().type == Violation::Type::CapacityViolation,
        "wrong violation type reported");
  std::printf("    3 simulations step-validated; injected violation detected\n");
}

// ---------------------------------------------------------------------------
// 5. trace generator conformance
// ---------------------------------------------------------------------------

void criterion_tracegen() {
  // (a) constant environment: steady per-service count, full utilization
  GeneratorParams steady;
  steady.duration = 10;
  steady.num_services = 2;
  steady.max_vms_per_service = 5;
  steady.instance_types = {{"m1", 6, 8, 450}};
  steady.horizontal_elasticity = Pdf::uniform(5, 5);
  steady.vertical_elasticity = Pdf::uniform(1, 1);
  steady.server_util = Pdf::uniform(100, 100);
  steady.network_util = Pdf::uniform(100, 100);
  const auto trace = generate(steady);
  check(!trace.empty(), "steady trace is empty");
  std::map<std::pair<int, int>, int> per_service;
  for (const auto& e : trace) {
    check(e.u_cpu == 100.0 && e.u_ram == 100.0 && e.u_net == 100.0,
          "utilization drifted in a no-overbooking environment");
    per_service[{e.service, e.t}]++;
  }
  for (const auto& [key, count] : per_service)
    check(count == 5, "per-service VM count drifted in a no-elasticity environment");

  // (b) emitted files round-trip
  check(parse_csv(write_csv(trace)) == trace, "steady trace did not round-trip");
  const auto elastic = generate(part2_scenarios()[5]);
  check(parse_csv(write_csv(elastic)) == elastic, "elastic trace did not round-trip");
  const auto legacy = legacy_workload({LegacyKind::Poisson, 10.0, 100, 100, 1});
  check(parse_csv(write_csv(legacy)) == legacy, "legacy trace did not round-trip");

  // (c) the documented sample row
  const auto sample_row = parse_csv("0,0,0,0,6,8,450,100,100,100,0.065,0.016,0.179,0,1");
  check(sample_row.size() == 1, "sample row count");
  const TraceEvent& e = sample_row[0];
  check(e.t == 0 && e.service == 0 && e.datacenter == 0 && e.vm == 0, "sample row ids");
  check(e.cpu == 6 && e.ram == 8 && e.net == 450, "sample row resources");
  check(e.u_cpu == 100 && e.u_ram == 100 && e.u_net == 100, "sample row utilization");
  check(e.r_cpu == 0.065 && e.r_ram == 0.016 && e.r_net == 0.179, "sample row rates");
  check(e.t_init == 0 && e.t_end == 1, "sample row lifetime");

  // (d) Poisson sampling quality
  RngEngine rng(55);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) sum += sample_poisson(rng, 10.0);
  const double mean = sum / n;
  std::printf("    poisson(10) sample mean over 1e5 draws: %.4f\n", mean);
  check(std::abs(mean - 10.0) <= 0.1, "poisson sample mean out of tolerance");
}

// ---------------------------------------------------------------------------
// 6. two-phase no-regression
// ---------------------------------------------------------------------------

void criterion_two_phase() {
  const auto scenarios = part2_scenarios();
  const auto pms = builtin_fleet("high");
  std::vector<double> two_phase_costs, ivmp_costs;
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    const auto trace = generate(scenarios[i]);
    ProblemConfig config = part2_config();
    RunOptions options;
    options.ivmp_heuristic = Heuristic::BestFitDecreasing;
    const auto reconfigured =
        run_simulation(trace, pms, config, part2_ma(10 + i), Algo::TwoPhase, options);
    ProblemConfig plain = config;
    plain.vmpr_period = 0;
    const auto online =
        run_simulation(trace, pms, plain, part2_ma(10 + i), Algo::BestFitDecreasing, options);
    two_phase_costs.push_back(scenario_average(reconfigured));
    ivmp_costs.push_back(scenario_average(online));

    if (i == 0) {
      // a disabled trigger must reproduce the online run bit for bit
      const auto disabled =
          run_simulation(trace, pms, plain, part2_ma(10 + i), Algo::TwoPhase, options);
      check(disabled.steps == online.steps, "disabled reconfiguration diverged");
      check(disabled.final_placement == online.final_placement,
            "disabled reconfiguration placement diverged");
      check(disabled.migration_count == 0, "disabled reconfiguration migrated");
    }
  }
  const double reconf_mean = cross_scenario_average(two_phase_costs);
  const double online_mean = cross_scenario_average(ivmp_costs);
  std::printf("    cross-scenario mean: two-phase=%.5f pure-online=%.5f\n", reconf_mean,
              online_mean);
  check(reconf_mean <= online_mean + 1e-12, "two-phase regressed below the online baseline");
}

// ---------------------------------------------------------------------------
// 7. scalarization comparison harness
// ---------------------------------------------------------------------------

void criterion_scalarization() {
  const auto scenarios = part2_scenarios();
  const ScalarMethod methods[3] = {ScalarMethod::WeightedSum, ScalarMethod::Euclidean,
                                   ScalarMethod::Chebyshev};
  std::vector<MethodResult> results;
  std::map<std::string, std::array<double, 4>> overall_norm;
  for (ScalarMethod method : methods) {
    MethodResult res;
    res.method = std::string("bfd-") + to_string(method);
    res.objective_set = "part2";
    std::array<double, 4> norm_sum{};
    int runs = 0;
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
      for (const char* load : {"low", "high"}) {
        const auto trace = generate(scenarios[i]);
        ProblemConfig config = part2_config();
        config.scalarizer = method;
        const auto run = run_simulation(trace, builtin_fleet(load), config,
                                        part2_ma(100 + i), Algo::TwoPhase, {});
        MethodScenario sc;
        sc.scenario = "s" + std::to_string(i);
        sc.load = load;
        sc.mean_cost = scenario_average(run);
        sc.mean_raw = mean_raw_of(run);
        sc.mean_norm = mean_norm_of(run);
        for (std::size_t k = 0; k < 4; ++k) norm_sum[k] += sc.mean_norm[k];
        ++runs;
        res.scenarios.push_back(sc);
      }
    }
    for (std::size_t k = 0; k < 4; ++k) norm_sum[k] /= runs;
    overall_norm[res.method] = norm_sum;
    results.push_back(std::move(res));
  }

  const auto tables = build_report(results);
  const fs::path outdir = fs::temp_directory_path() / "vmplace_acceptance" / "scalarization";
  for (const auto& t : tables) {
    atomic_write_file(outdir / ("report_" + t.name + ".txt"), t.to_text());
    atomic_write_file(outdir / ("report_" + t.name + ".csv"), t.to_csv());
  }
  std::printf("    comparison tables written to %s\n", outdir.string().c_str());

  // mutual dominance check of the methods' average outcomes (reported only;
  // which method wins is workload-dependent)
  for (const auto& [ma, va] : overall_norm)
    for (const auto& [mb, vb] : overall_norm) {
      if (ma == mb) continue;
      if (pareto_dominates(va, vb))
        std::printf("    %s dominates %s on average objectives\n", ma.c_str(), mb.c_str());
    }
  std::string best;
  double best_cost = std::numeric_limits<double>::infinity();
  for (const auto& r : results)
    if (r.cross_mean() < best_cost) {
      best_cost = r.cross_mean();
      best = r.method;
    }
  std::printf("    lowest cross-scenario mean: %s (%.5f)\n", best.c_str(), best_cost);

  // the dominance checker itself must be a strict partial order
  RngEngine rng(77);
  for (int trial = 0; trial < 10000; ++trial) {
    const std::array<double, 4> a{uniform01(rng), uniform01(rng), uniform01(rng), uniform01(rng)};
    const std::array<double, 4> b{uniform01(rng), uniform01(rng), uniform01(rng), uniform01(rng)};
    const std::array<double, 4> c{uniform01(rng), uniform01(rng), uniform01(rng), uniform01(rng)};
    check(!pareto_dominates(a, a), "dominance is not irreflexive");
    if (pareto_dominates(a, b)) {
      check(!pareto_dominates(b, a), "dominance is not asymmetric");
      check(preferred(a, b) == Preference::First, "dominance does not imply preference");
    }
    if (pareto_dominates(a, b) && pareto_dominates(b, c))
      check(pareto_dominates(a, c), "dominance is not transitive");
  }
}

// ---------------------------------------------------------------------------
// 8. weight derivation
// ---------------------------------------------------------------------------

void criterion_weights() {
  // the stock configuration ships the reference weights
  const ProblemConfig stock;
  const std::vector<double> reference{1.3903, 2.1379, 2.7393, 1.4586};
  check(stock.ws_weights == reference, "stock weighted-sum weights changed");

  // 1000 sampled feasible solutions of a loaded snapshot
  ProblemConfig config = part1_config();
  const auto trace = legacy_workload({LegacyKind::Poisson, 10.0, 100, 100, 11});
  const auto pms = builtin_fleet("part1");
  DatacenterState state(pms, config.protection);
  std::vector<int> ids;
  for (const auto& e : trace) {
    if (e.t_init != e.t || state.alive(e.vm)) continue;
    VirtualMachine vm;
    vm.vm_id = e.vm;
    vm.demand = e.resources();
    vm.utilization = e.utilization_ratio();
    vm.revenue_rate = e.rates();
    vm.revenue = e.revenue();
    vm.sla = e.sla;
    state.create_vm(vm);
    ids.push_back(e.vm);
  }
  place_batch(state, ids, Heuristic::FirstFit, config);
  MaInstance inst(state, config);
  RngEngine rng(88);
  std::vector<ObjectiveVector> samples;
  for (int k = 0; k < 1000; ++k) {
    Chromosome c;
    for (int j = 0; j < inst.vm_count(); ++j)
      c.genes.push_back(static_cast<int>(uniform_int(rng, 0, inst.pm_count())));
    samples.push_back(inst.objectives_of(repair(std::move(c), inst)));
  }
  const auto weights = derive_ws_weights(samples);
  std::printf("    derived weights: %.4f %.4f %.4f %.4f\n", weights[0], weights[1], weights[2],
              weights[3]);
  std::array<double, 4> col{};
  for (const auto& s : samples)
    for (std::size_t i = 0; i < 4; ++i) col[i] += s.norm[i];
  for (std::size_t i = 0; i < 4; ++i) {
    check(weights[i] > 0.0 && std::isfinite(weights[i]), "weights must be positive and finite");
    check(std::abs(weights[i] * col[i] - 1000.0) < 1e-6, "weight identity w*sum == N broke");
  }
}

// ---------------------------------------------------------------------------
// 9. command determinism
// ---------------------------------------------------------------------------

std::uint64_t hash_file(const fs::path& p) {
  const std::string data = read_file(p);
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

void run_cli(const std::string& args) {
  const std::string cmd = "\"" + cli_path + "\" " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  check(rc == 0, "command failed: " + cmd);
}

std::map<std::string, std::uint64_t> hash_dir(const fs::path& dir) {
  std::map<std::string, std::uint64_t> out;
  for (const auto& entry : fs::recursive_directory_iterator(dir))
    if (entry.is_regular_file())
      out[fs::relative(entry.path(), dir).string()] = hash_file(entry.path());
  return out;
}

void criterion_determinism() {
  check(!cli_path.empty() && fs::exists(cli_path), "cli binary not found: " + cli_path);
  check(!configs_path.empty() && fs::exists(configs_path),
        "configs directory not found: " + configs_path);
  const fs::path base = fs::temp_directory_path() / "vmplace_acceptance" / "determinism";
  fs::remove_all(base);
  const fs::path cfg = configs_path;

  // both passes run the byte-identical command lines into the same directory
  auto pass = [&](const fs::path& dir) {
    fs::create_directories(dir);
    run_cli("gen-trace --config " + (cfg / "trace_w1.json").string() + " --seed 5 --out " +
            (dir / "w1.csv").string());
    run_cli("gen-trace --config " + (cfg / "trace_part2.json").string() + " --seed 5 --out " +
            (dir / "p2.csv").string());
    run_cli("run --config " + (cfg / "part1.json").string() + " --trace " +
            (dir / "w1.csv").string() + " --algo ffd --seed 3 --out " +
            (dir / "ffd").string());
    run_cli("run --config " + (cfg / "part1.json").string() + " --trace " +
            (dir / "w1.csv").string() + " --algo ma --seed 3 --seeds 2 --out " +
            (dir / "ma").string());
    run_cli("run --config " + (cfg / "part2.json").string() + " --trace " +
            (dir / "p2.csv").string() + " --algo two-phase --seed 3 --t-max 60 --out " +
            (dir / "tp").string());
    run_cli("compare --out " + (dir / "cmp").string() + " " +
            (dir / "ffd" / "summary_ffd-ws_seed3.json").string() + " " +
            (dir / "ma" / "summary_ma-ws_mean.json").string());
  };
  const fs::path dir = base / "out";
  pass(dir);
  const auto ha = hash_dir(dir);
  fs::remove_all(dir);
  pass(dir);
  const auto hb = hash_dir(dir);
  check(ha == hb, "re-running identical commands produced different bytes");
  check(ha.size() >= 12, "determinism pass produced too few artifacts");
  std::printf("    %zu artifacts byte-identical across reruns\n", ha.size());
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) cli_path = argv[1];
  if (argc > 2) configs_path = argv[2];

  struct Criterion {
    int id;
    const char* name;
    std::function<void()> fn;
  };
  const std::vector<Criterion> criteria = {
      {1, "brute-force optimality oracle", criterion_optimality},
      {2, "offline search dominates online heuristics", criterion_offline_dominates},
      {3, "normalization range and scalarizer ordering", criterion_normalization},
      {4, "constraint suite", criterion_constraints},
      {5, "trace generator conformance", criterion_tracegen},
      {6, "two-phase no-regression", criterion_two_phase},
      {7, "scalarization comparison harness", criterion_scalarization},
      {8, "weight derivation", criterion_weights},
      {9, "command determinism", criterion_determinism},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::string error;
    try {
      c.fn();
    } catch (const std::exception& e) {
      error = e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (error.empty()) {
      std::printf("PASS  criterion %d: %s [%.1fs]\n", c.id, c.name, secs);
    } else {
      std::printf("FAIL  criterion %d: %s [%.1fs] - %s\n", c.id, c.name, secs, error.c_str());
      ++failures;
    }
    std::fflush(stdout);
  }
  if (failures == 0)
    std::printf("all %zu acceptance criteria passed\n", criteria.size());
  else
    std::printf("%d acceptance criteria FAILED\n", failures);
  return failures;
}
