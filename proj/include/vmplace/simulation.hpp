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
// Discrete-time simulation over a workload trace. Three modes share one
// step loop:
//   - a pure online heuristic (ff / bf / wf / ffd / bfd),
//   - per-step memetic re-optimization with migrations ("ma"),
//   - the two-phase scheme: an online heuristic every step plus a periodic
//     reconfiguration computed on a snapshot and merged D steps later.
//
// Step order (fixed reference semantics): merge a due reconfiguration ->
// departures and in-place updates -> arrivals and forced re-placements ->
// record objectives -> trigger. Running the reconfiguration inline or on a
// background thread yields bit-identical results; the toggle exists so that
// equivalence is testable.

#ifndef VMPLACE_SIMULATION_HPP
#define VMPLACE_SIMULATION_HPP

#include <chrono>
#include <future>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vmplace/core.hpp"
#include "vmplace/heuristics.hpp"
#include "vmplace/memetic.hpp"
#include "vmplace/migration.hpp"
#include "vmplace/objectives.hpp"
#include "vmplace/trace.hpp"

namespace vmp {

enum class Algo {
  FirstFit,
  BestFit,
  WorstFit,
  FirstFitDecreasing,
  BestFitDecreasing,
  Memetic,
  TwoPhase,
};

inline std::optional<Algo> parse_algo(std::string_view s) {
  if (auto h = parse_heuristic(s)) {
    switch (*h) {
      case Heuristic::FirstFit: return Algo::FirstFit;
      case Heuristic::BestFit: return Algo::BestFit;
      case Heuristic::WorstFit: return Algo::WorstFit;
      case Heuristic::FirstFitDecreasing: return Algo::FirstFitDecreasing;
      case Heuristic::BestFitDecreasing: return Algo::BestFitDecreasing;
    }
  }
  if (s == "ma") return Algo::Memetic;
  if (s == "two-phase") return Algo::TwoPhase;
  return std::nullopt;
}

inline const char* to_string(Algo a) {
  switch (a) {
    case Algo::FirstFit: return "ff";
    case Algo::BestFit: return "bf";
    case Algo::WorstFit: return "wf";
    case Algo::FirstFitDecreasing: return "ffd";
    case Algo::BestFitDecreasing: return "bfd";
    case Algo::Memetic: return "ma";
    case Algo::TwoPhase: return "two-phase";
  }
  return "?";
}

/// A placement produced by a solver broke a constraint; this is a bug trap,
/// not an input error.
struct SimulationInvariantError : std::logic_error {
  using std::logic_error::logic_error;
};

struct RunOptions {
  int t_max = -1;  // < 0: derived from the trace (max t_end)
  Heuristic ivmp_heuristic = Heuristic::BestFitDecreasing;  // two-phase online phase
  bool validate_each_step = true;
  bool vmpr_async = false;  // compute reconfigurations on a background thread
};

struct StepRecord {
  int t = 0;
  ObjectiveVector obj;
  double scalar = 0.0;
  int alive_vms = 0;
  int powered_pms = 0;
  double mean_vm_cpu_util = 0.0;  // recording view, includes migration overlay
  bool vmpr_adopted = false;

  friend bool operator==(const StepRecord&, const StepRecord&) = default;
};

struct SimulationRun {
  std::vector<StepRecord> steps;
  long long migration_count = 0;  // reconfiguration-adopted moves only
  double migration_gb = 0.0;
  double ivmp_wall_ms = 0.0;
  double vmpr_wall_ms = 0.0;
  std::vector<std::vector<double>> convergence;  // best cost per generation, per evolve
  Placement final_placement;
};

/// Periodic trigger: fires at every positive multiple of the period.
inline bool vmpr_trigger(int t, const ProblemConfig& config) {
  return config.vmpr_period > 0 && t > 0 && t % config.vmpr_period == 0;
}

/// Joins a finished reconfiguration with the live state. VMs that arrived
/// after the snapshot keep their current location; VMs destroyed since then
/// drop out; reconfigured VMs take their new location when it still passes
/// admission alongside everything merged so far, falling back to their
/// current location, then best-fit, then federation. Never fails.
inline Placement merge_placement(const Placement& reconfigured, const DatacenterState& current,
                                 const ProblemConfig& config) {
  DatacenterState scratch(current.pms(), current.protection());
  scratch.set_clock(current.clock());
  for (const auto& [id, vm] : current.vms()) scratch.create_vm(vm);

  for (const auto& [id, loc] : current.placement())
    if (!reconfigured.count(id)) scratch.assign(id, loc);

  for (const auto& [id, target] : reconfigured) {
    if (!current.alive(id)) continue;
    const VirtualMachine& vm = scratch.vm(id);
    if (!target.is_on_pm() || scratch.fits_on(target.pm_id, vm)) {
      scratch.assign(id, target);
      continue;
    }
    const VmLocation cur = current.placement().at(id);
    if (!cur.is_on_pm() || scratch.fits_on(cur.pm_id, vm)) {
      scratch.assign(id, cur);
      continue;
    }
    scratch.assign(id, locate_best_fit(scratch, vm, config));
  }
  return scratch.placement();
}

/// Objectives of a candidate placement against the live VM set, without
/// touching the state.
inline ObjectiveVector evaluate_candidate(const DatacenterState& state,
                                          const Placement& candidate,
                                          const ProblemConfig& config, double reconfig_gb) {
  std::vector<const VirtualMachine*> vms;
  std::vector<VmLocation> locs;
  vms.reserve(state.vms().size());
  locs.reserve(state.vms().size());
  for (const auto& [id, vm] : state.vms()) {
    vms.push_back(&vm);
    auto it = candidate.find(id);
    locs.push_back(it == candidate.end() ? VmLocation::rejected() : it->second);
  }
  const ObjectiveBounds bounds = detail::bounds_impl(state.pms(), vms, config);
  EvalScratch scratch;
  return evaluate_flat(state.pms(), vms, locs, bounds, config, reconfig_gb, nullptr, scratch);
}

struct AdoptOutcome {
  bool adopted = false;
  MigrationPlan plan;
  double candidate_cost = 0.0;
  double current_cost = 0.0;
};

/// Adopts the candidate iff its scalarized cost — charging the migration
/// objective to the candidate and none to the incumbent — is strictly lower.
/// On adoption all moves are applied atomically.
inline AdoptOutcome adopt_if_better(const Placement& candidate, DatacenterState& state,
                                    const ProblemConfig& config) {
  AdoptOutcome out;
  out.plan = build_migration_plan(state.placement(), candidate, state);
  const double f4 =
      config.objective_set == ObjectiveSet::PartII ? out.plan.max_pair_ram() : 0.0;
  out.candidate_cost = scalarize(evaluate_candidate(state, candidate, config, f4), config);
  out.current_cost = scalarize(evaluate_objectives(state, config, 0.0), config);
  if (out.candidate_cost < out.current_cost) {
    state.reset_placement(candidate);
    out.adopted = true;
  }
  return out;
}

namespace detail {

inline VirtualMachine vm_from_event(const TraceEvent& e) {
  VirtualMachine vm;
  vm.vm_id = e.vm;
  vm.service_id = e.service;
  vm.datacenter_id = e.datacenter;
  vm.demand = e.resources();
  vm.utilization = e.utilization_ratio();
  vm.revenue_rate = e.rates();
  vm.revenue = e.revenue();
  vm.sla = e.sla;
  vm.t_init = e.t_init;
  vm.t_end = e.t_end;
  return vm;
}

struct TimedMaResult {
  MaResult result;
  double wall_ms = 0.0;
};

inline TimedMaResult timed_evolve(const DatacenterState& snapshot, MaParams params,
                                  const ProblemConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  TimedMaResult out{evolve(snapshot, params, config), 0.0};
  out.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - start)
                    .count();
  return out;
}

}  // namespace detail

inline SimulationRun run_simulation(std::vector<TraceEvent> trace,
                                    const std::vector<PhysicalMachine>& pms,
                                    const ProblemConfig& config, const MaParams& ma_params,
                                    Algo algo, const RunOptions& options = {}) {
  config.validate();
  std::sort(trace.begin(), trace.end(), [](const TraceEvent& a, const TraceEvent& b) {
    if (a.t != b.t) return a.t < b.t;
    return a.vm < b.vm;
  });

  int t_max = options.t_max;
  if (t_max < 0) {
    t_max = 0;
    for (const auto& e : trace) t_max = std::max({t_max, e.t_end, e.t + 1});
  }

  std::vector<std::vector<const TraceEvent*>> by_step(static_cast<std::size_t>(t_max));
  for (const auto& e : trace)
    if (e.t >= 0 && e.t < t_max) by_step[static_cast<std::size_t>(e.t)].push_back(&e);

  Heuristic online = options.ivmp_heuristic;
  switch (algo) {
    case Algo::FirstFit: online = Heuristic::FirstFit; break;
    case Algo::BestFit: online = Heuristic::BestFit; break;
    case Algo::WorstFit: online = Heuristic::WorstFit; break;
    case Algo::FirstFitDecreasing: online = Heuristic::FirstFitDecreasing; break;
    case Algo::BestFitDecreasing: online = Heuristic::BestFitDecreasing; break;
    case Algo::Memetic: online = Heuristic::BestFitDecreasing; break;
    case Algo::TwoPhase: break;
  }

  struct Job {
    int t0 = 0;
    int due = 0;
    bool async = false;
    detail::TimedMaResult ready;
    std::future<detail::TimedMaResult> pending;
  };
  std::optional<Job> job;

  DatacenterState state(pms, config.protection);
  SimulationRun run;
  run.steps.reserve(static_cast<std::size_t>(t_max));
  const auto run_start = std::chrono::steady_clock::now();

  for (int t = 0; t < t_max; ++t) {
    state.set_clock(t);
    std::set<int> bumped;
    bool adopted = false;
    double adopted_gb = 0.0;

    // 1. merge a due reconfiguration and adopt it when strictly better
    if (job && job->due == t) {
      detail::TimedMaResult timed =
          job->async ? job->pending.get() : std::move(job->ready);
      run.vmpr_wall_ms += timed.wall_ms;
      run.convergence.push_back(std::move(timed.result.best_cost_per_generation));
      const Placement merged = merge_placement(timed.result.placement, state, config);
      const AdoptOutcome outcome = adopt_if_better(merged, state, config);
#ifdef VMPLACE_DEBUG_ADOPTION
      {
        int fallbacks = 0;
        for (const auto& [id, loc] : timed.result.placement)
          if (state.alive(id) && merged.count(id) && !(merged.at(id) == loc)) ++fallbacks;
        std::fprintf(stderr,
                     "[adopt] t=%d cand=%.5f cur=%.5f adopted=%d moves=%d fallbacks=%d "
                     "snapshot_cost=%.5f\n",
                     t, outcome.candidate_cost, outcome.current_cost, outcome.adopted,
                     outcome.plan.count(), fallbacks, timed.result.cost);
      }
#endif
      if (outcome.adopted) {
        adopted = true;
        adopted_gb = outcome.plan.max_pair_ram();
        run.migration_count += outcome.plan.count();
        run.migration_gb += outcome.plan.total_ram();
        for (const auto& mv : outcome.plan.moves) bumped.insert(mv.vm_id);
      }
      job.reset();
    }

    // 2. departures, then in-place updates (unfit ones queue for re-placement)
    int events = 0;
    {
      std::vector<int> dead;
      for (const auto& [id, vm] : state.vms())
        if (vm.t_end <= t) dead.push_back(id);
      for (int id : dead) {
        VmEvent ev{VmEvent::Kind::Destroy, {}};
        ev.vm.vm_id = id;
        apply_event(state, ev);
        ++events;
      }
    }
    std::vector<int> replace_queue;
    std::vector<int> creations;
    for (const TraceEvent* e : by_step[static_cast<std::size_t>(t)]) {
      if (state.alive(e->vm)) {
        const auto outcome = apply_event(state, {VmEvent::Kind::Update, detail::vm_from_event(*e)});
        if (outcome.needs_replacement) {
          state.unassign(e->vm);
          replace_queue.push_back(e->vm);
        }
        ++events;
      } else {
        apply_event(state, {VmEvent::Kind::Create, detail::vm_from_event(*e)});
        creations.push_back(e->vm);
        ++events;
      }
    }

    // 3. forced re-placements (singletons), then the step's creation batch
    for (int id : replace_queue) place_batch(state, {id}, online, config);
    if (!creations.empty()) place_batch(state, creations, online, config);

    // 3b. per-step offline re-optimization
    if (algo == Algo::Memetic && events > 0 && !state.vms().empty()) {
      MaParams step_params = ma_params;
      step_params.rng_seed = mix_seed(ma_params.rng_seed, static_cast<std::uint64_t>(t));
      const detail::TimedMaResult timed = detail::timed_evolve(state, step_params, config);
      run.vmpr_wall_ms += timed.wall_ms;
      run.convergence.push_back(timed.result.best_cost_per_generation);
      const AdoptOutcome outcome = adopt_if_better(timed.result.placement, state, config);
      if (outcome.adopted) {
        adopted = true;
        adopted_gb = outcome.plan.max_pair_ram();
        run.migration_count += outcome.plan.count();
        run.migration_gb += outcome.plan.total_ram();
        for (const auto& mv : outcome.plan.moves) bumped.insert(mv.vm_id);
      }
    }

    // 4. record
    StepRecord rec;
    rec.t = t;
    rec.obj = evaluate_objectives(state, config, adopted ? adopted_gb : 0.0,
                                  bumped.empty() ? nullptr : &bumped);
    rec.scalar = scalarize(rec.obj, config);
    rec.alive_vms = static_cast<int>(state.vms().size());
    rec.powered_pms = state.powered_on_count();
    rec.vmpr_adopted = adopted;
    if (!state.vms().empty()) {
      double s = 0.0;
      for (const auto& [id, vm] : state.vms()) {
        double u = vm.utilization.cpu();
        if (bumped.count(id)) u = std::min(1.0, u + kMigrationCpuPenalty);
        s += u;
      }
      rec.mean_vm_cpu_util = s / static_cast<double>(state.vms().size());
    }
    run.steps.push_back(rec);

    if (options.validate_each_step) {
      const auto violations = validate_placement(state, config);
      if (!violations.empty())
        throw SimulationInvariantError("t=" + std::to_string(t) + ": " +
                                       violations.front().describe());
    }

    // 5. trigger a reconfiguration on a fresh snapshot
    if (algo == Algo::TwoPhase && vmpr_trigger(t, config) && !job) {
      Job j;
      j.t0 = t;
      j.due = t + config.vmpr_duration;
      j.async = options.vmpr_async;
      MaParams params = ma_params;
      params.rng_seed = mix_seed(ma_params.rng_seed, static_cast<std::uint64_t>(t));
      if (j.async) {
        j.pending = std::async(
            std::launch::async,
            [snapshot = state, params, config]() { return detail::timed_evolve(snapshot, params, config); });
      } else {
        j.ready = detail::timed_evolve(state, params, config);
      }
      job = std::move(j);
    }
  }

  const double total_ms = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - run_start)
                              .count();
  run.ivmp_wall_ms = std::max(0.0, total_ms - run.vmpr_wall_ms);
  run.final_placement = state.placement();
  return run;
}

}  // namespace vmp

#endif  // VMPLACE_SIMULATION_HPP
