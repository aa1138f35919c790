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
// The five online deterministic placement heuristics. All of them scan the
// PM fleet in some deterministic order and take the first machine that can
// admit the VM; overflow goes to the federation (or rejection below the top
// SLA level when federation is disabled).

#ifndef VMPLACE_HEURISTICS_HPP
#define VMPLACE_HEURISTICS_HPP

#include <algorithm>
#include <numeric>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "vmplace/core.hpp"

namespace vmp {

enum class Heuristic { FirstFit, BestFit, WorstFit, FirstFitDecreasing, BestFitDecreasing };

inline std::optional<Heuristic> parse_heuristic(std::string_view s) {
  if (s == "ff") return Heuristic::FirstFit;
  if (s == "bf") return Heuristic::BestFit;
  if (s == "wf") return Heuristic::WorstFit;
  if (s == "ffd") return Heuristic::FirstFitDecreasing;
  if (s == "bfd") return Heuristic::BestFitDecreasing;
  return std::nullopt;
}

inline const char* to_string(Heuristic h) {
  switch (h) {
    case Heuristic::FirstFit: return "ff";
    case Heuristic::BestFit: return "bf";
    case Heuristic::WorstFit: return "wf";
    case Heuristic::FirstFitDecreasing: return "ffd";
    case Heuristic::BestFitDecreasing: return "bfd";
  }
  return "?";
}

/// Sum of the PM's unutilization ratios over all resources, in [0, r].
/// Idle machines score r; fully used ones score 0.
inline double pm_score(const DatacenterState& state, int pm_id) {
  const Resources u = state.utilization_ratio(pm_id);
  double s = 0.0;
  for (int k = 0; k < kResourceCount; ++k) s += 1.0 - u[k];
  return s;
}

namespace detail {

enum class ScanOrder { ById, ScoreAscending, ScoreDescending };

inline VmLocation locate(const DatacenterState& state, const VirtualMachine& vm,
                         const ProblemConfig& config, ScanOrder order) {
  std::vector<int> ids(state.pms().size());
  std::iota(ids.begin(), ids.end(), 1);
  if (order != ScanOrder::ById) {
    std::vector<double> score(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) score[i] = pm_score(state, ids[i]);
    std::sort(ids.begin(), ids.end(), [&](int a, int b) {
      const double sa = score[a - 1], sb = score[b - 1];
      if (sa != sb) return order == ScanOrder::ScoreAscending ? sa < sb : sa > sb;
      return a < b;  // tie: lower pm id
    });
  }
  for (int pm_id : ids)
    if (state.fits_on(pm_id, vm)) return VmLocation::on_pm(pm_id);
  if (config.federation_enabled) return VmLocation::federated();
  if (vm.sla < config.s) return VmLocation::rejected();
  throw InfeasibleError("vm " + std::to_string(vm.vm_id) +
                        " has the top SLA level, fits on no PM, and federation is disabled");
}

}  // namespace detail

/// Lowest-id PM that can admit the VM.
inline VmLocation locate_first_fit(const DatacenterState& state, const VirtualMachine& vm,
                                   const ProblemConfig& config) {
  return detail::locate(state, vm, config, detail::ScanOrder::ById);
}

/// PMs scanned by ascending unutilization score (most utilized first).
inline VmLocation locate_best_fit(const DatacenterState& state, const VirtualMachine& vm,
                                  const ProblemConfig& config) {
  return detail::locate(state, vm, config, detail::ScanOrder::ScoreAscending);
}

/// PMs scanned by descending unutilization score (least utilized first).
inline VmLocation locate_worst_fit(const DatacenterState& state, const VirtualMachine& vm,
                                   const ProblemConfig& config) {
  return detail::locate(state, vm, config, detail::ScanOrder::ScoreDescending);
}

/// Single-VM scan order of each heuristic (the decreasing variants reuse
/// their base heuristic's order).
inline VmLocation locate(const DatacenterState& state, const VirtualMachine& vm,
                         const ProblemConfig& config, Heuristic h) {
  switch (h) {
    case Heuristic::FirstFit:
    case Heuristic::FirstFitDecreasing:
      return locate_first_fit(state, vm, config);
    case Heuristic::BestFit:
    case Heuristic::BestFitDecreasing:
      return locate_best_fit(state, vm, config);
    case Heuristic::WorstFit:
      return locate_worst_fit(state, vm, config);
  }
  throw ConfigError("unknown heuristic");
}

/// Places a batch of already-created VMs, mutating the state as it goes so
/// each placement sees the loads left by the previous one. The decreasing
/// variants order the batch by CPU request descending (tie: lower vm id);
/// the others keep vm id order. Returns the chosen locations.
inline std::vector<std::pair<int, VmLocation>> place_batch(DatacenterState& state,
                                                           std::vector<int> vm_ids, Heuristic h,
                                                           const ProblemConfig& config) {
  const bool decreasing =
      h == Heuristic::FirstFitDecreasing || h == Heuristic::BestFitDecreasing;
  if (decreasing) {
    std::sort(vm_ids.begin(), vm_ids.end(), [&](int a, int b) {
      const double ca = state.vm(a).demand.cpu(), cb = state.vm(b).demand.cpu();
      if (ca != cb) return ca > cb;
      return a < b;
    });
  } else {
    std::sort(vm_ids.begin(), vm_ids.end());
  }
  std::vector<std::pair<int, VmLocation>> out;
  out.reserve(vm_ids.size());
  for (int vm_id : vm_ids) {
    const VmLocation loc = locate(state, state.vm(vm_id), config, h);
    state.assign(vm_id, loc);
    out.emplace_back(vm_id, loc);
  }
  return out;
}

}  // namespace vmp

#endif  // VMPLACE_HEURISTICS_HPP
