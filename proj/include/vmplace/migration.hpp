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

#ifndef VMPLACE_MIGRATION_HPP
#define VMPLACE_MIGRATION_HPP

#include <map>
#include <utility>
#include <vector>

#include "vmplace/core.hpp"

namespace vmp {

/// The PM-to-PM moves that turn one placement into another. Location changes
/// into or out of the federation are placement changes, not migrations, and
/// are excluded (there are no migrations between providers).
struct MigrationPlan {
  struct Move {
    int vm_id;
    int src_pm;
    int dst_pm;
    double ram;  // [GB]
  };
  std::vector<Move> moves;

  int count() const { return static_cast<int>(moves.size()); }

  double total_ram() const {
    double s = 0.0;
    for (const auto& m : moves) s += m.ram;
    return s;
  }

  /// RAM transferred per ordered (source, destination) PM pair.
  std::map<std::pair<int, int>, double> transfer_matrix() const {
    std::map<std::pair<int, int>, double> mt;
    for (const auto& m : moves) mt[{m.src_pm, m.dst_pm}] += m.ram;
    return mt;
  }

  /// Largest single pairwise transfer; all migrations run concurrently over
  /// the management network, so this bounds the reconfiguration time.
  double max_pair_ram() const {
    double best = 0.0;
    for (const auto& [pair, ram] : transfer_matrix())
      if (ram > best) best = ram;
    return best;
  }
};

/// Diffs two placements over the same alive VM set. VMs present in only one
/// of the two maps are ignored.
inline MigrationPlan build_migration_plan(const Placement& from, const Placement& to,
                                          const DatacenterState& state) {
  MigrationPlan plan;
  for (const auto& [vm_id, src] : from) {
    auto it = to.find(vm_id);
    if (it == to.end()) continue;
    const VmLocation& dst = it->second;
    if (!src.is_on_pm() || !dst.is_on_pm() || src.pm_id == dst.pm_id) continue;
    plan.moves.push_back({vm_id, src.pm_id, dst.pm_id, state.vm(vm_id).demand.ram()});
  }
  return plan;
}

}  // namespace vmp

#endif  // VMPLACE_MIGRATION_HPP
