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
// Objective functions of both formulations, their normalization bounds, and
// the three scalarization methods.
//
// Active objective ordering:
//   PartI :  f1 power [W], f2 federation leasing [USD],
//            f3 QoS violation figure [-], f4 wasted resources ratio [-]
//   PartII:  f1 power [W], f2 leasing + penalties [USD],
//            f3 wasted resources ratio [-], f4 reconfiguration RAM [GB]

#ifndef VMPLACE_OBJECTIVES_HPP
#define VMPLACE_OBJECTIVES_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <vector>

#include "vmplace/core.hpp"
#include "vmplace/migration.hpp"

namespace vmp {

struct ObjectiveVector {
  std::array<double, 4> raw{};
  std::array<double, 4> norm{};
  friend bool operator==(const ObjectiveVector&, const ObjectiveVector&) = default;
};

struct ObjectiveBounds {
  std::array<double, 4> lo{};
  std::array<double, 4> hi{};
};

/// During the step a reconfiguration is applied, migrating VMs run with 10%
/// extra CPU utilization. The overlay exists only while recording objectives.
inline constexpr double kMigrationCpuPenalty = 0.10;

inline double pm_min_power(const PhysicalMachine& pm, const ProblemConfig& config) {
  return config.pmin_factor * pm.max_power;
}

// ---------------------------------------------------------------------------
// Individual objectives (state-based surface)
// ---------------------------------------------------------------------------

/// Linear power model: (pmax - pmin) * cpu_utilization + pmin per powered PM.
inline double power_consumption(const DatacenterState& state, const ProblemConfig& config) {
  double watts = 0.0;
  for (const auto& pm : state.pms()) {
    if (!state.powered_on(pm.pm_id)) continue;
    const double ucpu = state.used(pm.pm_id).cpu() / pm.capacity.cpu();
    const double pmin = pm_min_power(pm, config);
    watts += (pm.max_power - pmin) * ucpu + pmin;
  }
  return watts;
}

/// Cost of leasing federated capacity: factor * revenue per federated VM.
inline double federation_cost(const DatacenterState& state, const ProblemConfig& config) {
  double usd = 0.0;
  for (const auto& [vm_id, loc] : state.placement())
    if (loc.is_federated()) usd += config.federation_factor * state.vm(vm_id).revenue;
  return usd;
}

/// Penalties for unsatisfied demand. When a PM's instantaneous use exceeds
/// capacity on a resource, the shortfall is rationed proportionally to each
/// hosted VM's use, so every VM on that PM shares the same unsatisfied ratio.
inline double economic_penalties(const DatacenterState& state, const ProblemConfig& config) {
  (void)config;
  double usd = 0.0;
  for (const auto& pm : state.pms()) {
    const Resources& used = state.used(pm.pm_id);
    Resources ratio;
    bool any = false;
    for (int k = 0; k < kResourceCount; ++k) {
      const double shortfall = used[k] - pm.capacity[k];
      if (shortfall > 0.0 && used[k] > 0.0) {
        ratio[k] = shortfall / used[k];
        any = true;
      }
    }
    if (!any) continue;
    for (int vm_id : state.hosted(pm.pm_id)) {
      const VirtualMachine& vm = state.vm(vm_id);
      for (int q = 0; q < kResourceCount; ++q)
        usd += vm.resource_revenue(q) * ratio[q];
    }
  }
  return usd;
}

/// SLA violation figure: c_hat^sla * sla per VM served from the federation.
inline double qos_violation_cost(const DatacenterState& state, const ProblemConfig& config) {
  double total = 0.0;
  for (const auto& [vm_id, loc] : state.placement()) {
    if (!loc.is_federated()) continue;
    const int sla = state.vm(vm_id).sla;
    total += std::pow(config.c_hat, sla) * static_cast<double>(sla);
  }
  return total;
}

/// Mean idle fraction across powered PMs; 0 when every PM is off.
inline double wasted_resources(const DatacenterState& state) {
  double sum = 0.0;
  int on = 0;
  for (const auto& pm : state.pms()) {
    if (!state.powered_on(pm.pm_id)) continue;
    const Resources u = state.utilization_ratio(pm.pm_id);
    sum += 1.0 - (u.cpu() + u.ram() + u.net()) / kResourceCount;
    ++on;
  }
  return on == 0 ? 0.0 : sum / on;
}

inline double reconfiguration_overhead(const MigrationPlan& plan) {
  return plan.max_pair_ram();
}

// ---------------------------------------------------------------------------
// Normalization and scalarization
// ---------------------------------------------------------------------------

/// (f - lo) / (hi - lo), clamped into [0, 1]; 0 when the bounds collapse.
inline double normalize(double raw, double lo, double hi) {
  if (hi <= lo) return 0.0;
  return std::clamp((raw - lo) / (hi - lo), 0.0, 1.0);
}

namespace detail {

/// Analytic per-step bounds over an arbitrary alive-VM range; the maxima are
/// the worst placements expressible at this instant (everything federated,
/// every PM at full power, all RAM moved at once).
template <class VmPtrRange>
ObjectiveBounds bounds_impl(const std::vector<PhysicalMachine>& pms, const VmPtrRange& vms,
                            const ProblemConfig& config) {
  double power_hi = 0.0;
  for (const auto& pm : pms) power_hi += pm.max_power;
  double cost_hi = 0.0, ram_hi = 0.0;
  std::size_t m = 0;
  for (const VirtualMachine* vm : vms) {
    cost_hi += vm->revenue * std::max(config.federation_factor, 1.0);
    ram_hi += vm->demand.ram();
    ++m;
  }
  const double qos_hi =
      std::pow(config.c_hat, config.s) * config.s * static_cast<double>(m);

  ObjectiveBounds b;
  if (config.objective_set == ObjectiveSet::PartI)
    b.hi = {power_hi, cost_hi, qos_hi, 1.0};
  else
    b.hi = {power_hi, cost_hi, 1.0, ram_hi};
  return b;
}

}  // namespace detail

inline ObjectiveBounds compute_bounds(const DatacenterState& state, const ProblemConfig& config) {
  std::vector<const VirtualMachine*> vms;
  vms.reserve(state.vms().size());
  for (const auto& [id, vm] : state.vms()) vms.push_back(&vm);
  return detail::bounds_impl(state.pms(), vms, config);
}

inline double scalarize(const ObjectiveVector& vec, ScalarMethod method,
                        const std::vector<double>& ws_weights) {
  switch (method) {
    case ScalarMethod::WeightedSum: {
      if (ws_weights.size() != vec.norm.size())
        throw ConfigError("weighted sum needs one weight per objective");
      double s = 0.0;
      for (std::size_t i = 0; i < vec.norm.size(); ++i) s += vec.norm[i] * ws_weights[i];
      return s;
    }
    case ScalarMethod::Euclidean: {
      double s = 0.0;
      for (double f : vec.norm) s += f * f;
      return std::sqrt(s);
    }
    case ScalarMethod::Chebyshev: {
      double s = 0.0;
      for (double f : vec.norm) s = std::max(s, std::abs(f));
      return s;
    }
  }
  throw ConfigError("unknown scalarization method");
}

inline double scalarize(const ObjectiveVector& vec, const ProblemConfig& config) {
  return scalarize(vec, config.scalarizer, config.ws_weights);
}

/// Empirical weight derivation: w_i = N / sum over N sampled solutions of the
/// normalized objective i. Undefined (error) when a column sums to zero.
inline std::vector<double> derive_ws_weights(const std::vector<ObjectiveVector>& samples) {
  if (samples.empty()) throw ConfigError("weight derivation needs at least one sample");
  std::array<double, 4> col{};
  for (const auto& s : samples)
    for (std::size_t i = 0; i < 4; ++i) col[i] += s.norm[i];
  std::vector<double> w(4);
  for (std::size_t i = 0; i < 4; ++i) {
    if (col[i] <= 0.0)
      throw ConfigError("objective " + std::to_string(i + 1) +
                        " is zero in every sample; weight undefined");
    w[i] = static_cast<double>(samples.size()) / col[i];
  }
  return w;
}

// ---------------------------------------------------------------------------
// Batch evaluation
// ---------------------------------------------------------------------------

/// Reusable buffers for the flat evaluator (hot path of the memetic search).
struct EvalScratch {
  std::vector<Resources> used;
  std::vector<char> on;
};

/// Evaluates all objectives of one placement expressed as parallel arrays.
/// `reconfig_gb` is the raw reconfiguration objective (PartII only) and
/// `cpu_bumped` optionally lists VMs running with the migration CPU overlay.
inline ObjectiveVector evaluate_flat(const std::vector<PhysicalMachine>& pms,
                                     const std::vector<const VirtualMachine*>& vms,
                                     const std::vector<VmLocation>& locs,
                                     const ObjectiveBounds& bounds, const ProblemConfig& config,
                                     double reconfig_gb, const std::set<int>* cpu_bumped,
                                     EvalScratch& scratch) {
  const std::size_t n = pms.size();
  scratch.used.assign(n, Resources{});
  scratch.on.assign(n, 0);

  double fed_cost = 0.0;
  double qos = 0.0;
  for (std::size_t j = 0; j < vms.size(); ++j) {
    const VirtualMachine& vm = *vms[j];
    const VmLocation& loc = locs[j];
    if (loc.is_on_pm()) {
      const std::size_t i = static_cast<std::size_t>(loc.pm_id - 1);
      Resources act = vm.actual_demand();
      if (cpu_bumped && cpu_bumped->count(vm.vm_id)) {
        const double u = std::min(1.0, vm.utilization.cpu() + kMigrationCpuPenalty);
        act[kCpu] = vm.demand.cpu() * u;
      }
      scratch.used[i] += act;
      scratch.on[i] = 1;
    } else if (loc.is_federated()) {
      fed_cost += config.federation_factor * vm.revenue;
      qos += std::pow(config.c_hat, vm.sla) * static_cast<double>(vm.sla);
    }
  }

  double power = 0.0;
  double waste_sum = 0.0;
  int on_count = 0;
  bool any_shortfall = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (!scratch.on[i]) continue;
    ++on_count;
    const Resources& cap = pms[i].capacity;
    const double pmin = pm_min_power(pms[i], config);
    power += (pms[i].max_power - pmin) * (scratch.used[i].cpu() / cap.cpu()) + pmin;
    double mean_u = 0.0;
    for (int k = 0; k < kResourceCount; ++k) {
      mean_u += scratch.used[i][k] / cap[k];
      if (scratch.used[i][k] > cap[k]) any_shortfall = true;
    }
    waste_sum += 1.0 - mean_u / kResourceCount;
  }
  const double wasted = on_count == 0 ? 0.0 : waste_sum / on_count;

  double penalties = 0.0;
  if (any_shortfall) {
    for (std::size_t j = 0; j < vms.size(); ++j) {
      if (!locs[j].is_on_pm()) continue;
      const std::size_t i = static_cast<std::size_t>(locs[j].pm_id - 1);
      for (int q = 0; q < kResourceCount; ++q) {
        const double over = scratch.used[i][q] - pms[i].capacity[q];
        if (over > 0.0)
          penalties += vms[j]->resource_revenue(q) * (over / scratch.used[i][q]);
      }
    }
  }

  ObjectiveVector vec;
  if (config.objective_set == ObjectiveSet::PartI)
    vec.raw = {power, fed_cost, qos, wasted};
  else
    vec.raw = {power, fed_cost + penalties, wasted, reconfig_gb};
  for (std::size_t i = 0; i < 4; ++i)
    vec.norm[i] = normalize(vec.raw[i], bounds.lo[i], bounds.hi[i]);
  return vec;
}

/// State-based convenience wrapper. VMs without a location entry (transient
/// mid-step states) contribute nothing.
inline ObjectiveVector evaluate_objectives(const DatacenterState& state,
                                           const ProblemConfig& config, double reconfig_gb = 0.0,
                                           const std::set<int>* cpu_bumped = nullptr) {
  std::vector<const VirtualMachine*> vms;
  std::vector<VmLocation> locs;
  vms.reserve(state.vms().size());
  locs.reserve(state.vms().size());
  for (const auto& [id, vm] : state.vms()) {
    vms.push_back(&vm);
    auto it = state.placement().find(id);
    locs.push_back(it == state.placement().end() ? VmLocation::rejected() : it->second);
  }
  const ObjectiveBounds bounds = detail::bounds_impl(state.pms(), vms, config);
  EvalScratch scratch;
  return evaluate_flat(state.pms(), vms, locs, bounds, config, reconfig_gb, cpu_bumped, scratch);
}

}  // namespace vmp

#endif  // VMPLACE_OBJECTIVES_HPP
