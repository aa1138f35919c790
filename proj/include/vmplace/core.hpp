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

#ifndef VMPLACE_CORE_HPP
#define VMPLACE_CORE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace vmp {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// Bad or inconsistent configuration (CLI exit code 1).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed input file (CLI exit code 2). `line` is 1-based, 0 if unknown.
struct SchemaError : std::runtime_error {
  SchemaError(int line_, const std::string& what_)
      : std::runtime_error(line_ > 0 ? "line " + std::to_string(line_) + ": " + what_ : what_),
        line(line_) {}
  int line = 0;
};

/// A hard placement failure: a top-SLA VM fits nowhere and federation is
/// disabled (CLI exit code 3).
struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnknownVmError : std::runtime_error {
  explicit UnknownVmError(int vm_id)
      : std::runtime_error("unknown vm id " + std::to_string(vm_id)) {}
};

// ---------------------------------------------------------------------------
// Resources
// ---------------------------------------------------------------------------

enum Resource : int { kCpu = 0, kRam = 1, kNet = 2 };
inline constexpr int kResourceCount = 3;

/// One value per managed resource dimension: CPU [ECU], RAM [GB], net [Mbps].
struct Resources {
  std::array<double, kResourceCount> v{0.0, 0.0, 0.0};

  constexpr Resources() = default;
  constexpr Resources(double cpu, double ram, double net) : v{cpu, ram, net} {}
  static constexpr Resources uniform(double x) { return {x, x, x}; }

  constexpr double& operator[](int k) { return v[static_cast<std::size_t>(k)]; }
  constexpr double operator[](int k) const { return v[static_cast<std::size_t>(k)]; }
  constexpr double cpu() const { return v[kCpu]; }
  constexpr double ram() const { return v[kRam]; }
  constexpr double net() const { return v[kNet]; }

  Resources& operator+=(const Resources& o) {
    for (int k = 0; k < kResourceCount; ++k) v[k] += o.v[k];
    return *this;
  }
  friend Resources operator+(Resources a, const Resources& b) { return a += b; }
  friend bool operator==(const Resources&, const Resources&) = default;

  bool all_nonnegative() const {
    return v[0] >= 0.0 && v[1] >= 0.0 && v[2] >= 0.0;
  }
  bool all_positive() const { return v[0] > 0.0 && v[1] > 0.0 && v[2] > 0.0; }
  bool all_in_unit() const {
    for (double x : v)
      if (x < 0.0 || x > 1.0) return false;
    return true;
  }
};

/// Capacity comparisons tolerate a small relative slack so that admitting a
/// VM whose effective demand exactly equals the free capacity succeeds.
inline bool fits(double need, double cap) {
  return need <= cap + 1e-9 * std::max(1.0, cap);
}

// ---------------------------------------------------------------------------
// Machines
// ---------------------------------------------------------------------------

struct PhysicalMachine {
  int pm_id = 0;  // 1-based, unique per configuration
  Resources capacity;
  double max_power = 0.0;  // [W] at full CPU utilization
  int datacenter_id = 0;
};

struct VirtualMachine {
  int vm_id = 0;  // monotonically increasing, never reused
  int service_id = 0;
  int datacenter_id = 0;
  Resources demand;        // requested virtual resources (time-varying)
  Resources utilization;   // per-resource usage ratio in [0, 1]
  Resources revenue_rate;  // USD per resource unit; all-zero = no rate data
  double revenue = 0.0;    // USD for hosting this VM at the current size
  int sla = 1;             // priority level in [1, s]
  int t_init = 0;
  int t_end = 0;  // exclusive: the VM is alive for t in [t_init, t_end)

  /// Instantaneous use: demand scaled by the utilization ratio.
  Resources actual_demand() const {
    Resources r;
    for (int k = 0; k < kResourceCount; ++k) r[k] = demand[k] * utilization[k];
    return r;
  }

  /// Admission-relevant demand: actual use plus the protected share of the
  /// idle reservation. protection = 1 reserves the full request.
  Resources effective_demand(const Resources& protection) const {
    Resources r;
    for (int k = 0; k < kResourceCount; ++k) {
      const double used = demand[k] * utilization[k];
      r[k] = used + demand[k] * (1.0 - utilization[k]) * protection[k];
    }
    return r;
  }

  /// Revenue attributable to resource q: the trace's per-unit rate when
  /// present, otherwise an equal split of the total revenue.
  double resource_revenue(int q) const {
    if (revenue_rate == Resources{}) return revenue / kResourceCount;
    return demand[q] * revenue_rate[q];
  }
};

// ---------------------------------------------------------------------------
// Locations and placements
// ---------------------------------------------------------------------------

/// Where a VM runs: on one of the provider's PMs, leased from the federation
/// (an unbounded sink), or rejected (legal only below the top SLA level).
struct VmLocation {
  enum class Kind : std::uint8_t { OnPm, Federated, Rejected };
  Kind kind = Kind::Rejected;
  int pm_id = 0;  // valid iff kind == OnPm

  static VmLocation on_pm(int pm_id) { return {Kind::OnPm, pm_id}; }
  static VmLocation federated() { return {Kind::Federated, 0}; }
  static VmLocation rejected() { return {Kind::Rejected, 0}; }

  bool is_on_pm() const { return kind == Kind::OnPm; }
  bool is_federated() const { return kind == Kind::Federated; }
  bool is_rejected() const { return kind == Kind::Rejected; }
  friend bool operator==(const VmLocation&, const VmLocation&) = default;
};

/// Sparse allocation: one location per alive VM. The dense binary matrix is
/// reconstructable from this for reporting.
using Placement = std::map<int, VmLocation>;

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

enum class ObjectiveSet { PartI, PartII };
enum class ScalarMethod { WeightedSum, Euclidean, Chebyshev };

inline const char* to_string(ScalarMethod m) {
  switch (m) {
    case ScalarMethod::WeightedSum: return "ws";
    case ScalarMethod::Euclidean: return "ed";
    case ScalarMethod::Chebyshev: return "cd";
  }
  return "?";
}

inline const char* to_string(ObjectiveSet s) {
  return s == ObjectiveSet::PartI ? "part1" : "part2";
}

struct ProblemConfig {
  int s = 5;                        // highest SLA priority level
  double c_hat = 1000.0;            // QoS priority constant
  double federation_factor = 0.7;   // leasing price ratio vs. market price
  double pmin_factor = 0.6;         // idle power as a fraction of max power
  Resources protection = Resources::uniform(1.0);  // per-resource lambda
  bool federation_enabled = true;
  ObjectiveSet objective_set = ObjectiveSet::PartI;
  ScalarMethod scalarizer = ScalarMethod::WeightedSum;
  std::vector<double> ws_weights{1.3903, 2.1379, 2.7393, 1.4586};
  int vmpr_period = 0;    // <= 0: reconfiguration never triggers
  int vmpr_duration = 4;  // steps between snapshot and result application
  std::uint64_t rng_seed = 1;

  void validate() const {
    if (s < 1) throw ConfigError("s must be >= 1");
    if (federation_factor < 0.0 || federation_factor > 1.0)
      throw ConfigError("federation_factor must be in [0, 1]");
    if (!protection.all_in_unit())
      throw ConfigError("protection factors must be in [0, 1]");
    if (pmin_factor < 0.0 || pmin_factor > 1.0)
      throw ConfigError("pmin_factor must be in [0, 1]");
    if (scalarizer == ScalarMethod::WeightedSum) {
      if (ws_weights.size() != 4)
        throw ConfigError("ws_weights must have one weight per objective (4)");
      for (double w : ws_weights)
        if (!(w > 0.0)) throw ConfigError("ws_weights must be positive");
    }
    if (vmpr_period > 0 && vmpr_duration < 1)
      throw ConfigError("vmpr_duration must be >= 1");
  }
};

// ---------------------------------------------------------------------------
// Constraint checking
// ---------------------------------------------------------------------------

/// True iff `vm` can be admitted on a PM whose committed load is `committed`:
/// for every resource, committed + effective demand <= capacity. With
/// protection = 1 this is full-reservation admission.
inline bool capacity_check(const Resources& committed, const Resources& capacity,
                           const VirtualMachine& vm, const Resources& protection) {
  const Resources eff = vm.effective_demand(protection);
  for (int k = 0; k < kResourceCount; ++k)
    if (!fits(committed[k] + eff[k], capacity[k])) return false;
  return true;
}

struct Violation {
  enum class Type { MissingLocation, OrphanLocation, SlaViolation, CapacityViolation };
  Type type;
  int vm_id = 0;
  int pm_id = 0;
  int resource = -1;

  std::string describe() const {
    switch (type) {
      case Type::MissingLocation:
        return "vm " + std::to_string(vm_id) + " has no location";
      case Type::OrphanLocation:
        return "location entry for dead vm " + std::to_string(vm_id);
      case Type::SlaViolation:
        return "top-SLA vm " + std::to_string(vm_id) + " is rejected";
      case Type::CapacityViolation:
        return "pm " + std::to_string(pm_id) + " over capacity on resource " +
               std::to_string(resource);
    }
    return {};
  }
};

// ---------------------------------------------------------------------------
// Datacenter state
// ---------------------------------------------------------------------------

/// Single-writer mutable state of one datacenter: the PM fleet, the alive VM
/// set, the placement, and per-PM derived loads. Copies are independent
/// snapshots and safe to hand to a concurrently running reconfiguration.
class DatacenterState {
 public:
  DatacenterState() = default;
  DatacenterState(std::vector<PhysicalMachine> pms, Resources protection)
      : pms_(std::move(pms)),
        hosted_(pms_.size()),
        committed_(pms_.size()),
        used_(pms_.size()),
        protection_(protection) {
    for (std::size_t i = 0; i < pms_.size(); ++i) {
      if (pms_[i].pm_id != static_cast<int>(i) + 1)
        throw ConfigError("pm ids must be 1..n in order");
      if (!pms_[i].capacity.all_positive() || pms_[i].max_power <= 0.0)
        throw ConfigError("pm " + std::to_string(pms_[i].pm_id) +
                          " has non-positive capacity or power");
    }
  }

  int clock() const { return clock_; }
  void set_clock(int t) { clock_ = t; }

  const std::vector<PhysicalMachine>& pms() const { return pms_; }
  const std::map<int, VirtualMachine>& vms() const { return vms_; }
  const Placement& placement() const { return placement_; }
  const Resources& protection() const { return protection_; }

  bool alive(int vm_id) const { return vms_.count(vm_id) != 0; }

  const VirtualMachine& vm(int vm_id) const {
    auto it = vms_.find(vm_id);
    if (it == vms_.end()) throw UnknownVmError(vm_id);
    return it->second;
  }

  const Resources& committed(int pm_id) const { return committed_[index(pm_id)]; }
  const Resources& used(int pm_id) const { return used_[index(pm_id)]; }
  const std::set<int>& hosted(int pm_id) const { return hosted_[index(pm_id)]; }
  bool powered_on(int pm_id) const { return !hosted_[index(pm_id)].empty(); }

  int powered_on_count() const {
    int n = 0;
    for (const auto& h : hosted_)
      if (!h.empty()) ++n;
    return n;
  }

  /// Usage ratio of `pm_id` per resource (actual use over capacity).
  Resources utilization_ratio(int pm_id) const {
    const std::size_t i = index(pm_id);
    Resources r;
    for (int k = 0; k < kResourceCount; ++k)
      r[k] = used_[i][k] / pms_[i].capacity[k];
    return r;
  }

  bool fits_on(int pm_id, const VirtualMachine& vm) const {
    const std::size_t i = index(pm_id);
    return capacity_check(committed_[i], pms_[i].capacity, vm, protection_);
  }

  /// Inserts a new, unplaced VM. The caller places it before the step ends.
  void create_vm(const VirtualMachine& vm) {
    if (vms_.count(vm.vm_id))
      throw ConfigError("vm id " + std::to_string(vm.vm_id) + " reused");
    vms_.emplace(vm.vm_id, vm);
  }

  /// Releases the VM's location and removes it from the alive set.
  void destroy_vm(int vm_id) {
    if (!vms_.count(vm_id)) throw UnknownVmError(vm_id);
    unassign(vm_id);
    vms_.erase(vm_id);
  }

  /// Overwrites the VM's request/utilization fields in place (location kept)
  /// and returns false when its hosting PM no longer satisfies admission,
  /// i.e. the caller must re-place it.
  bool update_vm(const VirtualMachine& next) {
    auto it = vms_.find(next.vm_id);
    if (it == vms_.end()) throw UnknownVmError(next.vm_id);
    it->second = next;
    auto loc = placement_.find(next.vm_id);
    if (loc == placement_.end() || !loc->second.is_on_pm()) return true;
    const std::size_t i = index(loc->second.pm_id);
    recompute(i);
    for (int k = 0; k < kResourceCount; ++k)
      if (!fits(committed_[i][k], pms_[i].capacity[k])) return false;
    return true;
  }

  /// Sets the VM's location. No admission check: callers gate OnPm targets
  /// with fits_on, and validate_placement audits the result.
  void assign(int vm_id, VmLocation loc) {
    if (!vms_.count(vm_id)) throw UnknownVmError(vm_id);
    unassign(vm_id);
    placement_[vm_id] = loc;
    if (loc.is_on_pm()) {
      const std::size_t i = index(loc.pm_id);
      hosted_[i].insert(vm_id);
      recompute(i);
    }
  }

  void unassign(int vm_id) {
    auto it = placement_.find(vm_id);
    if (it == placement_.end()) return;
    if (it->second.is_on_pm()) {
      const std::size_t i = index(it->second.pm_id);
      hosted_[i].erase(vm_id);
      recompute(i);
    }
    placement_.erase(it);
  }

  /// Replaces the whole placement (reconfiguration adoption). Locations must
  /// cover exactly the alive VM set.
  void reset_placement(const Placement& next) {
    for (auto& h : hosted_) h.clear();
    placement_ = next;
    for (const auto& [vm_id, loc] : placement_) {
      if (!vms_.count(vm_id)) throw UnknownVmError(vm_id);
      if (loc.is_on_pm()) hosted_[index(loc.pm_id)].insert(vm_id);
    }
    for (std::size_t i = 0; i < pms_.size(); ++i) recompute(i);
  }

 private:
  std::size_t index(int pm_id) const {
    if (pm_id < 1 || pm_id > static_cast<int>(pms_.size()))
      throw ConfigError("pm id " + std::to_string(pm_id) + " out of range");
    return static_cast<std::size_t>(pm_id - 1);
  }

  // Loads are re-summed over the hosted set (in vm id order) instead of being
  // adjusted incrementally, so release/re-admit round-trips are bit-exact.
  void recompute(std::size_t i) {
    Resources eff, act;
    for (int vm_id : hosted_[i]) {
      const VirtualMachine& m = vms_.at(vm_id);
      eff += m.effective_demand(protection_);
      act += m.actual_demand();
    }
    committed_[i] = eff;
    used_[i] = act;
  }

  std::vector<PhysicalMachine> pms_;
  std::map<int, VirtualMachine> vms_;
  Placement placement_;
  std::vector<std::set<int>> hosted_;
  std::vector<Resources> committed_;
  std::vector<Resources> used_;
  Resources protection_;
  int clock_ = 0;
};

/// Audits the three placement constraints: every alive VM has exactly one
/// location (and no stale entries), top-SLA VMs are never rejected, and every
/// PM satisfies admission over its hosted set. Empty result = valid state.
inline std::vector<Violation> validate_placement(const DatacenterState& state,
                                                 const ProblemConfig& config) {
  std::vector<Violation> out;
  for (const auto& [vm_id, vm] : state.vms()) {
    auto it = state.placement().find(vm_id);
    if (it == state.placement().end()) {
      out.push_back({Violation::Type::MissingLocation, vm_id});
      continue;
    }
    if (it->second.is_rejected() && vm.sla >= config.s)
      out.push_back({Violation::Type::SlaViolation, vm_id});
  }
  for (const auto& [vm_id, loc] : state.placement()) {
    (void)loc;
    if (!state.alive(vm_id))
      out.push_back({Violation::Type::OrphanLocation, vm_id});
  }
  for (const auto& pm : state.pms()) {
    const Resources& load = state.committed(pm.pm_id);
    for (int k = 0; k < kResourceCount; ++k)
      if (!fits(load[k], pm.capacity[k]))
        out.push_back({Violation::Type::CapacityViolation, 0, pm.pm_id, k});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Lifecycle events
// ---------------------------------------------------------------------------

struct VmEvent {
  enum class Kind { Create, Update, Destroy };
  Kind kind;
  VirtualMachine vm;  // full payload for Create/Update; vm_id only for Destroy
};

struct EventOutcome {
  // An in-place resize or utilization change left the hosting PM over
  // capacity; the VM was kept in place and must be re-placed by the caller.
  bool needs_replacement = false;
};

/// Applies one lifecycle event. Creation inserts the VM unplaced; destruction
/// releases its resources; updates refresh demand/utilization in place.
inline EventOutcome apply_event(DatacenterState& state, const VmEvent& ev) {
  switch (ev.kind) {
    case VmEvent::Kind::Create:
      state.create_vm(ev.vm);
      return {};
    case VmEvent::Kind::Destroy:
      state.destroy_vm(ev.vm.vm_id);
      return {};
    case VmEvent::Kind::Update:
      return {.needs_replacement = !state.update_vm(ev.vm)};
  }
  return {};
}

}  // namespace vmp

#endif  // VMPLACE_CORE_HPP
