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
// Parametric cloud workload trace generator. Services live for a random
// window of the trace; per step, each living service's VM count follows the
// horizontal elasticity distribution, VM sizes follow the vertical elasticity
// distribution over an instance-type catalog, and utilization percentages
// follow the server/network overbooking distributions. Output is the
// snapshot-row schema of trace.hpp. Generation is a pure function of the
// parameters and seed.

#ifndef VMPLACE_TRACEGEN_HPP
#define VMPLACE_TRACEGEN_HPP

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "vmplace/core.hpp"
#include "vmplace/random.hpp"
#include "vmplace/trace.hpp"

namespace vmp {

// ---------------------------------------------------------------------------
// Distributions
// ---------------------------------------------------------------------------

struct Pdf {
  enum class Kind { Uniform, Poisson };
  Kind kind = Kind::Uniform;
  double a = 0.0;  // uniform lower bound, or the Poisson rate
  double b = 0.0;  // uniform upper bound

  static Pdf uniform(double lo, double hi) {
    if (lo > hi) throw ConfigError("uniform PDF needs a <= b");
    return {Kind::Uniform, lo, hi};
  }
  static Pdf poisson(double lambda) {
    if (!(lambda > 0.0)) throw ConfigError("poisson PDF needs lambda > 0");
    return {Kind::Poisson, lambda, 0.0};
  }

  std::string describe() const {
    if (kind == Kind::Uniform)
      return "uniform(" + format_double(a) + "," + format_double(b) + ")";
    return "poisson(" + format_double(a) + ")";
  }
};

/// One integer draw.
inline int sample(const Pdf& pdf, RngEngine& rng) {
  if (pdf.kind == Pdf::Kind::Uniform)
    return static_cast<int>(uniform_int(rng, std::llround(pdf.a), std::llround(pdf.b)));
  return sample_poisson(rng, pdf.a);
}

// ---------------------------------------------------------------------------
// Generator parameters
// ---------------------------------------------------------------------------

/// A VM size class; the catalog is ordered by CPU ascending and vertical
/// scaling moves along it.
struct InstanceType {
  std::string name;
  double cpu = 0, ram = 0, net = 0;
};

inline std::vector<InstanceType> default_instance_types() {
  return {
      {"nano", 1, 1, 50},     {"micro", 2, 4, 100},   {"small", 4, 8, 150},
      {"medium", 8, 15, 225}, {"large", 16, 30, 300}, {"xlarge", 32, 60, 450},
      {"2xlarge", 53, 122, 600}, {"4xlarge", 64, 244, 950},
  };
}

struct GeneratorParams {
  int duration = 100;  // t_max; steps are 0..duration-1
  int num_datacenters = 1;
  int num_services = 10;
  int max_vms_per_service = 5;
  std::vector<InstanceType> instance_types = default_instance_types();
  Pdf horizontal_elasticity = Pdf::uniform(5, 5);  // VMs per service
  Pdf vertical_elasticity = Pdf::uniform(1, 1);    // 1-based catalog index
  Pdf server_util = Pdf::uniform(100, 100);        // u_cpu / u_ram percent
  Pdf network_util = Pdf::uniform(100, 100);       // u_net percent
  double r_cpu = 0.065, r_ram = 0.016, r_net = 0.179;  // USD per unit
  std::uint64_t rng_seed = 1;

  void validate() const {
    if (duration < 0) throw ConfigError("duration must be >= 0");
    if (num_datacenters < 1) throw ConfigError("num_datacenters must be >= 1");
    if (num_services < 0) throw ConfigError("num_services must be >= 0");
    if (max_vms_per_service < 0) throw ConfigError("max_vms_per_service must be >= 0");
    if (instance_types.empty()) throw ConfigError("instance_types must not be empty");
    for (const auto& it : instance_types)
      if (!Resources{it.cpu, it.ram, it.net}.all_positive())
        throw ConfigError("instance type '" + it.name + "' has non-positive resources");
    for (std::size_t i = 1; i < instance_types.size(); ++i)
      if (instance_types[i].cpu < instance_types[i - 1].cpu)
        throw ConfigError("instance_types must be ordered by cpu ascending");
  }
};

// ---------------------------------------------------------------------------
// Generation
// ---------------------------------------------------------------------------

struct GenVm {
  int vm_id;
  int t_init;
  int t_end = -1;  // -1 while still living
};

struct GenService {
  int service_id = 0;
  int datacenter = 0;
  int t_start = 0;
  int t_stop = 0;  // exclusive
  std::vector<GenVm> vms;

  bool living_at(int t) const { return t >= t_start && t < t_stop; }
  int living_count() const {
    int n = 0;
    for (const auto& v : vms)
      if (v.t_end < 0) ++n;
    return n;
  }
};

/// Reconciles one service to `target_qty` living VMs at time t, then emits a
/// snapshot row per living VM with a freshly sampled instance type and
/// utilizations. Excess VMs are finished (t_end = t) picking uniformly at
/// random; missing ones are created with t_init = t. Rows carry a t_end
/// placeholder of -1 that generate() resolves once lifetimes are final.
inline void generate_vms_for_service(GenService& service, int target_qty, int t, RngEngine& rng,
                                     const GeneratorParams& params, int& next_vm_id,
                                     std::vector<TraceEvent>& rows) {
  while (service.living_count() > target_qty) {
    const int pick = static_cast<int>(uniform_int(rng, 0, service.living_count() - 1));
    int seen = 0;
    for (auto& v : service.vms) {
      if (v.t_end >= 0) continue;
      if (seen++ == pick) {
        v.t_end = t;
        break;
      }
    }
  }
  while (service.living_count() < target_qty) service.vms.push_back({next_vm_id++, t, -1});

  const int catalog = static_cast<int>(params.instance_types.size());
  for (const auto& v : service.vms) {
    if (v.t_end >= 0) continue;
    const int idx = std::clamp(sample(params.vertical_elasticity, rng), 1, catalog);
    const InstanceType& type = params.instance_types[idx - 1];
    TraceEvent e;
    e.t = t;
    e.service = service.service_id;
    e.datacenter = service.datacenter;
    e.vm = v.vm_id;
    e.cpu = type.cpu;
    e.ram = type.ram;
    e.net = type.net;
    e.u_cpu = std::clamp(sample(params.server_util, rng), 0, 100);
    e.u_ram = std::clamp(sample(params.server_util, rng), 0, 100);
    e.u_net = std::clamp(sample(params.network_util, rng), 0, 100);
    e.r_cpu = params.r_cpu;
    e.r_ram = params.r_ram;
    e.r_net = params.r_net;
    e.t_init = v.t_init;
    e.t_end = -1;
    rows.push_back(e);
  }
}

inline std::vector<TraceEvent> generate(const GeneratorParams& params) {
  params.validate();
  RngEngine rng(params.rng_seed);

  std::vector<GenService> services(static_cast<std::size_t>(params.num_services));
  for (int s = 0; s < params.num_services; ++s) {
    GenService& svc = services[s];
    svc.service_id = s;
    svc.datacenter = static_cast<int>(uniform_int(rng, 0, params.num_datacenters - 1));
    if (params.duration > 0) {
      svc.t_start = static_cast<int>(uniform_int(rng, 0, params.duration - 1));
      const int lifetime = static_cast<int>(uniform_int(rng, 1, params.duration - svc.t_start));
      svc.t_stop = svc.t_start + lifetime;
    }
  }

  std::vector<TraceEvent> rows;
  int next_vm_id = 0;
  for (int t = 0; t < params.duration; ++t) {
    for (auto& svc : services) {
      if (!svc.living_at(t)) continue;
      const int target =
          std::clamp(sample(params.horizontal_elasticity, rng), 0, params.max_vms_per_service);
      generate_vms_for_service(svc, target, t, rng, params, next_vm_id, rows);
    }
  }

  std::map<int, int> final_end;
  for (auto& svc : services)
    for (auto& v : svc.vms) final_end[v.vm_id] = v.t_end < 0 ? svc.t_stop : v.t_end;
  for (auto& row : rows) row.t_end = final_end.at(row.vm);
  return rows;
}

// ---------------------------------------------------------------------------
// Single-VM-per-service workloads (arrival-process benchmarks)
// ---------------------------------------------------------------------------

enum class LegacyKind { Poisson, Uniform };

struct LegacyParams {
  LegacyKind kind = LegacyKind::Poisson;
  double lambda = 10.0;  // Poisson arrival-time rate
  int duration = 100;
  int num_vms = 100;
  std::uint64_t rng_seed = 1;
};

/// Fixed-size workload of single-VM services with static demands and full
/// utilization: creation times follow the arrival PDF, sizes and revenue are
/// drawn uniformly (cpu 1-8 ECU, ram 1-8 GB, net 10-1000 Mbps, revenue
/// 0.1-1.5 USD), SLA levels uniform over 1-5, and every VM lives until the
/// end of the trace. Revenue rates are chosen so each resource carries an
/// equal share of the drawn revenue.
inline std::vector<TraceEvent> legacy_workload(const LegacyParams& params) {
  if (params.duration < 1) throw ConfigError("duration must be >= 1");
  RngEngine rng(params.rng_seed);
  std::vector<TraceEvent> rows;
  for (int j = 0; j < params.num_vms; ++j) {
    int arrival = params.kind == LegacyKind::Poisson
                      ? sample_poisson(rng, params.lambda)
                      : static_cast<int>(uniform_int(rng, 0, params.duration - 1));
    arrival = std::clamp(arrival, 0, params.duration - 1);
    const double cpu = static_cast<double>(uniform_int(rng, 1, 8));
    const double ram = static_cast<double>(uniform_int(rng, 1, 8));
    const double net = static_cast<double>(uniform_int(rng, 10, 1000));
    const double revenue = uniform_real(rng, 0.1, 1.5);
    const int sla = static_cast<int>(uniform_int(rng, 1, 5));
    for (int t = arrival; t < params.duration; ++t) {
      TraceEvent e;
      e.t = t;
      e.service = j;
      e.datacenter = 0;
      e.vm = j;
      e.cpu = cpu;
      e.ram = ram;
      e.net = net;
      e.r_cpu = revenue / (3.0 * cpu);
      e.r_ram = revenue / (3.0 * ram);
      e.r_net = revenue / (3.0 * net);
      e.t_init = arrival;
      e.t_end = params.duration;
      e.sla = sla;
      rows.push_back(e);
    }
  }
  std::sort(rows.begin(), rows.end(), [](const TraceEvent& a, const TraceEvent& b) {
    if (a.t != b.t) return a.t < b.t;
    return a.vm < b.vm;
  });
  return rows;
}

}  // namespace vmp

#endif  // VMPLACE_TRACEGEN_HPP
