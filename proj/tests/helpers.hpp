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

#ifndef VMPLACE_TESTS_HELPERS_HPP
#define VMPLACE_TESTS_HELPERS_HPP

#include <vector>

#include "vmplace/core.hpp"
#include "vmplace/random.hpp"

namespace vmptest {

inline vmp::PhysicalMachine make_pm(int id, double cpu, double ram, double net,
                                    double pmax = 960.0) {
  vmp::PhysicalMachine pm;
  pm.pm_id = id;
  pm.capacity = {cpu, ram, net};
  pm.max_power = pmax;
  return pm;
}

inline std::vector<vmp::PhysicalMachine> homogeneous_fleet(int n, double cpu = 8, double ram = 10,
                                                           double net = 780,
                                                           double pmax = 960.0) {
  std::vector<vmp::PhysicalMachine> pms;
  for (int i = 1; i <= n; ++i) pms.push_back(make_pm(i, cpu, ram, net, pmax));
  return pms;
}

inline vmp::VirtualMachine make_vm(int id, double cpu, double ram, double net,
                                   double utilization = 1.0, double revenue = 1.0, int sla = 1) {
  vmp::VirtualMachine vm;
  vm.vm_id = id;
  vm.demand = {cpu, ram, net};
  vm.utilization = vmp::Resources::uniform(utilization);
  vm.revenue = revenue;
  vm.sla = sla;
  vm.t_init = 0;
  vm.t_end = 1;
  return vm;
}

inline vmp::VirtualMachine random_vm(int id, vmp::RngEngine& rng, int max_sla = 5) {
  vmp::VirtualMachine vm;
  vm.vm_id = id;
  vm.demand = {static_cast<double>(vmp::uniform_int(rng, 1, 8)),
               static_cast<double>(vmp::uniform_int(rng, 1, 8)),
               static_cast<double>(vmp::uniform_int(rng, 10, 1000))};
  vm.utilization = {vmp::uniform_real(rng, 0.0, 1.0), vmp::uniform_real(rng, 0.0, 1.0),
                    vmp::uniform_real(rng, 0.0, 1.0)};
  vm.revenue = vmp::uniform_real(rng, 0.1, 1.5);
  vm.sla = static_cast<int>(vmp::uniform_int(rng, 1, max_sla));
  vm.t_init = 0;
  vm.t_end = 1;
  return vm;
}

}  // namespace vmptest

#endif  // VMPLACE_TESTS_HELPERS_HPP
