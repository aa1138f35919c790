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
// Memetic search over whole placements of one state snapshot. Serves both as
// the offline solver and as the reconfiguration engine of the two-phase run.
//
// Encoding: one gene per alive VM (in vm id order); gene 0 places the VM off
// the provider (federated, or rejected when federation is disabled), genes
// 1..n name a PM. Selection is a size-k tournament, crossover is uniform,
// mutation resamples genes uniformly, survivors are the best of parents plus
// offspring (mu+lambda), and a consolidation hill-climb improves the best
// offspring of each generation. The incumbent placement is injected into
// generation 0, so the result never regresses below the current placement.

#ifndef VMPLACE_MEMETIC_HPP
#define VMPLACE_MEMETIC_HPP

#include <algorithm>
#include <utility>
#include <vector>

#include "vmplace/core.hpp"
#include "vmplace/heuristics.hpp"
#include "vmplace/objectives.hpp"
#include "vmplace/random.hpp"

namespace vmp {

struct MaParams {
  int population_size = 100;
  int generations = 100;
  double crossover_rate = 0.9;
  double mutation_rate = -1.0;  // < 0: defaults to 1/m
  int tournament_size = 2;
  int local_search_moves = 10;  // accepted hill-climb moves per application
  std::uint64_t rng_seed = 1;

  void validate() const {
    if (population_size < 2) throw ConfigError("population_size must be >= 2");
    if (generations < 0) throw ConfigError("generations must be >= 0");
    if (crossover_rate < 0.0 || crossover_rate > 1.0)
      throw ConfigError("crossover_rate must be in [0, 1]");
    if (mutation_rate > 1.0) throw ConfigError("mutation_rate must be in [0, 1]");
    if (tournament_size < 1) throw ConfigError("tournament_size must be >= 1");
    if (local_search_moves < 0) throw ConfigError("local_search_moves must be >= 0");
  }
};

struct Chromosome {
  std::vector<int> genes;
  friend bool operator==(const Chromosome&, const Chromosome&) = default;
};

/// Immutable view of one snapshot prepared for fast fitness evaluation.
/// Not safe for concurrent use (holds mutable scratch buffers).
class MaInstance {
 public:
  MaInstance(const DatacenterState& snapshot, const ProblemConfig& config)
      : pms_(snapshot.pms()), config_(config) {
    vms_.reserve(snapshot.vms().size());
    for (const auto& [id, vm] : snapshot.vms()) vms_.push_back(vm);
    vm_ptrs_.reserve(vms_.size());
    eff_.reserve(vms_.size());
    for (const auto& vm : vms_) {
      vm_ptrs_.push_back(&vm);
      eff_.push_back(vm.effective_demand(config.protection));
    }
    bounds_ = detail::bounds_impl(pms_, vm_ptrs_, config_);
    incumbent_ = encode(snapshot.placement());
  }

  int vm_count() const { return static_cast<int>(vms_.size()); }
  int pm_count() const { return static_cast<int>(pms_.size()); }
  const ProblemConfig& config() const { return config_; }
  const std::vector<PhysicalMachine>& pms() const { return pms_; }
  const VirtualMachine& vm_at(int idx) const { return vms_[idx]; }
  const Resources& effective_at(int idx) const { return eff_[idx]; }
  const Chromosome& incumbent() const { return incumbent_; }
  const ObjectiveBounds& bounds() const { return bounds_; }

  Chromosome encode(const Placement& placement) const {
    Chromosome c;
    c.genes.reserve(vms_.size());
    for (const auto& vm : vms_) {
      auto it = placement.find(vm.vm_id);
      if (it == placement.end())
        throw ConfigError("snapshot placement is missing vm " + std::to_string(vm.vm_id));
      c.genes.push_back(it->second.is_on_pm() ? it->second.pm_id : 0);
    }
    return c;
  }

  Placement decode(const Chromosome& c) const {
    Placement p;
    for (std::size_t j = 0; j < vms_.size(); ++j)
      p[vms_[j].vm_id] = location_of(c.genes[j]);
    return p;
  }

  VmLocation location_of(int gene) const {
    if (gene > 0) return VmLocation::on_pm(gene);
    return config_.federation_enabled ? VmLocation::federated() : VmLocation::rejected();
  }

  bool feasible(const Chromosome& c) const {
    std::vector<Resources> load(pms_.size());
    for (std::size_t j = 0; j < vms_.size(); ++j) {
      const int g = c.genes[j];
      if (g == 0) {
        if (!config_.federation_enabled && vms_[j].sla >= config_.s) return false;
        continue;
      }
      load[g - 1] += eff_[j];
    }
    for (std::size_t i = 0; i < pms_.size(); ++i)
      for (int k = 0; k < kResourceCount; ++k)
        if (!fits(load[i][k], pms_[i].capacity[k])) return false;
    return true;
  }

  ObjectiveVector objectives_of(const Chromosome& c) const {
    locs_.clear();
    for (int g : c.genes) locs_.push_back(location_of(g));
    const double f4 = config_.objective_set == ObjectiveSet::PartII ? max_transfer(c) : 0.0;
    return evaluate_flat(pms_, vm_ptrs_, locs_, bounds_, config_, f4, nullptr, scratch_);
  }

  double fitness(const Chromosome& c) const {
    return scalarize(objectives_of(c), config_);
  }

 private:
  /// Raw reconfiguration objective of a candidate: the largest RAM transfer
  /// between any ordered PM pair when migrating from the incumbent.
  double max_transfer(const Chromosome& c) const {
    moves_.clear();
    const int stride = pm_count() + 1;
    for (std::size_t j = 0; j < vms_.size(); ++j) {
      const int src = incumbent_.genes[j], dst = c.genes[j];
      if (src > 0 && dst > 0 && src != dst)
        moves_.emplace_back(src * stride + dst, vms_[j].demand.ram());
    }
    if (moves_.empty()) return 0.0;
    std::sort(moves_.begin(), moves_.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    double best = 0.0, acc = 0.0;
    int key = moves_.front().first;
    for (const auto& [k, ram] : moves_) {
      if (k != key) {
        best = std::max(best, acc);
        acc = 0.0;
        key = k;
      }
      acc += ram;
    }
    return std::max(best, acc);
  }

  std::vector<PhysicalMachine> pms_;
  std::vector<VirtualMachine> vms_;  // vm id order
  std::vector<const VirtualMachine*> vm_ptrs_;
  std::vector<Resources> eff_;
  ObjectiveBounds bounds_;
  ProblemConfig config_;
  Chromosome incumbent_;
  mutable std::vector<VmLocation> locs_;
  mutable std::vector<std::pair<int, double>> moves_;
  mutable EvalScratch scratch_;
};

/// Uniform crossover: each gene position swapped between the two children
/// with probability one half.
inline std::pair<Chromosome, Chromosome> crossover(const Chromosome& a, const Chromosome& b,
                                                   RngEngine& rng) {
  Chromosome c1 = a, c2 = b;
  for (std::size_t j = 0; j < c1.genes.size(); ++j)
    if (uniform01(rng) < 0.5) std::swap(c1.genes[j], c2.genes[j]);
  return {std::move(c1), std::move(c2)};
}

/// Each gene independently resampled uniformly from {0..n} with the given
/// probability.
inline Chromosome mutate(const Chromosome& c, RngEngine& rng, double rate, int pm_count) {
  Chromosome out = c;
  for (int& g : out.genes)
    if (uniform01(rng) < rate) g = static_cast<int>(uniform_int(rng, 0, pm_count));
  return out;
}

/// Makes a chromosome feasible: over-capacity PMs shed their largest-CPU VMs,
/// which are re-homed best-fit, then federated. Top-SLA VMs never end up
/// rejected; if one cannot be homed anywhere the instance is unrepairable.
inline Chromosome repair(Chromosome c, const MaInstance& inst) {
  const int n = inst.pm_count();
  const int m = inst.vm_count();
  const ProblemConfig& config = inst.config();
  std::vector<Resources> eff(n), act(n);
  std::vector<std::vector<int>> hosted(n);
  std::vector<int> pending;

  for (int j = 0; j < m; ++j) {
    const int g = c.genes[j];
    if (g == 0) {
      if (!config.federation_enabled && inst.vm_at(j).sla >= config.s) pending.push_back(j);
      continue;
    }
    eff[g - 1] += inst.effective_at(j);
    act[g - 1] += inst.vm_at(j).actual_demand();
    hosted[g - 1].push_back(j);
  }

  auto overloaded = [&](int i) {
    for (int k = 0; k < kResourceCount; ++k)
      if (!fits(eff[i][k], inst.pms()[i].capacity[k])) return true;
    return false;
  };

  for (int i = 0; i < n; ++i) {
    while (overloaded(i)) {
      int evict = -1;
      for (int j : hosted[i])
        if (evict < 0 || inst.vm_at(j).demand.cpu() > inst.vm_at(evict).demand.cpu()) evict = j;
      hosted[i].erase(std::find(hosted[i].begin(), hosted[i].end(), evict));
      const Resources e = inst.effective_at(evict), a = inst.vm_at(evict).actual_demand();
      for (int k = 0; k < kResourceCount; ++k) {
        eff[i][k] -= e[k];
        act[i][k] -= a[k];
      }
      pending.push_back(evict);
    }
  }

  for (int j : pending) {
    // best-fit: most utilized PM with room first, ties to the lower id
    int target = -1;
    double target_score = 0.0;
    for (int i = 0; i < n; ++i) {
      if (!capacity_check(eff[i], inst.pms()[i].capacity, inst.vm_at(j), config.protection))
        continue;
      double score = 0.0;
      for (int k = 0; k < kResourceCount; ++k)
        score += 1.0 - act[i][k] / inst.pms()[i].capacity[k];
      if (target < 0 || score < target_score) {
        target = i;
        target_score = score;
      }
    }
    if (target >= 0) {
      c.genes[j] = target + 1;
      eff[target] += inst.effective_at(j);
      act[target] += inst.vm_at(j).actual_demand();
      hosted[target].push_back(j);
    } else if (config.federation_enabled || inst.vm_at(j).sla < config.s) {
      c.genes[j] = 0;
    } else {
      throw InfeasibleError("vm " + std::to_string(inst.vm_at(j).vm_id) +
                            " cannot be repaired onto any PM and federation is disabled");
    }
  }
  return c;
}

/// Consolidation hill-climb: move VMs off the least-loaded powered PM onto
/// better-scoring machines, keeping only moves that strictly lower the
/// scalarized cost. Stops after `budget` accepted moves or at a plateau.
inline Chromosome local_search(Chromosome c, const MaInstance& inst, int budget) {
  if (budget <= 0 || inst.vm_count() == 0 || inst.pm_count() < 2) return c;
  constexpr int kTargetCap = 8;  // best-scoring candidate PMs tried per VM
  const int n = inst.pm_count();
  double fit = inst.fitness(c);

  while (budget > 0) {
    std::vector<Resources> eff(n), act(n);
    std::vector<std::vector<int>> hosted(n);
    for (int j = 0; j < inst.vm_count(); ++j) {
      const int g = c.genes[j];
      if (g == 0) continue;
      eff[g - 1] += inst.effective_at(j);
      act[g - 1] += inst.vm_at(j).actual_demand();
      hosted[g - 1].push_back(j);
    }
    std::vector<double> score(n);
    int source = -1;
    for (int i = 0; i < n; ++i) {
      score[i] = 0.0;
      for (int k = 0; k < kResourceCount; ++k)
        score[i] += 1.0 - act[i][k] / inst.pms()[i].capacity[k];
      if (!hosted[i].empty() && (source < 0 || score[i] > score[source])) source = i;
    }
    if (source < 0) break;

    std::vector<int> targets;
    for (int i = 0; i < n; ++i)
      if (i != source && score[i] < score[source]) targets.push_back(i);
    std::sort(targets.begin(), targets.end(), [&](int a, int b) {
      if (score[a] != score[b]) return score[a] < score[b];
      return a < b;
    });
    if (targets.size() > kTargetCap) targets.resize(kTargetCap);

    bool moved = false;
    for (int j : hosted[source]) {
      for (int i : targets) {
        if (!capacity_check(eff[i], inst.pms()[i].capacity, inst.vm_at(j),
                            inst.config().protection))
          continue;
        Chromosome trial = c;
        trial.genes[j] = i + 1;
        const double trial_fit = inst.fitness(trial);
        if (trial_fit < fit) {
          c = std::move(trial);
          fit = trial_fit;
          --budget;
          moved = true;
          break;
        }
      }
      if (moved) break;
    }
    if (!moved) break;
  }
  return c;
}

/// Consolidation sweep: tries to evacuate entire powered PMs, idlest first,
/// onto better-scoring machines with room, and keeps an evacuation only when
/// the whole bundle strictly lowers the scalarized cost. Complements the
/// single-VM hill-climb, which cannot cross the cost plateau between two
/// powered machines: on identical hardware the objectives only move once a
/// machine actually empties.
inline Chromosome consolidation_sweep(Chromosome c, const MaInstance& inst, int budget) {
  const int n = inst.pm_count();
  if (budget <= 0 || inst.vm_count() == 0 || n < 2) return c;
  double fit = inst.fitness(c);

  while (budget > 0) {
    std::vector<Resources> eff(n), act(n);
    std::vector<std::vector<int>> hosted(n);
    for (int j = 0; j < inst.vm_count(); ++j) {
      const int g = c.genes[j];
      if (g == 0) continue;
      eff[g - 1] += inst.effective_at(j);
      act[g - 1] += inst.vm_at(j).actual_demand();
      hosted[g - 1].push_back(j);
    }
    std::vector<double> score(n);
    std::vector<int> sources;
    for (int i = 0; i < n; ++i) {
      score[i] = 0.0;
      for (int k = 0; k < kResourceCount; ++k)
        score[i] += 1.0 - act[i][k] / inst.pms()[i].capacity[k];
      if (!hosted[i].empty()) sources.push_back(i);
    }
    if (sources.size() < 2) break;
    std::sort(sources.begin(), sources.end(), [&](int a, int b) {
      if (score[a] != score[b]) return score[a] > score[b];  // idlest first
      return a < b;
    });

    bool improved = false;
    for (int src : sources) {
      Chromosome trial = c;
      std::vector<Resources> trial_eff = eff;
      std::vector<int> order = hosted[src];
      std::sort(order.begin(), order.end(), [&](int a, int b) {
        const double ca = inst.vm_at(a).demand.cpu(), cb = inst.vm_at(b).demand.cpu();
        if (ca != cb) return ca > cb;
        return a < b;
      });
      bool evacuated = true;
      for (int j : order) {
        int target = -1;
        double target_score = 0.0;
        for (int i = 0; i < n; ++i) {
          if (i == src || hosted[i].empty()) continue;
          if (!capacity_check(trial_eff[i], inst.pms()[i].capacity, inst.vm_at(j),
                              inst.config().protection))
            continue;
          if (target < 0 || score[i] < target_score ||
              (score[i] == target_score && i < target)) {
            target = i;
            target_score = score[i];
          }
        }
        if (target < 0) {
          evacuated = false;
          break;
        }
        trial.genes[j] = target + 1;
        trial_eff[target] += inst.effective_at(j);
      }
      if (!evacuated) continue;
      const double trial_fit = inst.fitness(trial);
      if (trial_fit < fit) {
        c = std::move(trial);
        fit = trial_fit;
        --budget;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  return c;
}

struct MaResult {
  Placement placement;
  ObjectiveVector objectives;
  double cost = 0.0;
  std::vector<double> best_cost_per_generation;
};

/// Runs the full evolutionary loop on one snapshot and returns the best
/// feasible placement found. Bit-reproducible for a fixed params.rng_seed.
inline MaResult evolve(const DatacenterState& snapshot, const MaParams& params,
                       const ProblemConfig& config) {
  params.validate();
  MaInstance inst(snapshot, config);
  const int m = inst.vm_count();
  if (m == 0) {
    MaResult r;
    r.objectives = evaluate_objectives(snapshot, config);
    r.cost = scalarize(r.objectives, config);
    return r;
  }

  RngEngine rng(params.rng_seed);
  const double mutation_rate =
      params.mutation_rate < 0.0 ? 1.0 / static_cast<double>(m) : params.mutation_rate;

  struct Scored {
    Chromosome c;
    double fit;
  };
  auto scored = [&](Chromosome c) {
    const double f = inst.fitness(c);
    return Scored{std::move(c), f};
  };

  std::vector<Scored> pop;
  pop.reserve(static_cast<std::size_t>(params.population_size));
  // the incumbent must be repairable; anything else falls back to it, so one
  // unrepairable random draw cannot abort a feasible search
  pop.push_back(scored(repair(inst.incumbent(), inst)));
  auto repaired = [&](Chromosome c) {
    try {
      return repair(std::move(c), inst);
    } catch (const InfeasibleError&) {
      return pop.front().c;
    }
  };
  try {
    // constructive seed: re-place everything from scratch, best-fit decreasing
    DatacenterState fresh(snapshot.pms(), config.protection);
    fresh.set_clock(snapshot.clock());
    std::vector<int> ids;
    for (const auto& [id, vm] : snapshot.vms()) {
      fresh.create_vm(vm);
      ids.push_back(id);
    }
    place_batch(fresh, ids, Heuristic::BestFitDecreasing, config);
    pop.push_back(scored(repaired(inst.encode(fresh.placement()))));
  } catch (const InfeasibleError&) {
  }
  while (pop.size() < static_cast<std::size_t>(params.population_size)) {
    Chromosome c;
    c.genes.resize(static_cast<std::size_t>(m));
    for (int& g : c.genes) g = static_cast<int>(uniform_int(rng, 0, inst.pm_count()));
    pop.push_back(scored(repaired(std::move(c))));
  }

  auto tournament = [&]() -> const Chromosome& {
    std::size_t best = static_cast<std::size_t>(uniform_int(rng, 0, pop.size() - 1));
    for (int k = 1; k < params.tournament_size; ++k) {
      const std::size_t cand = static_cast<std::size_t>(uniform_int(rng, 0, pop.size() - 1));
      if (pop[cand].fit < pop[best].fit) best = cand;
    }
    return pop[best].c;
  };
  auto by_fitness = [](const Scored& a, const Scored& b) { return a.fit < b.fit; };

  auto improve = [&](const Chromosome& c) {
    return scored(local_search(consolidation_sweep(c, inst, inst.pm_count()), inst,
                               params.local_search_moves));
  };

  std::stable_sort(pop.begin(), pop.end(), by_fitness);
  pop.front() = improve(pop.front().c);
  std::stable_sort(pop.begin(), pop.end(), by_fitness);
  MaResult result;
  result.best_cost_per_generation.push_back(pop.front().fit);

  for (int gen = 0; gen < params.generations; ++gen) {
    std::vector<Scored> offspring;
    offspring.reserve(pop.size());
    while (offspring.size() < pop.size()) {
      Chromosome c1 = tournament(), c2 = tournament();
      if (uniform01(rng) < params.crossover_rate)
        std::tie(c1, c2) = crossover(c1, c2, rng);
      c1 = repaired(mutate(c1, rng, mutation_rate, inst.pm_count()));
      c2 = repaired(mutate(c2, rng, mutation_rate, inst.pm_count()));
      offspring.push_back(scored(std::move(c1)));
      if (offspring.size() < pop.size()) offspring.push_back(scored(std::move(c2)));
    }
    auto best_child = std::min_element(offspring.begin(), offspring.end(), by_fitness);
    *best_child = improve(best_child->c);

    pop.insert(pop.end(), std::make_move_iterator(offspring.begin()),
               std::make_move_iterator(offspring.end()));
    std::stable_sort(pop.begin(), pop.end(), by_fitness);
    pop.resize(static_cast<std::size_t>(params.population_size));
    result.best_cost_per_generation.push_back(pop.front().fit);
  }

  result.placement = inst.decode(pop.front().c);
  result.objectives = inst.objectives_of(pop.front().c);
  result.cost = pop.front().fit;
  return result;
}

}  // namespace vmp

#endif  // VMPLACE_MEMETIC_HPP
