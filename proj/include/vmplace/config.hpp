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
// JSON configuration files (keys mirror the corresponding struct fields),
// the PM catalog CSV, built-in PM fleets, and atomic file helpers.

#ifndef VMPLACE_CONFIG_HPP
#define VMPLACE_CONFIG_HPP

#include <cctype>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "vmplace/core.hpp"
#include "vmplace/heuristics.hpp"
#include "vmplace/memetic.hpp"
#include "vmplace/tracegen.hpp"

namespace vmp {

using nlohmann::json;

// ---------------------------------------------------------------------------
// File helpers
// ---------------------------------------------------------------------------

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Write-to-temp then rename, so failed commands leave no partial output.
inline void atomic_write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + tmp.string());
    out << content;
    if (!out) throw ConfigError("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

// ---------------------------------------------------------------------------
// PM catalogs
// ---------------------------------------------------------------------------

/// CSV columns: pm_id, cpu, ram, net, pmax, datacenter_id. Header optional.
inline std::vector<PhysicalMachine> parse_pm_catalog(std::string_view text) {
  std::vector<PhysicalMachine> pms;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
      std::size_t comma = line.find(',', start);
      if (comma == std::string_view::npos) {
        fields.push_back(line.substr(start));
        break;
      }
      fields.push_back(line.substr(start, comma - start));
      start = comma + 1;
    }
    if (line_no == 1 && !fields.empty() && !fields[0].empty() &&
        !std::isdigit(static_cast<unsigned char>(fields[0][0])))
      continue;  // header
    if (fields.size() != 6)
      throw SchemaError(line_no, "expected 6 columns, got " + std::to_string(fields.size()));
    PhysicalMachine pm;
    pm.pm_id = detail::parse_int(fields[0], line_no);
    pm.capacity = {detail::parse_number(fields[1], line_no),
                   detail::parse_number(fields[2], line_no),
                   detail::parse_number(fields[3], line_no)};
    pm.max_power = detail::parse_number(fields[4], line_no);
    pm.datacenter_id = detail::parse_int(fields[5], line_no);
    pms.push_back(pm);
  }
  return pms;
}

inline std::string write_pm_catalog(const std::vector<PhysicalMachine>& pms) {
  std::string out = "pm_id,cpu,ram,net,pmax,datacenter_id\n";
  for (const auto& pm : pms) {
    out += std::to_string(pm.pm_id) + ',' + format_double(pm.capacity.cpu()) + ',' +
           format_double(pm.capacity.ram()) + ',' + format_double(pm.capacity.net()) + ',' +
           format_double(pm.max_power) + ',' + std::to_string(pm.datacenter_id) + '\n';
  }
  return out;
}

namespace detail {

inline std::vector<PhysicalMachine> make_fleet(
    const std::vector<std::pair<int, PhysicalMachine>>& groups) {
  std::vector<PhysicalMachine> pms;
  int id = 1;
  for (const auto& [count, tmpl] : groups)
    for (int i = 0; i < count; ++i) {
      PhysicalMachine pm = tmpl;
      pm.pm_id = id++;
      pms.push_back(pm);
    }
  return pms;
}

}  // namespace detail

/// Built-in fleets:
///   "part1" - 10 homogeneous machines of 8 ECU / 10 GB / 780 Mbps / 960 W;
///   "low"   - 50 small, 50 medium, 50 large, 30 extra-large (low CPU load);
///   "high"  - 20 small, 20 medium, 15 large, 8 extra-large (high CPU load).
inline std::vector<PhysicalMachine> builtin_fleet(const std::string& name) {
  const PhysicalMachine s{0, {32, 128, 1000}, 800, 0};
  const PhysicalMachine m{0, {64, 256, 1000}, 1000, 0};
  const PhysicalMachine l{0, {256, 512, 1000}, 3000, 0};
  const PhysicalMachine xl{0, {512, 1024, 20000}, 5000, 0};
  if (name == "part1")
    return detail::make_fleet({{10, PhysicalMachine{0, {8, 10, 780}, 960, 0}}});
  if (name == "low") return detail::make_fleet({{50, s}, {50, m}, {50, l}, {30, xl}});
  if (name == "high") return detail::make_fleet({{20, s}, {20, m}, {15, l}, {8, xl}});
  throw ConfigError("unknown load profile '" + name + "' (use part1, low, or high)");
}

// ---------------------------------------------------------------------------
// JSON parsing
// ---------------------------------------------------------------------------

namespace detail {

inline void check_keys(const json& j, const std::set<std::string>& allowed,
                       const std::string& where) {
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
}

}  // namespace detail

/// "uniform(a,b)" or "poisson(lambda)", case-insensitive.
inline Pdf parse_pdf(std::string spec) {
  for (auto& ch : spec) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  spec.erase(std::remove(spec.begin(), spec.end(), ' '), spec.end());
  const auto open = spec.find('(');
  if (open == std::string::npos || spec.back() != ')')
    throw ConfigError("bad PDF spec '" + spec + "'");
  const std::string name = spec.substr(0, open);
  const std::string args = spec.substr(open + 1, spec.size() - open - 2);
  try {
    if (name == "uniform") {
      const auto comma = args.find(',');
      if (comma == std::string::npos) throw ConfigError("uniform needs two arguments");
      return Pdf::uniform(std::stod(args.substr(0, comma)), std::stod(args.substr(comma + 1)));
    }
    if (name == "poisson") return Pdf::poisson(std::stod(args));
  } catch (const std::invalid_argument&) {
    throw ConfigError("bad PDF arguments in '" + spec + "'");
  }
  throw ConfigError("unknown PDF '" + name + "' (use uniform or poisson)");
}

inline MaParams ma_from_json(const json& j) {
  detail::check_keys(j,
                     {"population_size", "generations", "crossover_rate", "mutation_rate",
                      "tournament_size", "local_search_moves", "rng_seed"},
                     "ma");
  MaParams p;
  p.population_size = j.value("population_size", p.population_size);
  p.generations = j.value("generations", p.generations);
  p.crossover_rate = j.value("crossover_rate", p.crossover_rate);
  p.mutation_rate = j.value("mutation_rate", p.mutation_rate);
  p.tournament_size = j.value("tournament_size", p.tournament_size);
  p.local_search_moves = j.value("local_search_moves", p.local_search_moves);
  p.rng_seed = j.value("rng_seed", p.rng_seed);
  p.validate();
  return p;
}

struct RunConfig {
  ProblemConfig problem;
  MaParams ma;
  std::string pm_catalog;    // CSV path; empty when load_profile is used
  std::string load_profile;  // built-in fleet name, may be empty
  Heuristic ivmp_heuristic = Heuristic::BestFitDecreasing;
};

inline RunConfig run_config_from_json(const json& j) {
  detail::check_keys(
      j, {"s", "c_hat", "federation_factor", "pmin_factor", "protection", "federation_enabled",
          "objective_set", "scalarizer", "ws_weights", "vmpr_period", "vmpr_duration", "rng_seed",
          "ma", "pm_catalog", "load_profile", "ivmp_heuristic"},
      "config");
  RunConfig rc;
  ProblemConfig& p = rc.problem;
  p.s = j.value("s", p.s);
  p.c_hat = j.value("c_hat", p.c_hat);
  p.federation_factor = j.value("federation_factor", p.federation_factor);
  p.pmin_factor = j.value("pmin_factor", p.pmin_factor);
  p.federation_enabled = j.value("federation_enabled", p.federation_enabled);
  if (j.contains("protection")) {
    const json& prot = j.at("protection");
    if (prot.is_number()) {
      p.protection = Resources::uniform(prot.get<double>());
    } else if (prot.is_array() && prot.size() == kResourceCount) {
      for (int k = 0; k < kResourceCount; ++k) p.protection[k] = prot[k].get<double>();
    } else {
      throw ConfigError("protection must be a number or an array of 3");
    }
  }
  if (j.contains("objective_set")) {
    const std::string s = j.at("objective_set").get<std::string>();
    if (s == "part1")
      p.objective_set = ObjectiveSet::PartI;
    else if (s == "part2")
      p.objective_set = ObjectiveSet::PartII;
    else
      throw ConfigError("objective_set must be part1 or part2");
  }
  if (j.contains("scalarizer")) {
    const std::string s = j.at("scalarizer").get<std::string>();
    if (s == "ws")
      p.scalarizer = ScalarMethod::WeightedSum;
    else if (s == "ed")
      p.scalarizer = ScalarMethod::Euclidean;
    else if (s == "cd")
      p.scalarizer = ScalarMethod::Chebyshev;
    else
      throw ConfigError("scalarizer must be ws, ed, or cd");
  }
  if (j.contains("ws_weights")) {
    p.ws_weights = j.at("ws_weights").get<std::vector<double>>();
  } else if (p.objective_set == ObjectiveSet::PartII) {
    p.ws_weights = {0.25, 0.25, 0.25, 0.25};
  }
  p.vmpr_period = j.value("vmpr_period", p.vmpr_period);
  p.vmpr_duration = j.value("vmpr_duration", p.vmpr_duration);
  p.rng_seed = j.value("rng_seed", p.rng_seed);
  p.validate();
  if (j.contains("ma")) rc.ma = ma_from_json(j.at("ma"));
  rc.pm_catalog = j.value("pm_catalog", std::string{});
  rc.load_profile = j.value("load_profile", std::string{});
  if (j.contains("ivmp_heuristic")) {
    const auto h = parse_heuristic(j.at("ivmp_heuristic").get<std::string>());
    if (!h) throw ConfigError("ivmp_heuristic must be one of ff|bf|wf|ffd|bfd");
    rc.ivmp_heuristic = *h;
  }
  return rc;
}

inline RunConfig load_run_config(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return run_config_from_json(j);
}

// ---------------------------------------------------------------------------
// Generator configuration
// ---------------------------------------------------------------------------

struct TraceConfig {
  enum class Mode { Cwtg, Legacy };
  Mode mode = Mode::Cwtg;
  GeneratorParams cwtg;
  LegacyParams legacy;
};

inline TraceConfig trace_config_from_json(const json& j) {
  TraceConfig tc;
  const std::string mode = j.value("mode", std::string{"cwtg"});
  if (mode == "legacy") {
    detail::check_keys(j, {"mode", "kind", "lambda", "duration", "num_vms", "rng_seed"},
                       "trace config");
    tc.mode = TraceConfig::Mode::Legacy;
    const std::string kind = j.value("kind", std::string{"poisson"});
    if (kind == "poisson")
      tc.legacy.kind = LegacyKind::Poisson;
    else if (kind == "uniform")
      tc.legacy.kind = LegacyKind::Uniform;
    else
      throw ConfigError("legacy kind must be poisson or uniform");
    tc.legacy.lambda = j.value("lambda", tc.legacy.lambda);
    tc.legacy.duration = j.value("duration", tc.legacy.duration);
    tc.legacy.num_vms = j.value("num_vms", tc.legacy.num_vms);
    tc.legacy.rng_seed = j.value("rng_seed", tc.legacy.rng_seed);
    return tc;
  }
  if (mode != "cwtg") throw ConfigError("mode must be cwtg or legacy");
  detail::check_keys(j,
                     {"mode", "duration", "num_datacenters", "num_services",
                      "max_vms_per_service", "instance_types", "horizontal_elasticity",
                      "vertical_elasticity", "server_util", "network_util", "r_cpu", "r_ram",
                      "r_net", "rng_seed"},
                     "trace config");
  GeneratorParams& g = tc.cwtg;
  g.duration = j.value("duration", g.duration);
  g.num_datacenters = j.value("num_datacenters", g.num_datacenters);
  g.num_services = j.value("num_services", g.num_services);
  g.max_vms_per_service = j.value("max_vms_per_service", g.max_vms_per_service);
  if (j.contains("instance_types")) {
    g.instance_types.clear();
    for (const auto& it : j.at("instance_types")) {
      detail::check_keys(it, {"name", "cpu", "ram", "net"}, "instance type");
      InstanceType t;
      t.name = it.value("name", std::string{});
      t.cpu = it.at("cpu").get<double>();
      t.ram = it.at("ram").get<double>();
      t.net = it.at("net").get<double>();
      g.instance_types.push_back(t);
    }
  }
  if (j.contains("horizontal_elasticity"))
    g.horizontal_elasticity = parse_pdf(j.at("horizontal_elasticity").get<std::string>());
  if (j.contains("vertical_elasticity"))
    g.vertical_elasticity = parse_pdf(j.at("vertical_elasticity").get<std::string>());
  if (j.contains("server_util")) g.server_util = parse_pdf(j.at("server_util").get<std::string>());
  if (j.contains("network_util"))
    g.network_util = parse_pdf(j.at("network_util").get<std::string>());
  g.r_cpu = j.value("r_cpu", g.r_cpu);
  g.r_ram = j.value("r_ram", g.r_ram);
  g.r_net = j.value("r_net", g.r_net);
  g.rng_seed = j.value("rng_seed", g.rng_seed);
  g.validate();
  return tc;
}

inline TraceConfig load_trace_config(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return trace_config_from_json(j);
}

/// Parameter echo for the sidecar manifest written next to generated traces.
inline json trace_config_to_json(const TraceConfig& tc) {
  json j;
  if (tc.mode == TraceConfig::Mode::Legacy) {
    j["mode"] = "legacy";
    j["kind"] = tc.legacy.kind == LegacyKind::Poisson ? "poisson" : "uniform";
    j["lambda"] = tc.legacy.lambda;
    j["duration"] = tc.legacy.duration;
    j["num_vms"] = tc.legacy.num_vms;
    j["rng_seed"] = tc.legacy.rng_seed;
    return j;
  }
  const GeneratorParams& g = tc.cwtg;
  j["mode"] = "cwtg";
  j["duration"] = g.duration;
  j["num_datacenters"] = g.num_datacenters;
  j["num_services"] = g.num_services;
  j["max_vms_per_service"] = g.max_vms_per_service;
  j["horizontal_elasticity"] = g.horizontal_elasticity.describe();
  j["vertical_elasticity"] = g.vertical_elasticity.describe();
  j["server_util"] = g.server_util.describe();
  j["network_util"] = g.network_util.describe();
  j["r_cpu"] = g.r_cpu;
  j["r_ram"] = g.r_ram;
  j["r_net"] = g.r_net;
  j["rng_seed"] = g.rng_seed;
  json types = json::array();
  for (const auto& t : g.instance_types)
    types.push_back({{"name", t.name}, {"cpu", t.cpu}, {"ram", t.ram}, {"net", t.net}});
  j["instance_types"] = types;
  return j;
}

}  // namespace vmp

#endif  // VMPLACE_CONFIG_HPP
