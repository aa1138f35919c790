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
// Scenario aggregation, Pareto comparison, and the ranking tables used to
// compare methods across workloads and load profiles.

#ifndef VMPLACE_REPORT_HPP
#define VMPLACE_REPORT_HPP

#include <algorithm>
#include <array>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "vmplace/core.hpp"
#include "vmplace/simulation.hpp"

namespace vmp {

/// Mean scalarized cost over all recorded steps of one run.
inline double scenario_average(const SimulationRun& run) {
  if (run.steps.empty()) throw ConfigError("scenario average of an empty run");
  double s = 0.0;
  for (const auto& r : run.steps) s += r.scalar;
  return s / static_cast<double>(run.steps.size());
}

/// Mean of per-scenario averages.
inline double cross_scenario_average(const std::vector<double>& per_scenario) {
  if (per_scenario.empty()) throw ConfigError("cross-scenario average of no scenarios");
  double s = 0.0;
  for (double x : per_scenario) s += x;
  return s / static_cast<double>(per_scenario.size());
}

/// Strict Pareto dominance under minimization: a is no worse everywhere and
/// strictly better somewhere.
inline bool pareto_dominates(const std::array<double, 4>& a, const std::array<double, 4>& b) {
  bool strictly = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) return false;
    if (a[i] < b[i]) strictly = true;
  }
  return strictly;
}

enum class Preference { First, Second, Tie };

/// Preference between (possibly mutually non-dominated) vectors: whichever is
/// strictly better in more objectives wins; equal counts tie.
inline Preference preferred(const std::array<double, 4>& a, const std::array<double, 4>& b) {
  int wins_a = 0, wins_b = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) ++wins_a;
    if (b[i] < a[i]) ++wins_b;
  }
  if (wins_a > wins_b) return Preference::First;
  if (wins_b > wins_a) return Preference::Second;
  return Preference::Tie;
}

// ---------------------------------------------------------------------------
// Method results and tables
// ---------------------------------------------------------------------------

struct MethodScenario {
  std::string scenario;
  std::string load;  // load-profile label, may be empty
  double mean_cost = 0.0;
  std::array<double, 4> mean_raw{};
  std::array<double, 4> mean_norm{};
};

struct MethodResult {
  std::string method;
  std::string objective_set;  // "part1" or "part2"
  std::vector<MethodScenario> scenarios;

  double cross_mean() const {
    std::vector<double> v;
    v.reserve(scenarios.size());
    for (const auto& s : scenarios) v.push_back(s.mean_cost);
    return cross_scenario_average(v);
  }
};

inline std::array<const char*, 4> objective_labels(const std::string& objective_set) {
  if (objective_set == "part2") return {"f1_power", "f2_revenue", "f3_wasted", "f4_reconfig"};
  return {"f1_power", "f2_leasing", "f3_qos", "f4_wasted"};
}

struct ReportTable {
  std::string name;  // file stem
  std::string title;
  std::vector<std::string> columns;            // columns[0] labels the row key
  std::vector<std::vector<std::string>> rows;  // row[0] is the label

  std::string to_csv() const {
    std::string out;
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) out += ',';
      out += columns[c];
    }
    out += '\n';
    for (const auto& row : rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c) out += ',';
        out += row[c];
      }
      out += '\n';
    }
    return out;
  }

  std::string to_text() const {
    std::vector<std::size_t> width(columns.size(), 0);
    for (std::size_t c = 0; c < columns.size(); ++c) width[c] = columns[c].size();
    for (const auto& row : rows)
      for (std::size_t c = 0; c < row.size() && c < width.size(); ++c)
        width[c] = std::max(width[c], row[c].size());
    std::string out = title + "\n";
    auto emit = [&](const std::vector<std::string>& cells) {
      for (std::size_t c = 0; c < width.size(); ++c) {
        const std::string& s = c < cells.size() ? cells[c] : std::string{};
        if (c == 0) {
          out += s;
          out.append(width[c] - s.size(), ' ');
        } else {
          out += "  ";
          out.append(width[c] - s.size(), ' ');
          out += s;
        }
      }
      out += '\n';
    };
    emit(columns);
    for (const auto& row : rows) emit(row);
    return out;
  }
};

namespace detail {

inline std::string format_cell(double x) {
  char buf[48];
  if (std::abs(x) >= 1000.0)
    std::snprintf(buf, sizeof buf, "%.1f", x);
  else
    std::snprintf(buf, sizeof buf, "%.4f", x);
  return buf;
}

inline std::string ordinal(int rank) {
  const int mod100 = rank % 100;
  const char* suffix = "th";
  if (mod100 < 11 || mod100 > 13) {
    switch (rank % 10) {
      case 1: suffix = "st"; break;
      case 2: suffix = "nd"; break;
      case 3: suffix = "rd"; break;
    }
  }
  return std::to_string(rank) + suffix;
}

}  // namespace detail

/// Builds the three comparison tables:
///  1. combined scalarized cost per scenario and method, with the per-row
///     best, a cross-scenario average row, and a ranking row;
///  2. per-objective normalized means per scenario and method;
///  3. per-objective raw means per method, split by load profile.
/// Ranking ties break lexicographically by method label. All inputs must
/// share one objective set.
inline std::vector<ReportTable> build_report(const std::vector<MethodResult>& results) {
  if (results.empty()) throw ConfigError("no results to report");
  for (const auto& r : results)
    if (r.objective_set != results.front().objective_set)
      throw ConfigError("cannot compare runs with different objective sets (" +
                        r.objective_set + " vs " + results.front().objective_set + ")");
  const auto labels = objective_labels(results.front().objective_set);

  std::vector<std::string> scenarios;
  for (const auto& r : results)
    for (const auto& s : r.scenarios)
      if (std::find(scenarios.begin(), scenarios.end(), s.scenario) == scenarios.end())
        scenarios.push_back(s.scenario);

  auto find_scenario = [](const MethodResult& r, const std::string& label) {
    for (const auto& s : r.scenarios)
      if (s.scenario == label) return &s;
    return static_cast<const MethodScenario*>(nullptr);
  };

  std::vector<ReportTable> tables;

  // 1. combined costs
  {
    ReportTable t;
    t.name = "combined";
    t.title = "Mean combined objective cost per scenario";
    t.columns.push_back("scenario");
    for (const auto& r : results) t.columns.push_back(r.method);
    t.columns.push_back("best");
    for (const auto& label : scenarios) {
      std::vector<std::string> row{label};
      double best = 0.0;
      std::string best_method;
      bool first = true;
      for (const auto& r : results) {
        const MethodScenario* s = find_scenario(r, label);
        if (!s) {
          row.push_back("-");
          continue;
        }
        row.push_back(detail::format_cell(s->mean_cost));
        if (first || s->mean_cost < best) {
          best = s->mean_cost;
          best_method = r.method;
          first = false;
        }
      }
      row.push_back(best_method);
      t.rows.push_back(std::move(row));
    }
    std::vector<std::pair<double, std::string>> order;
    std::vector<std::string> avg_row{"average"};
    for (const auto& r : results) {
      const double mean = r.cross_mean();
      avg_row.push_back(detail::format_cell(mean));
      order.emplace_back(mean, r.method);
    }
    std::sort(order.begin(), order.end());
    avg_row.push_back(order.front().second);
    t.rows.push_back(std::move(avg_row));
    std::vector<std::string> rank_row{"ranking"};
    for (const auto& r : results) {
      int rank = 1;
      for (const auto& [cost, method] : order) {
        if (method == r.method) break;
        ++rank;
      }
      rank_row.push_back(detail::ordinal(rank));
    }
    rank_row.push_back("");
    t.rows.push_back(std::move(rank_row));
    tables.push_back(std::move(t));
  }

  // 2. per-objective breakdown (normalized means)
  {
    ReportTable t;
    t.name = "objectives";
    t.title = "Mean normalized objective cost per scenario";
    t.columns.push_back("scenario/objective");
    for (const auto& r : results) t.columns.push_back(r.method);
    t.columns.push_back("best");
    for (const auto& label : scenarios) {
      for (std::size_t i = 0; i < 4; ++i) {
        std::vector<std::string> row{label + "/" + labels[i]};
        double best = 0.0;
        std::string best_method;
        bool first = true;
        for (const auto& r : results) {
          const MethodScenario* s = find_scenario(r, label);
          if (!s) {
            row.push_back("-");
            continue;
          }
          row.push_back(detail::format_cell(s->mean_norm[i]));
          if (first || s->mean_norm[i] < best) {
            best = s->mean_norm[i];
            best_method = r.method;
            first = false;
          }
        }
        row.push_back(best_method);
        t.rows.push_back(std::move(row));
      }
    }
    tables.push_back(std::move(t));
  }

  // 3. raw objective means by load profile; the best method per
  //    (objective, load) cell group is starred
  {
    std::vector<std::string> loads;
    for (const auto& r : results)
      for (const auto& s : r.scenarios) {
        const std::string l = s.load.empty() ? "all" : s.load;
        if (std::find(loads.begin(), loads.end(), l) == loads.end()) loads.push_back(l);
      }
    ReportTable t;
    t.name = "by_load";
    t.title = "Mean raw objective cost per method and load profile";
    t.columns.push_back("objective/method");
    for (const auto& l : loads) t.columns.push_back(l);
    // mean over each method's scenarios with the given load
    auto mean_raw = [&](const MethodResult& r, std::size_t obj, const std::string& load,
                        double& out) {
      double s = 0.0;
      int n = 0;
      for (const auto& sc : r.scenarios) {
        const std::string l = sc.load.empty() ? "all" : sc.load;
        if (l != load) continue;
        s += sc.mean_raw[obj];
        ++n;
      }
      if (n == 0) return false;
      out = s / n;
      return true;
    };
    for (std::size_t i = 0; i < 4; ++i) {
      std::vector<int> best_row(loads.size(), -1);
      std::vector<std::vector<double>> cell(results.size(),
                                            std::vector<double>(loads.size(), 0.0));
      std::vector<std::vector<bool>> has(results.size(), std::vector<bool>(loads.size(), false));
      for (std::size_t m = 0; m < results.size(); ++m)
        for (std::size_t l = 0; l < loads.size(); ++l) {
          has[m][l] = mean_raw(results[m], i, loads[l], cell[m][l]);
          if (has[m][l] &&
              (best_row[l] < 0 || cell[m][l] < cell[static_cast<std::size_t>(best_row[l])][l]))
            best_row[l] = static_cast<int>(m);
        }
      for (std::size_t m = 0; m < results.size(); ++m) {
        std::vector<std::string> row{std::string(labels[i]) + "/" + results[m].method};
        for (std::size_t l = 0; l < loads.size(); ++l) {
          if (!has[m][l]) {
            row.push_back("-");
            continue;
          }
          std::string cellv = detail::format_cell(cell[m][l]);
          if (static_cast<int>(m) == best_row[l]) cellv += "*";
          row.push_back(std::move(cellv));
        }
        t.rows.push_back(std::move(row));
      }
    }
    tables.push_back(std::move(t));
  }

  return tables;
}

}  // namespace vmp

#endif  // VMPLACE_REPORT_HPP
