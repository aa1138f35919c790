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
// Workload trace schema: one row per living VM per discrete time step,
// 15 comma-separated columns in this order:
//
//   t, b, c, v, cpu, ram, net, u_cpu, u_ram, u_net,
//   r_cpu, r_ram, r_net, t_init, t_end
//
// b = service id, c = datacenter id, v = vm id, u_* = utilization percent in
// [0, 100], r_* = revenue rates [USD per resource unit], t_end exclusive.
// An optional 16th column `sla` carries priority levels; it is written only
// when a trace contains a level above 1 and defaults to 1 when absent.

#ifndef VMPLACE_TRACE_HPP
#define VMPLACE_TRACE_HPP

#include <charconv>
#include <cstdio>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "vmplace/core.hpp"

namespace vmp {

struct TraceEvent {
  int t = 0;
  int service = 0;     // b
  int datacenter = 0;  // c
  int vm = 0;          // v
  double cpu = 0, ram = 0, net = 0;
  double u_cpu = 100, u_ram = 100, u_net = 100;  // percent
  double r_cpu = 0, r_ram = 0, r_net = 0;        // USD per unit
  int t_init = 0;
  int t_end = 0;  // exclusive
  int sla = 1;

  Resources resources() const { return {cpu, ram, net}; }
  Resources utilization_ratio() const { return {u_cpu / 100.0, u_ram / 100.0, u_net / 100.0}; }
  Resources rates() const { return {r_cpu, r_ram, r_net}; }
  double revenue() const { return cpu * r_cpu + ram * r_ram + net * r_net; }

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

/// Shortest representation that parses back to the identical double.
inline std::string format_double(double x) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, p);
}

inline constexpr std::string_view kTraceHeader =
    "t,b,c,v,cpu,ram,net,u_cpu,u_ram,u_net,r_cpu,r_ram,r_net,t_init,t_end";

inline std::string write_csv(const std::vector<TraceEvent>& events) {
  bool with_sla = false;
  for (const auto& e : events)
    if (e.sla > 1) with_sla = true;

  std::string out(kTraceHeader);
  if (with_sla) out += ",sla";
  out += '\n';
  for (const auto& e : events) {
    out += std::to_string(e.t);
    out += ',';
    out += std::to_string(e.service);
    out += ',';
    out += std::to_string(e.datacenter);
    out += ',';
    out += std::to_string(e.vm);
    for (double x : {e.cpu, e.ram, e.net, e.u_cpu, e.u_ram, e.u_net, e.r_cpu, e.r_ram, e.r_net}) {
      out += ',';
      out += format_double(x);
    }
    out += ',';
    out += std::to_string(e.t_init);
    out += ',';
    out += std::to_string(e.t_end);
    if (with_sla) {
      out += ',';
      out += std::to_string(e.sla);
    }
    out += '\n';
  }
  return out;
}

namespace detail {

inline double parse_number(std::string_view field, int line) {
  double x = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [p, ec] = std::from_chars(first, last, x);
  if (ec != std::errc{} || p != last)
    throw SchemaError(line, "not a number: '" + std::string(field) + "'");
  return x;
}

inline int parse_int(std::string_view field, int line) {
  const double x = parse_number(field, line);
  const int i = static_cast<int>(x);
  if (static_cast<double>(i) != x)
    throw SchemaError(line, "not an integer: '" + std::string(field) + "'");
  return i;
}

}  // namespace detail

/// Parses trace text. A leading header line is skipped. Throws SchemaError
/// (with the 1-based line number) on a wrong column count, a non-numeric
/// field, or a utilization outside [0, 100].
inline std::vector<TraceEvent> parse_csv(std::string_view text) {
  std::vector<TraceEvent> out;
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
    if (line_no == 1 && !fields.empty() &&
        fields[0].find_first_not_of(" \t") != std::string_view::npos &&
        (fields[0][0] < '0' || fields[0][0] > '9') && fields[0][0] != '-' && fields[0][0] != '+')
      continue;  // header

    if (fields.size() != 15 && fields.size() != 16)
      throw SchemaError(line_no, "expected 15 or 16 columns, got " +
                                     std::to_string(fields.size()));
    TraceEvent e;
    e.t = detail::parse_int(fields[0], line_no);
    e.service = detail::parse_int(fields[1], line_no);
    e.datacenter = detail::parse_int(fields[2], line_no);
    e.vm = detail::parse_int(fields[3], line_no);
    e.cpu = detail::parse_number(fields[4], line_no);
    e.ram = detail::parse_number(fields[5], line_no);
    e.net = detail::parse_number(fields[6], line_no);
    e.u_cpu = detail::parse_number(fields[7], line_no);
    e.u_ram = detail::parse_number(fields[8], line_no);
    e.u_net = detail::parse_number(fields[9], line_no);
    e.r_cpu = detail::parse_number(fields[10], line_no);
    e.r_ram = detail::parse_number(fields[11], line_no);
    e.r_net = detail::parse_number(fields[12], line_no);
    e.t_init = detail::parse_int(fields[13], line_no);
    e.t_end = detail::parse_int(fields[14], line_no);
    if (fields.size() == 16) e.sla = detail::parse_int(fields[15], line_no);
    for (double u : {e.u_cpu, e.u_ram, e.u_net})
      if (u < 0.0 || u > 100.0)
        throw SchemaError(line_no, "utilization outside [0, 100]");
    out.push_back(e);
  }
  return out;
}

}  // namespace vmp

#endif  // VMPLACE_TRACE_HPP
