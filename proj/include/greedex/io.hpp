#pragma once

// Serialization: sparse vectors as JSON pair lists, traces as CSV (canonical)
// or JSON, verification reports as JSON. Floats use 17 significant digits so
// a CSV round trip is exact.

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "greedex/analysis.hpp"
#include "greedex/core.hpp"
#include "greedex/counterexample.hpp"
#include "greedex/dictionary.hpp"
#include "greedex/error.hpp"
#include "greedex/greedy.hpp"

namespace greedex {

using json = nlohmann::json;

inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline double parse_double(const std::string& s) {
  if (s.empty()) throw Error(ErrorKind::ParseError, "empty numeric field");
  errno = 0;
  char* end = nullptr;
  const double x = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE) {
    throw Error(ErrorKind::ParseError, "bad number '" + s + "'");
  }
  return x;
}

// ---------------------------------------------------------------------------
// SparseVector <-> JSON: [[index, value], [[block, index], value], ...]

inline json to_json(const SparseVector& v) {
  json out = json::array();
  for (const auto& e : v.entries()) {
    if (e.id.is_plain()) {
      out.push_back(json::array({e.id.index, e.value}));
    } else {
      out.push_back(json::array({json::array({e.id.block, e.id.index}), e.value}));
    }
  }
  return out;
}

/// Accepts the pair-list form, or a plain array of numbers read as dense
/// coordinates 1..n.
inline SparseVector sparse_from_json(const json& j) {
  if (!j.is_array()) throw Error(ErrorKind::ConfigInvalid, "vector must be a JSON array");
  if (!j.empty() && j.front().is_number()) {
    std::vector<double> dense;
    for (const auto& x : j) {
      if (!x.is_number()) throw Error(ErrorKind::ConfigInvalid, "dense vector entries must be numbers");
      dense.push_back(x.get<double>());
    }
    return from_dense(dense);
  }
  std::vector<Entry> entries;
  for (const auto& pair : j) {
    if (!pair.is_array() || pair.size() != 2 || !pair[1].is_number()) {
      throw Error(ErrorKind::ConfigInvalid, "vector entries must be [index, value] pairs");
    }
    const auto& idx = pair[0];
    CoordId id;
    if (idx.is_number_unsigned() || idx.is_number_integer()) {
      const auto i = idx.get<long long>();
      if (i < 1) throw Error(ErrorKind::ConfigInvalid, "indices start at 1");
      id = CoordId{static_cast<std::uint64_t>(i)};
    } else if (idx.is_array() && idx.size() == 2 && idx[0].is_number_integer() && idx[1].is_number_integer()) {
      const auto b = idx[0].get<long long>();
      const auto i = idx[1].get<long long>();
      if (b < 1 || i < 1) throw Error(ErrorKind::ConfigInvalid, "block and index start at 1");
      id = CoordId{static_cast<std::uint32_t>(b), static_cast<std::uint64_t>(i)};
    } else {
      throw Error(ErrorKind::ConfigInvalid, "index must be an integer or a [block, index] pair");
    }
    entries.push_back({id, pair[1].get<double>()});
  }
  return SparseVector(std::move(entries));
}

// ---------------------------------------------------------------------------
// Trace CSV

inline constexpr const char* kTraceHeader = "m,atom,c,t,ip,sup,residual_norm,block";

inline void write_trace_csv(const Trace& trace, std::ostream& out) {
  out << kTraceHeader << '\n';
  for (const auto& s : trace.steps) {
    out << s.m << ',' << s.atom.id.to_string() << ',' << format_double(s.c) << ',' << format_double(s.t) << ','
        << format_double(s.ip) << ',' << format_double(s.sup) << ',' << format_double(s.residual_norm) << ',';
    if (s.block) out << *s.block;
    out << '\n';
  }
}

inline std::string trace_csv(const Trace& trace) {
  std::ostringstream os;
  write_trace_csv(trace, os);
  return os.str();
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace detail

/// Reads a trace written by write_trace_csv. Atom vectors are realized for
/// basis atoms only; `initial_norm` is NaN until supplied from metadata.
inline Trace read_trace_csv(std::istream& in) {
  Trace trace;
  trace.initial_norm = std::numeric_limits<double>::quiet_NaN();
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::ParseError, "empty trace file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kTraceHeader) throw Error(ErrorKind::ParseError, "unexpected trace header '" + line + "'");
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    auto f = detail::split_csv_line(line);
    if (f.size() != 8) {
      throw Error(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": expected 8 fields");
    }
    try {
      StepRecord s;
      char* end = nullptr;
      s.m = std::strtoull(f[0].c_str(), &end, 10);
      if (f[0].empty() || *end != '\0' || s.m == 0) throw Error(ErrorKind::ParseError, "bad step index");
      s.atom.id = AtomId::parse(f[1]);
      if (s.atom.id.kind == AtomId::Kind::Basis) {
        auto v = basis(s.atom.id.index, s.atom.id.negative ? -1.0 : 1.0);
        s.atom.vector = s.atom.id.block ? v.lift_to_block(s.atom.id.block) : v;
      }
      s.c = parse_double(f[2]);
      s.t = parse_double(f[3]);
      s.ip = parse_double(f[4]);
      s.sup = parse_double(f[5]);
      s.residual_norm = parse_double(f[6]);
      if (!f[7].empty()) {
        const auto b = std::strtoul(f[7].c_str(), &end, 10);
        if (*end != '\0' || b == 0) throw Error(ErrorKind::ParseError, "bad block");
        s.block = static_cast<std::uint32_t>(b);
      }
      trace.steps.push_back(std::move(s));
    } catch (const Error& e) {
      throw Error(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  trace.max_steps = trace.steps.size();
  trace.status.step = trace.steps.size();
  return trace;
}

// ---------------------------------------------------------------------------
// JSON forms

inline json to_json(const TraceStatus& s) {
  json j{{"outcome", std::string(to_string(s.outcome))}, {"step", s.step}, {"early_exit", s.early_exit}};
  if (s.error) j["error"] = std::string(to_string(*s.error));
  if (!s.message.empty()) j["message"] = s.message;
  return j;
}

inline json to_json(const StepRecord& s) {
  json j{{"m", s.m},   {"atom", s.atom.id.to_string()}, {"c", s.c},
         {"t", s.t},   {"ip", s.ip},                    {"sup", s.sup},
         {"residual_norm", s.residual_norm}};
  j["block"] = s.block ? json(*s.block) : json(nullptr);
  return j;
}

inline json trace_to_json(const Trace& trace) {
  json steps = json::array();
  for (const auto& s : trace.steps) steps.push_back(to_json(s));
  return json{{"initial_norm", trace.initial_norm},
              {"max_steps", trace.max_steps},
              {"status", to_json(trace.status)},
              {"steps", std::move(steps)}};
}

/// Metadata sidecar written next to each trace CSV.
inline json trace_metadata(const Trace& trace) {
  return json{{"initial_norm", format_double(trace.initial_norm)},
              {"final_residual_norm", format_double(trace.final_residual_norm())},
              {"steps", trace.steps.size()},
              {"max_steps", trace.max_steps},
              {"status", to_json(trace.status)}};
}

/// Reads `initial_norm` from a sidecar produced by trace_metadata.
inline double initial_norm_from_metadata(const json& meta) {
  if (!meta.contains("initial_norm")) throw Error(ErrorKind::ParseError, "metadata lacks initial_norm");
  const auto& v = meta.at("initial_norm");
  if (v.is_string()) return parse_double(v.get<std::string>());
  if (v.is_number()) return v.get<double>();
  throw Error(ErrorKind::ParseError, "bad initial_norm");
}

inline json to_json(const CheckResult& c) {
  return json{{"name", c.name},
              {"passed", c.passed},
              {"applicable", c.applicable},
              {"worst_violation", c.worst_violation},
              {"worst_step", c.worst_step},
              {"first_failure_step", c.first_failure_step},
              {"steps_checked", c.steps_checked},
              {"steps_skipped", c.steps_skipped},
              {"note", c.note}};
}

inline json to_json(const VerificationReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  return json{{"all_passed", r.all_passed()}, {"checks", std::move(checks)}};
}

inline json to_json(const ConditionReport& r) {
  json cps = json::array();
  for (const auto& [n, s] : r.checkpoints) cps.push_back(json{{"n", n}, {"partial_sum", s}});
  auto tri = [](const std::optional<bool>& b) { return b ? json(*b) : json("indeterminate"); };
  return json{{"horizon", r.horizon},
              {"partial_sum", r.partial_sum},
              {"tail_max_ratio", r.tail_max_ratio},
              {"half_tail_max_ratio", r.half_tail_max_ratio},
              {"checkpoints", std::move(cps)},
              {"divergence_plausible", tri(r.divergence_plausible)},
              {"ratio_vanishing", tri(r.ratio_vanishing)},
              {"note", r.note}};
}

/// [{group, subnorm_one_step, zeroed_step, residual_at_mark}, ...]
inline json marks_to_json(const std::vector<MarkReport>& marks) {
  json out = json::array();
  for (const auto& m : marks) {
    out.push_back(json{{"group", m.group + 1},
                       {"h", m.h},
                       {"subnorm_one_step", m.subnorm_one_step},
                       {"zeroed_step", m.zeroed_step},
                       {"residual_at_mark", m.residual_at_mark},
                       {"residual_at_zeroed", m.residual_at_zeroed},
                       {"expected_tail", m.expected_tail},
                       {"reached", m.reached}});
  }
  return out;
}

}  // namespace greedex
