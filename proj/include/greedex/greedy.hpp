#pragma once

// Greedy expansion with prescribed coefficients:
//
//   f_0 = f;  while f_{m-1} != 0:
//     choose phi_m with <f_{m-1}, phi_m> >= t_m sup_g <f_{m-1}, g>
//     f_m = f_{m-1} - c_m phi_m
//
// The approximant G_m = f - f_m is never stored; reconstruct() rebuilds it.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "greedex/core.hpp"
#include "greedex/dictionary.hpp"
#include "greedex/error.hpp"
#include "greedex/sequences.hpp"

namespace greedex {

struct StepRecord {
  std::size_t m = 0;
  Atom atom;               // phi_m
  double c = 0.0;          // c_m
  double t = 0.0;          // t_m
  double ip = 0.0;         // <f_{m-1}, phi_m>
  double sup = 0.0;        // sup_g <f_{m-1}, g>
  double residual_norm = 0.0;  // |f_m|
  std::optional<std::uint32_t> block;
};

enum class Outcome { Exhausted, Stopped, Aborted };

inline std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::Exhausted: return "Exhausted";
    case Outcome::Stopped: return "Stopped";
    case Outcome::Aborted: return "Aborted";
  }
  return "Unknown";
}

/// Exhausted: step budget used up (`step` = max_steps) or early exit.
/// Stopped: f_{step-1} has empty support.
/// Aborted: step `step` raised `error`.
struct TraceStatus {
  Outcome outcome = Outcome::Exhausted;
  std::size_t step = 0;
  bool early_exit = false;
  std::optional<ErrorKind> error;
  std::string message;
};

struct Trace {
  std::vector<StepRecord> steps;
  double initial_norm = 0.0;
  std::size_t max_steps = 0;
  TraceStatus status;
  SparseVector remainder;  // last f_m; not part of the CSV export

  double final_residual_norm() const { return steps.empty() ? initial_norm : steps.back().residual_norm; }
};

struct RunOptions {
  std::size_t max_steps = 1000;
  /// Ends the run (as Exhausted, never Stopped) once |f_m| drops below this.
  std::optional<double> early_exit;
};

inline Trace run(const SparseVector& f, const Dictionary& d, const CoefficientSequence& c,
                 const WeakeningSequence& tau, const SelectionPolicy& policy, const RunOptions& opts) {
  Trace trace;
  trace.initial_norm = norm(f);
  trace.max_steps = opts.max_steps;
  trace.steps.reserve(std::min<std::size_t>(opts.max_steps, 1u << 20));

  SparseVector current = f;
  for (std::size_t m = 1; m <= opts.max_steps; ++m) {
    if (current.empty()) {
      trace.status = TraceStatus{Outcome::Stopped, m, false, std::nullopt, {}};
      trace.remainder = std::move(current);
      return trace;
    }
    try {
      const double cm = c(m);
      const double tm = tau(m);
      Selection sel = select(d, current, tm, policy, m);
      current = subtract_scaled(current, cm, sel.atom.vector);
      StepRecord rec;
      rec.m = m;
      rec.c = cm;
      rec.t = tm;
      rec.ip = sel.ip;
      rec.sup = sel.sup;
      rec.residual_norm = norm(current);
      if (sel.atom.id.block != 0) rec.block = sel.atom.id.block;
      rec.atom = std::move(sel.atom);
      trace.steps.push_back(std::move(rec));
    } catch (const Error& e) {
      trace.status = TraceStatus{Outcome::Aborted, m, false, e.kind(), e.what()};
      trace.remainder = std::move(current);
      return trace;
    }
    if (opts.early_exit && trace.steps.back().residual_norm < *opts.early_exit && !current.empty()) {
      trace.status = TraceStatus{Outcome::Exhausted, m, true, std::nullopt, "early exit below threshold"};
      trace.remainder = std::move(current);
      return trace;
    }
  }
  if (current.empty()) {
    trace.status = TraceStatus{Outcome::Stopped, opts.max_steps + 1, false, std::nullopt, {}};
  } else {
    trace.status = TraceStatus{Outcome::Exhausted, opts.max_steps, false, std::nullopt, {}};
  }
  trace.remainder = std::move(current);
  return trace;
}

inline Trace run(const SparseVector& f, const Dictionary& d, const CoefficientSequence& c,
                 const WeakeningSequence& tau, const SelectionPolicy& policy, std::size_t max_steps) {
  return run(f, d, c, tau, policy, RunOptions{max_steps, std::nullopt});
}

/// G_M = sum_m c_m phi_m over the recorded steps.
inline SparseVector reconstruct(const Trace& trace) {
  std::vector<Entry> acc;
  for (const auto& s : trace.steps) {
    for (const auto& e : s.atom.vector.entries()) acc.push_back({e.id, s.c * e.value});
  }
  std::stable_sort(acc.begin(), acc.end(), [](const Entry& a, const Entry& b) { return a.id < b.id; });
  std::vector<Entry> merged;
  for (const auto& e : acc) {
    if (!merged.empty() && merged.back().id == e.id) {
      merged.back().value += e.value;
    } else {
      merged.push_back(e);
    }
  }
  return SparseVector::from_sorted_unchecked(std::move(merged));
}

/// Same as reconstruct(trace); `f` documents which target the trace belongs to.
inline SparseVector reconstruct(const Trace& trace, const SparseVector& /*f*/) { return reconstruct(trace); }

}  // namespace greedex
