#pragma once

// Post-hoc checks on traces. Every function here is a pure function of its
// arguments.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "greedex/dictionary.hpp"
#include "greedex/error.hpp"
#include "greedex/greedy.hpp"

namespace greedex {

struct CheckResult {
  std::string name;
  bool passed = true;
  bool applicable = true;
  double worst_violation = 0.0;  // reported even on pass
  std::size_t worst_step = 0;    // 0 when no step was examined
  std::size_t first_failure_step = 0;
  std::size_t steps_checked = 0;
  std::size_t steps_skipped = 0;
  std::string note;
};

struct VerificationReport {
  std::vector<CheckResult> checks;

  bool all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
  }
  const CheckResult* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
  void append(const VerificationReport& other) {
    checks.insert(checks.end(), other.checks.begin(), other.checks.end());
  }
};

namespace detail {

inline void record(CheckResult& r, double violation, std::size_t step, double tol) {
  ++r.steps_checked;
  if (r.worst_step == 0 || violation > r.worst_violation) {
    r.worst_violation = violation;
    r.worst_step = step;
  }
  if (violation > tol) {
    r.passed = false;
    if (r.first_failure_step == 0) r.first_failure_step = step;
  }
}

}  // namespace detail

/// |f_m|^2 = |f_{m-1}|^2 - 2 c_m <f_{m-1}, phi_m> + c_m^2, relative to the
/// largest term. Step 1 needs the initial norm; traces loaded without one set
/// `initial_norm` to NaN and step 1 is skipped.
inline VerificationReport verify_energy_identity(const Trace& trace, double tol) {
  CheckResult r;
  r.name = "energy_identity";
  double prev = trace.initial_norm;
  for (const auto& s : trace.steps) {
    if (std::isnan(prev)) {
      ++r.steps_skipped;
      prev = s.residual_norm;
      continue;
    }
    const double p2 = prev * prev;
    const double rhs = p2 - 2.0 * s.c * s.ip + s.c * s.c;
    const double lhs = s.residual_norm * s.residual_norm;
    const double scale = std::max({p2, s.c * s.c, std::abs(2.0 * s.c * s.ip), 1e-300});
    detail::record(r, std::abs(lhs - rhs) / scale, s.m, tol);
    prev = s.residual_norm;
  }
  if (r.steps_skipped > 0) r.note = "initial norm unknown; first step not checked";
  return VerificationReport{{r}};
}

/// <f_{m-1}, phi_m> >= t_m sup - tol at every step. Violation is
/// max(0, t sup - ip).
inline VerificationReport verify_greedy_condition(const Trace& trace, double tol) {
  CheckResult r;
  r.name = "greedy_condition";
  for (const auto& s : trace.steps) {
    detail::record(r, std::max(0.0, s.t * s.sup - s.ip), s.m, tol);
  }
  return VerificationReport{{r}};
}

/// Descent bound for finite dictionaries: once c_n / t_n < eps and
/// c_n < eps / c, every step taken from a remainder with |f_n| >= eps / c obeys
///
///   |f_{n+1}|^2 <= |f_n|^2 - c_{n+1} t_{n+1} eps.
///
/// A sampled coherence estimate over-states c, so with an estimate the check
/// is advisory. The window starts at `from_step` or after the last step that
/// breaks the two coefficient bounds, whichever is later.
inline VerificationReport verify_descent_inequality(const Trace& trace, const CoherenceEstimate& c_est,
                                                    double eps, std::size_t from_step, double tol = 1e-12) {
  if (!(c_est.value > 0.0)) throw Error(ErrorKind::PreconditionUnmet, "coherence estimate must be positive");
  if (!(eps > 0.0)) throw Error(ErrorKind::PreconditionUnmet, "eps must be positive");
  const auto& steps = trace.steps;
  std::size_t start = std::max<std::size_t>(from_step, 1);
  for (const auto& s : steps) {
    if (s.m >= start && !(s.c / s.t < eps && s.c < eps / c_est.value)) start = s.m + 1;
  }
  if (start > steps.size()) {
    throw Error(ErrorKind::PreconditionUnmet,
                "no step satisfies c_n/t_n < eps and c_n < eps/c within the trace horizon");
  }
  CheckResult r;
  r.name = "descent_inequality";
  const double threshold = eps / c_est.value;
  for (std::size_t m = start; m <= steps.size(); ++m) {
    const auto& s = steps[m - 1];
    const double prev = m == 1 ? trace.initial_norm : steps[m - 2].residual_norm;
    if (std::isnan(prev) || prev < threshold) {
      ++r.steps_skipped;
      continue;
    }
    const double bound = prev * prev - s.c * s.t * eps;
    detail::record(r, std::max(0.0, s.residual_norm * s.residual_norm - bound), m, tol);
  }
  r.applicable = r.steps_checked > 0;
  r.note = "window starts at step " + std::to_string(start) + "; " + std::to_string(r.steps_skipped) +
           " steps below eps/c not applicable";
  if (!r.applicable) r.note += "; vacuous pass";
  return VerificationReport{{r}};
}

/// Steps attributed to each block must partition 1..len(steps).
inline VerificationReport verify_block_partition(const Trace& trace) {
  CheckResult r;
  r.name = "block_partition";
  std::set<std::uint32_t> blocks;
  std::size_t attributed = 0;
  for (const auto& s : trace.steps) {
    ++r.steps_checked;
    if (!s.block) {
      if (r.first_failure_step == 0) r.first_failure_step = s.m;
      continue;
    }
    blocks.insert(*s.block);
    ++attributed;
  }
  if (attributed == 0) {
    r.applicable = false;
    r.note = "trace carries no block attribution";
    return VerificationReport{{r}};
  }
  // Indices must be exactly 1..n in order, each attributed to one block.
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    if (trace.steps[i].m != i + 1 && r.first_failure_step == 0) r.first_failure_step = trace.steps[i].m;
  }
  r.passed = r.first_failure_step == 0;
  r.worst_violation = static_cast<double>(trace.steps.size() - attributed);
  r.note = std::to_string(blocks.size()) + " blocks used";
  return VerificationReport{{r}};
}

struct ResidualExtrema {
  std::vector<double> running_min;
  std::vector<double> running_max;
};

/// Prefix min and max of |f_m| over steps burn_in+1, ..., n.
inline ResidualExtrema residual_extrema(const Trace& trace, std::size_t burn_in) {
  if (burn_in >= trace.steps.size()) {
    throw Error(ErrorKind::PreconditionUnmet, "burn_in must be smaller than the trace length");
  }
  ResidualExtrema out;
  const std::size_t n = trace.steps.size() - burn_in;
  out.running_min.reserve(n);
  out.running_max.reserve(n);
  double lo = trace.steps[burn_in].residual_norm;
  double hi = lo;
  for (std::size_t i = burn_in; i < trace.steps.size(); ++i) {
    lo = std::min(lo, trace.steps[i].residual_norm);
    hi = std::max(hi, trace.steps[i].residual_norm);
    out.running_min.push_back(lo);
    out.running_max.push_back(hi);
  }
  return out;
}

}  // namespace greedex
