#pragma once

// Divergent greedy expansion over the symmetrized canonical basis with a
// weakening parameter t < 1.
//
// Target: consecutive groups, group j (0-based) holding h = k + j coordinates
// all equal to t^h. For each group in turn the scripted expansion
//   (a) flips every coordinate, repeatedly, v -> -v / t, until all moduli lie
//       in [t/sqrt(h), 1/sqrt(h)],
//   (b) drives every coordinate to -sign(v)/sqrt(h), so the group has norm 1,
//   (c) annihilates every coordinate with the coefficient 1/sqrt(h).
// The remainder norm returns to >= 1 once per group while the coefficients
// tend to zero and their sum diverges.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "greedex/core.hpp"
#include "greedex/dictionary.hpp"
#include "greedex/error.hpp"
#include "greedex/greedy.hpp"
#include "greedex/sequences.hpp"

namespace greedex {

struct CounterexampleConfig {
  double t = 0.5;
  unsigned k = 2;
  unsigned num_groups = 1;
};

inline bool k_condition(double t, unsigned k) {
  return k > 1 && std::pow(t, static_cast<double>(k)) < 1.0 / std::sqrt(static_cast<double>(k)) &&
         static_cast<double>(k) > t * t / (1.0 - t * t);
}

/// Smallest k > 1 with t^k < 1/sqrt(k) and k > t^2 / (1 - t^2).
inline unsigned choose_k(double t) {
  if (!(t > 0.0 && t < 1.0)) throw Error(ErrorKind::ConfigInvalid, "t must lie in (0, 1)");
  unsigned k = 2;
  while (!k_condition(t, k)) ++k;
  return k;
}

inline void validate(const CounterexampleConfig& cfg) {
  if (!(cfg.t > 0.0 && cfg.t < 1.0)) throw Error(ErrorKind::ConfigInvalid, "t must lie in (0, 1)");
  if (cfg.num_groups == 0) throw Error(ErrorKind::ConfigInvalid, "need at least one group");
  if (!k_condition(cfg.t, cfg.k)) {
    throw Error(ErrorKind::ConfigInvalid, "k must satisfy k > 1, t^k < 1/sqrt(k), k > t^2/(1-t^2)");
  }
  // Flips only grow moduli, so every group must start at or below 1/sqrt(h).
  for (unsigned j = 0; j < cfg.num_groups; ++j) {
    const double h = cfg.k + j;
    if (std::pow(cfg.t, h) > 1.0 / std::sqrt(h)) {
      throw Error(ErrorKind::ConfigInvalid, "group h = " + std::to_string(cfg.k + j) + " starts above 1/sqrt(h)");
    }
  }
}

inline CounterexampleConfig make_counterexample_config(double t, unsigned groups,
                                                       std::optional<unsigned> k = std::nullopt) {
  CounterexampleConfig cfg{t, k ? *k : choose_k(t), groups};
  validate(cfg);
  return cfg;
}

/// First plain index of group j.
inline std::uint64_t group_offset(const CounterexampleConfig& cfg, unsigned j) {
  std::uint64_t off = 1;
  for (unsigned i = 0; i < j; ++i) off += cfg.k + i;
  return off;
}

inline SparseVector build_target(const CounterexampleConfig& cfg) {
  validate(cfg);
  std::vector<Entry> entries;
  for (unsigned j = 0; j < cfg.num_groups; ++j) {
    const unsigned h = cfg.k + j;
    const double value = std::pow(cfg.t, static_cast<double>(h));
    const auto off = group_offset(cfg, j);
    for (unsigned i = 0; i < h; ++i) entries.push_back({CoordId{off + i}, value});
  }
  return SparseVector(std::move(entries));
}

/// sqrt(sum over groups after j of h * t^(2h)): the remainder norm once
/// groups 0..j are annihilated.
inline double tail_norm(const CounterexampleConfig& cfg, unsigned j) {
  double s = 0.0;
  for (unsigned g = j + 1; g < cfg.num_groups; ++g) {
    const double h = cfg.k + g;
    s += h * std::pow(cfg.t, 2.0 * h);
  }
  return std::sqrt(s);
}

struct PhaseMark {
  unsigned group = 0;              // 0-based j
  unsigned h = 0;                  // k + j
  std::size_t first_step = 0;      // first step touching the group
  std::size_t flip_passes = 0;
  std::size_t subnorm_one_step = 0;  // last step of the saturation phase
  std::size_t zeroed_step = 0;       // last step of the zeroing phase
  bool exact_zeroing = false;        // saturated values equal -+1/sqrt(h) bit for bit
};

struct AdversarialPlan {
  std::vector<double> coefficients;
  std::vector<AtomId> selections;
  std::vector<unsigned> group_of_step;  // 0-based group for each step
  std::vector<PhaseMark> marks;

  std::size_t size() const { return coefficients.size(); }
};

namespace detail {

// Coefficient c for which `mod - c` evaluates to exactly -u, searched within a
// few ulps of mod + u. Falls back to mod + u when no such double exists.
inline std::pair<double, bool> saturation_coefficient(double mod, double u) {
  const double c0 = mod + u;
  if (mod - c0 == -u) return {c0, true};
  double lo = c0, hi = c0;
  for (int i = 0; i < 4; ++i) {
    lo = std::nextafter(lo, 0.0);
    hi = std::nextafter(hi, 2.0 * c0);
    if (mod - lo == -u) return {lo, true};
    if (mod - hi == -u) return {hi, true};
  }
  return {c0, false};
}

}  // namespace detail

/// Coefficients and selections for every group, replaying the engine's
/// floating-point updates so that each scripted step can be checked against
/// the same values the engine will see.
inline AdversarialPlan build_plan(const CounterexampleConfig& cfg) {
  validate(cfg);
  const double t = cfg.t;
  AdversarialPlan plan;

  auto push = [&](double c, std::uint64_t index, double value, unsigned j) {
    plan.coefficients.push_back(c);
    plan.selections.push_back(AtomId::basis(index, value < 0.0));
    plan.group_of_step.push_back(j);
  };

  for (unsigned j = 0; j < cfg.num_groups; ++j) {
    const unsigned h = cfg.k + j;
    const double u = 1.0 / std::sqrt(static_cast<double>(h));
    const double lower = t * u * (1.0 - 1e-12);
    const auto off = group_offset(cfg, j);

    PhaseMark mark;
    mark.group = j;
    mark.h = h;
    mark.first_step = plan.size() + 1;

    // All coordinates in a group follow the same arithmetic, so one value
    // stands for the whole group.
    double v = std::pow(t, static_cast<double>(h));

    // (a) flip passes: s|v| -> -s|v|/t via c = |v| (1 + 1/t)
    while (std::abs(v) < lower) {
      const double c = std::abs(v) * (1.0 + 1.0 / t);
      const double s = v < 0.0 ? -1.0 : 1.0;
      for (unsigned i = 0; i < h; ++i) push(c, off + i, v, j);
      v = v - c * s;
      ++mark.flip_passes;
    }
    if (std::abs(v) > u * (1.0 + 1e-12)) {
      throw Error(ErrorKind::ConfigInvalid, "flip passes overshoot 1/sqrt(h) in group h = " + std::to_string(h));
    }

    // (b) saturation: v -> -sign(v) / sqrt(h)
    {
      const auto [c, exact] = detail::saturation_coefficient(std::abs(v), u);
      const double s = v < 0.0 ? -1.0 : 1.0;
      for (unsigned i = 0; i < h; ++i) push(c, off + i, v, j);
      v = v - c * s;
      mark.exact_zeroing = exact;
      mark.subnorm_one_step = plan.size();
    }

    // (c) zeroing with c = 1/sqrt(h)
    for (unsigned i = 0; i < h; ++i) push(u, off + i, v, j);
    mark.zeroed_step = plan.size();
    plan.marks.push_back(mark);
  }
  return plan;
}

struct CounterexampleRun {
  CounterexampleConfig config;
  SparseVector target;
  AdversarialPlan plan;
  Trace trace;
};

/// Runs the scripted expansion on the symmetrized basis with weakening
/// parameter t. Every step goes through the engine's admissibility check.
inline CounterexampleRun run_counterexample(const CounterexampleConfig& cfg,
                                            std::optional<std::size_t> max_steps = std::nullopt) {
  CounterexampleRun r;
  r.config = cfg;
  r.target = build_target(cfg);
  r.plan = build_plan(cfg);
  const auto dict = make_symmetrized_onb();
  const auto coeffs = CoefficientSequence::adversarial(r.plan.coefficients);
  const auto tau = WeakeningSequence::constant(cfg.t);
  const SelectionPolicy policy = Scripted{r.plan.selections};
  const std::size_t budget = max_steps ? std::min(*max_steps, r.plan.size()) : r.plan.size();
  r.trace = run(r.target, dict, coeffs, tau, policy, budget);
  return r;
}

/// Per-group view of a counterexample trace.
struct MarkReport {
  unsigned group = 0;
  unsigned h = 0;
  std::size_t subnorm_one_step = 0;
  std::size_t zeroed_step = 0;
  double residual_at_mark = 0.0;    // |f_m| at subnorm_one_step
  double residual_at_zeroed = 0.0;  // |f_m| at zeroed_step
  double group_subnorm = 0.0;       // norm of group coordinates at subnorm_one_step
  double expected_tail = 0.0;       // analytic remainder norm after zeroing
  bool reached = false;             // both marks inside the trace
};

inline std::vector<MarkReport> mark_reports(const CounterexampleRun& r) {
  std::vector<MarkReport> out;
  const auto& steps = r.trace.steps;
  for (const auto& mk : r.plan.marks) {
    MarkReport rep;
    rep.group = mk.group;
    rep.h = mk.h;
    rep.subnorm_one_step = mk.subnorm_one_step;
    rep.zeroed_step = mk.zeroed_step;
    rep.expected_tail = tail_norm(r.config, mk.group);
    rep.reached = mk.zeroed_step <= steps.size();
    if (mk.subnorm_one_step <= steps.size()) {
      rep.residual_at_mark = steps[mk.subnorm_one_step - 1].residual_norm;
      // Group coordinates only change at the group's own steps, so the
      // subnorm is recoverable from the recorded coefficients.
      std::vector<Entry> coords;
      const auto off = group_offset(r.config, mk.group);
      const double start = std::pow(r.config.t, static_cast<double>(mk.h));
      for (unsigned i = 0; i < mk.h; ++i) coords.push_back({CoordId{off + i}, start});
      SparseVector g(std::move(coords));
      for (std::size_t m = mk.first_step; m <= mk.subnorm_one_step; ++m) {
        g = subtract_scaled(g, steps[m - 1].c, steps[m - 1].atom.vector);
      }
      rep.group_subnorm = norm(g);
    }
    if (rep.reached) rep.residual_at_zeroed = steps[mk.zeroed_step - 1].residual_norm;
    out.push_back(rep);
  }
  return out;
}

}  // namespace greedex
