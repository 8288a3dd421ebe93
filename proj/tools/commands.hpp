#pragma once

// Subcommand implementations for the greedex CLI. Each returns the process
// exit code and writes diagnostics to `log`.
//
// Exit codes: 0 success, 1 bad input (config, arguments, unreadable files),
// 2 aborted run, 3 failed verification.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "greedex/greedex.hpp"

namespace greedex::cli {

inline constexpr int kOk = 0;
inline constexpr int kBadInput = 1;
inline constexpr int kAborted = 2;
inline constexpr int kCheckFailed = 3;

namespace detail {

inline void write_text(const std::filesystem::path& p, const std::string& text) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error(ErrorKind::ConfigInvalid, "cannot write " + p.string());
  out << text;
}

inline std::filesystem::path sidecar(const std::filesystem::path& trace, const char* suffix) {
  return std::filesystem::path(trace.string() + suffix);
}

}  // namespace detail

struct RunOverrides {
  std::optional<std::filesystem::path> trace;
  std::optional<std::filesystem::path> meta;
  std::optional<std::uint64_t> seed;
  std::optional<double> early_exit;
};

inline int cmd_run(const std::filesystem::path& config_path, const RunOverrides& ov, std::ostream& log) {
  ExperimentConfig cfg;
  try {
    auto seed = ov.seed ? ov.seed : seed_from_env();
    cfg = load_experiment(config_path, seed);
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    return kBadInput;
  }
  if (ov.trace) {
    cfg.output.trace = *ov.trace;
    if (!ov.meta) cfg.output.meta = detail::sidecar(*ov.trace, ".meta.json");
  }
  if (ov.meta) cfg.output.meta = *ov.meta;
  if (ov.early_exit) cfg.early_exit = ov.early_exit;

  const Trace trace = run(cfg.target, *cfg.dictionary, cfg.coefficients, cfg.weakening, cfg.policy,
                          RunOptions{cfg.max_steps, cfg.early_exit});

  json meta = trace_metadata(trace);
  meta["config"] = cfg.raw;
  meta["seed"] = cfg.seed;
  meta["dictionary_kind"] = std::string(cfg.dictionary->kind_name());
  if (trace.status.early_exit) meta["truncation"] = "early_exit";
  else if (trace.status.outcome == Outcome::Exhausted) meta["truncation"] = "max_steps";
  try {
    detail::write_text(cfg.output.trace, trace_csv(trace));
    detail::write_text(cfg.output.meta, meta.dump(2) + "\n");
    if (cfg.output.json) detail::write_text(*cfg.output.json, trace_to_json(trace).dump() + "\n");
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    return kBadInput;
  }
  log << "run: " << trace.steps.size() << " steps, status " << to_string(trace.status.outcome)
      << ", final residual " << format_double(trace.final_residual_norm()) << '\n';
  if (trace.status.outcome == Outcome::Aborted) {
    log << "aborted: " << trace.status.message << '\n';
    return kAborted;
  }
  return kOk;
}

struct CounterexampleOptions {
  double t = 0.5;
  unsigned groups = 6;
  std::optional<unsigned> k;
  std::filesystem::path out = "counterexample.csv";
  std::optional<std::filesystem::path> marks;
  std::optional<std::filesystem::path> meta;
};

inline int cmd_counterexample(const CounterexampleOptions& opt, std::ostream& log) {
  CounterexampleConfig cfg;
  try {
    cfg = make_counterexample_config(opt.t, opt.groups, opt.k);
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    return kBadInput;
  }
  const auto r = run_counterexample(cfg);
  const auto marks = mark_reports(r);

  json meta = trace_metadata(r.trace);
  meta["t"] = cfg.t;
  meta["k"] = cfg.k;
  meta["groups"] = cfg.num_groups;
  try {
    detail::write_text(opt.out, trace_csv(r.trace));
    detail::write_text(opt.marks.value_or(detail::sidecar(opt.out, ".marks.json")), marks_to_json(marks).dump(2) + "\n");
    detail::write_text(opt.meta.value_or(detail::sidecar(opt.out, ".meta.json")), meta.dump(2) + "\n");
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    return kBadInput;
  }
  log << "counterexample: t=" << cfg.t << " k=" << cfg.k << " groups=" << cfg.num_groups << " steps="
      << r.trace.steps.size() << '\n';
  if (r.trace.status.outcome == Outcome::Aborted) {
    log << "aborted: " << r.trace.status.message << '\n';
    return kAborted;
  }
  bool ok = true;
  for (const auto& m : marks) {
    log << "  group " << m.group + 1 << " (h=" << m.h << "): residual at subnorm-one mark "
        << format_double(m.residual_at_mark) << '\n';
    if (!m.reached || m.residual_at_mark < 1.0 - 1e-9) ok = false;
  }
  return ok ? kOk : kCheckFailed;
}

struct CheckOptions {
  std::filesystem::path trace;
  std::optional<std::filesystem::path> meta;
  std::optional<std::filesystem::path> report;
  double energy_tol = 1e-10;
  double greedy_tol = 1e-12;
  bool direct_sum = false;
  // Descent inequality (advisory): needs a coherence value and eps.
  std::optional<double> coherence;
  std::optional<double> eps;
  std::size_t from_step = 1;
};

inline int cmd_check(const CheckOptions& opt, std::ostream& log) {
  Trace trace;
  try {
    std::ifstream in(opt.trace);
    if (!in) throw Error(ErrorKind::ParseError, "cannot open " + opt.trace.string());
    trace = read_trace_csv(in);
    const auto meta_path = opt.meta.value_or(detail::sidecar(opt.trace, ".meta.json"));
    if (std::filesystem::exists(meta_path)) {
      std::ifstream min(meta_path);
      trace.initial_norm = initial_norm_from_metadata(json::parse(min));
    } else if (opt.meta) {
      throw Error(ErrorKind::ParseError, "cannot open " + meta_path.string());
    }
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return kBadInput;
  }

  VerificationReport hard;
  hard.append(verify_energy_identity(trace, opt.energy_tol));
  hard.append(verify_greedy_condition(trace, opt.greedy_tol));
  VerificationReport advisory;
  if (opt.direct_sum) {
    auto part = verify_block_partition(trace);
    if (!part.checks.front().applicable) {
      log << "warning: block_partition not applicable (no block column values)\n";
      advisory.append(part);
    } else {
      hard.append(part);
    }
  }
  if (opt.coherence && opt.eps) {
    try {
      auto d = verify_descent_inequality(trace, CoherenceEstimate{*opt.coherence, 0, 0}, *opt.eps, opt.from_step);
      if (!d.all_passed()) log << "warning: descent_inequality violated (advisory with an estimated constant)\n";
      advisory.append(d);
    } catch (const Error& e) {
      log << "warning: descent_inequality skipped: " << e.what() << '\n';
    }
  }

  for (const auto& c : hard.checks) {
    log << (c.passed ? "PASS " : "FAIL ") << c.name << " worst=" << format_double(c.worst_violation)
        << " at step " << c.worst_step;
    if (!c.passed) log << " (first failure at step " << c.first_failure_step << ")";
    log << '\n';
  }
  if (opt.report) {
    json j{{"hard", to_json(hard)}, {"advisory", to_json(advisory)}, {"steps", trace.steps.size()}};
    try {
      detail::write_text(*opt.report, j.dump(2) + "\n");
    } catch (const Error& e) {
      log << "error: " << e.what() << '\n';
      return kBadInput;
    }
  }
  return hard.all_passed() ? kOk : kCheckFailed;
}

/// Runs independent configs concurrently; each writes only its own outputs.
/// Returns the largest exit code.
inline int cmd_sweep(const std::vector<std::filesystem::path>& configs, unsigned jobs, std::ostream& log) {
  if (configs.empty()) {
    log << "error: no configs given\n";
    return kBadInput;
  }
  jobs = std::max(1u, jobs);
  std::vector<int> codes(configs.size(), 0);
  std::vector<std::string> logs(configs.size());
  std::size_t next = 0;
  while (next < configs.size()) {
    std::vector<std::future<void>> batch;
    for (unsigned w = 0; w < jobs && next < configs.size(); ++w, ++next) {
      const std::size_t i = next;
      batch.push_back(std::async(std::launch::async, [&, i] {
        std::ostringstream os;
        codes[i] = cmd_run(configs[i], RunOverrides{}, os);
        logs[i] = os.str();
      }));
    }
    for (auto& f : batch) f.get();
  }
  int worst = 0;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    log << "[" << configs[i].string() << "] exit " << codes[i] << '\n' << logs[i];
    worst = std::max(worst, codes[i]);
  }
  return worst;
}

}  // namespace greedex::cli
