#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Greedy expansions with prescribed coefficients"};
  app.require_subcommand(1);

  std::string config_path;
  greedex::cli::RunOverrides run_ov;
  std::string run_out, run_meta;
  auto* run = app.add_subcommand("run", "Run one experiment config");
  run->add_option("--config,config", config_path, "Experiment config (JSON)")->required();
  run->add_option("--out", run_out, "Trace CSV path (overrides the config)");
  run->add_option("--meta", run_meta, "Metadata JSON path");

  greedex::cli::CounterexampleOptions ce;
  unsigned ce_k = 0;
  std::string ce_out, ce_marks;
  auto* cex = app.add_subcommand("counterexample", "Generate the divergent expansion for t < 1");
  cex->add_option("--t", ce.t, "Weakening parameter in (0, 1)")->required();
  cex->add_option("--groups", ce.groups, "Number of coordinate groups")->default_val(6);
  cex->add_option("--k", ce_k, "Size of the first group (default: smallest valid)");
  cex->add_option("--out", ce_out, "Trace CSV path")->default_val("counterexample.csv");
  cex->add_option("--marks", ce_marks, "Phase marks JSON path (default: <out>.marks.json)");

  greedex::cli::CheckOptions chk;
  std::string chk_trace, chk_meta, chk_report;
  double coherence = 0.0, eps = 0.0;
  auto* check = app.add_subcommand("check", "Verify a trace");
  check->add_option("--trace,trace", chk_trace, "Trace CSV")->required();
  check->add_option("--meta", chk_meta, "Metadata JSON (default: <trace>.meta.json when present)");
  check->add_option("--report", chk_report, "Write the verification report as JSON");
  check->add_option("--energy-tol", chk.energy_tol, "Relative tolerance for the energy identity");
  check->add_option("--greedy-tol", chk.greedy_tol, "Absolute tolerance for the selection rule");
  check->add_flag("--direct-sum", chk.direct_sum, "Also check block attribution");
  check->add_option("--coherence", coherence, "Coherence constant for the descent check");
  check->add_option("--epsilon", eps, "eps for the descent check");
  check->add_option("--from-step", chk.from_step, "First step of the descent window");

  std::vector<std::string> sweep_configs;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  auto* sweep = app.add_subcommand("sweep", "Run several configs in parallel");
  sweep->add_option("configs", sweep_configs, "Experiment configs")->required();
  sweep->add_option("--jobs,-j", jobs, "Parallel workers");

  CLI11_PARSE(app, argc, argv);

  using namespace greedex::cli;
  try {
    if (*run) {
      if (!run_out.empty()) run_ov.trace = run_out;
      if (!run_meta.empty()) run_ov.meta = run_meta;
      return cmd_run(config_path, run_ov, std::cerr);
    }
    if (*cex) {
      if (ce_k) ce.k = ce_k;
      ce.out = ce_out;
      if (!ce_marks.empty()) ce.marks = ce_marks;
      return cmd_counterexample(ce, std::cerr);
    }
    if (*check) {
      chk.trace = chk_trace;
      if (!chk_meta.empty()) chk.meta = chk_meta;
      if (!chk_report.empty()) chk.report = chk_report;
      if (check->count("--coherence")) chk.coherence = coherence;
      if (check->count("--epsilon")) chk.eps = eps;
      return cmd_check(chk, std::cerr);
    }
    if (*sweep) {
      std::vector<std::filesystem::path> paths(sweep_configs.begin(), sweep_configs.end());
      return cmd_sweep(paths, jobs, std::cerr);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  }
  return kBadInput;
}
