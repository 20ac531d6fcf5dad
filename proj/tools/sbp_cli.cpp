#include <CLI11.hpp>

#include <iostream>

#include "sbp/commands.hpp"

int main(int argc, char** argv) {
  using namespace sbp::cli;

  CLI::App app{"Band and containment preservation for operators on atomic lattices"};
  app.require_subcommand(1);

  AnalyzeConfig analyze;
  std::string analyze_report;
  auto* analyze_cmd = app.add_subcommand("analyze", "Analyze a matrix operator file");
  analyze_cmd->add_option("--input", analyze.input, "Operator JSON file")->required();
  analyze_cmd->add_option("--report", analyze_report, "Write the report here instead of stdout");
  analyze_cmd->add_option("--max-atoms", analyze.max_atoms, "Largest accepted dimension")->capture_default_str();

  IntervalConfig interval;
  std::string interval_report;
  auto* interval_cmd = app.add_subcommand("interval", "Analyze a finite-rank operator on L(0,1)");
  interval_cmd->add_option("--input", interval.input, "Finite-rank operator JSON file")->required();
  interval_cmd->add_option("--report", interval_report, "Write the report here instead of stdout");

  ProbeConfig probe;
  auto* probe_cmd = app.add_subcommand("probe", "Search for norm-one projections without a block form");
  probe_cmd->add_option("--p", probe.p, "Exponent: 1, 2, p/q (inf is rejected)")->required();
  probe_cmd->add_option("--dims", probe.dims, "Dimension range A..B")->required();
  probe_cmd->add_option("--budget", probe.budget, "Candidates to examine")->required();
  probe_cmd->add_option("--seed", probe.seed, "Random seed")->required();
  probe_cmd->add_option("--out", probe.out, "Findings JSON file")->required();

  std::uint64_t selftest_seed = 1;
  auto* selftest_cmd = app.add_subcommand("selftest", "Run the acceptance campaign");
  selftest_cmd->add_option("--seed", selftest_seed, "Random seed")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  const unsigned threads = threads_from_env();
  if (*analyze_cmd) {
    if (!analyze_report.empty()) analyze.report = analyze_report;
    analyze.threads = threads;
    return cmd_analyze(analyze, std::cout, std::cerr);
  }
  if (*interval_cmd) {
    if (!interval_report.empty()) interval.report = interval_report;
    return cmd_interval(interval, std::cout, std::cerr);
  }
  if (*probe_cmd) {
    probe.threads = threads;
    return cmd_probe(probe, std::cout, std::cerr);
  }
  return cmd_selftest(selftest_seed, threads, std::cout, std::cerr);
}
