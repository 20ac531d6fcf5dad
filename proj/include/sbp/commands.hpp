#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include <Eigen/Core>

namespace sbp::cli {

enum ExitCode : int {
  kSuccess = 0,
  kSelfTestFailure = 1,
  kInputError = 2,
  kBudgetExceeded = 3,
};

/// Worker count from SBP_THREADS, else the hardware concurrency (at least 1).
/// Outputs never depend on it.
unsigned threads_from_env();

struct AnalyzeConfig {
  std::filesystem::path input;
  std::optional<std::filesystem::path> report;  // stdout when absent
  Eigen::Index max_atoms = 16;
  unsigned threads = 1;
};

struct IntervalConfig {
  std::filesystem::path input;
  std::optional<std::filesystem::path> report;
};

struct ProbeConfig {
  std::string p;
  std::string dims;  // "A..B"
  std::size_t budget = 2000;
  std::uint64_t seed = 1;
  std::filesystem::path out;
  unsigned threads = 1;
};

/// Each command writes its JSON report (or a one-line summary when the report
/// goes to a file) to `out`, diagnostics to `err`, and returns an ExitCode.
int cmd_analyze(const AnalyzeConfig& config, std::ostream& out, std::ostream& err);
int cmd_interval(const IntervalConfig& config, std::ostream& out, std::ostream& err);
int cmd_probe(const ProbeConfig& config, std::ostream& out, std::ostream& err);
int cmd_selftest(std::uint64_t seed, unsigned threads, std::ostream& out, std::ostream& err);

}  // namespace sbp::cli
