#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sbp/io.hpp"

namespace sbp {

/// Closure laws are checked pairwise, so they are skipped (reported as null)
/// when Sigma_T has more members than this.
inline constexpr std::size_t kClosureCheckLimit = 4096;

/// Everything `analyze` learns about one matrix operator.
struct AnalysisReport {
  io::OperatorInput input;
  Verdict band_preserving;
  Verdict disjointness_preserving;
  Verdict beta;
  Verdict sbp;
  Verdict scp;
  SigmaTable sigma;
  std::vector<SupportSet> minimal_supports;
  std::optional<ClosureReport> closures;
  bool projection = false;
  NormValue operator_norm;
  std::optional<WceForm> decomposition;  // present exactly when sbp.holds

  /// "weighted conditional expectation operator" when SBP holds.
  std::string classification() const;

  friend bool operator==(const AnalysisReport&, const AnalysisReport&) = default;
};

AnalysisReport analyze(const io::OperatorInput& input, unsigned threads = 1);

/// {"schema": 1, "command": "analyze", ...}. The parser rejects reports that
/// are internally inconsistent (a decomposition without SBP, say).
io::Json to_json(const AnalysisReport& report);
AnalysisReport analysis_report_from_json(const io::Json& j);

struct IntervalReport {
  FiniteRankOp op;
  std::vector<IntervalRegion> range_supports;
  IntervalVerdict sbp;
  IntervalVerdict scp;

  friend bool operator==(const IntervalReport&, const IntervalReport&) = default;
};

IntervalReport analyze_interval(const FiniteRankOp& t);

/// Witnesses carry the derived kernel pairings of f and g ("psi_f", "psi_g").
io::Json to_json(const IntervalReport& report);
IntervalReport interval_report_from_json(const io::Json& j);

}  // namespace sbp
