#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sbp {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;  // counts only; never timings, never thread-dependent

  friend bool operator==(const CriterionResult&, const CriterionResult&) = default;
};

struct CampaignReport {
  std::uint64_t seed = 0;
  std::vector<CriterionResult> criteria;

  bool passed() const;
  /// One "PASS|FAIL <id> <name>: <detail>" line per criterion and a summary.
  std::string text() const;

  friend bool operator==(const CampaignReport&, const CampaignReport&) = default;
};

/// Names in id order: wce-round-trip, sbp-negative, sbp-implies-scp,
/// sigma-laws, oracle-agreement, worked-examples, averaging, norm-one-probe,
/// determinism.
const std::vector<std::string>& criterion_names();

/// Runs criterion `id` (1-based). Instances are drawn from `seed`; `threads`
/// only spreads instances over workers. Exceptions count as failures.
CriterionResult run_criterion(int id, std::uint64_t seed, unsigned threads);

/// All criteria in order.
CampaignReport run_campaign(std::uint64_t seed, unsigned threads);

/// Seed for instance `index` of criterion `criterion` (splitmix64 mixing).
std::uint64_t instance_seed(std::uint64_t seed, int criterion, std::uint64_t index);

}  // namespace sbp
