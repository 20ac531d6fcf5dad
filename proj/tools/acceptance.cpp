// Acceptance suite: one PASS/FAIL line per criterion, exit 1 if any fails.
// Usage: acceptance [seed]   (threads from SBP_THREADS)

#include <charconv>
#include <cstdint>
#include <cstring>
#include <iostream>

#include "sbp/campaign.hpp"
#include "sbp/commands.hpp"

int main(int argc, char** argv) {
  std::uint64_t seed = 1;
  if (argc > 1) {
    const char* end = argv[1] + std::strlen(argv[1]);
    if (auto [ptr, ec] = std::from_chars(argv[1], end, seed); ec != std::errc() || ptr != end) {
      std::cerr << "usage: acceptance [seed]\n";
      return sbp::cli::kInputError;
    }
  }
  const unsigned threads = sbp::cli::threads_from_env();
  bool all = true;
  for (int id = 1; id <= static_cast<int>(sbp::criterion_names().size()); ++id) {
    const sbp::CriterionResult r = sbp::run_criterion(id, seed, threads);
    std::cout << (r.passed ? "PASS" : "FAIL") << " criterion " << r.id << " " << r.name << ": " << r.detail
              << std::endl;
    all = all && r.passed;
  }
  return all ? sbp::cli::kSuccess : sbp::cli::kSelfTestFailure;
}
