#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "sbp/operator.hpp"
#include "sbp/wce.hpp"

namespace sbp {

/// mt19937_64 with hand-rolled range reduction, so draws are identical across
/// standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform integer in [lo, hi].
  std::int64_t uniform(std::int64_t lo, std::int64_t hi);
  /// True with probability numerator / denominator.
  bool chance(std::uint64_t numerator, std::uint64_t denominator);
  /// p / q with p in [-9, 9] and q in [1, 9]; nonzero when requested.
  Rational small_rational(bool nonzero);
  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(uniform(0, static_cast<std::int64_t>(i) - 1));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

/// Random partition of all n atoms: atoms are shuffled, then cut into blocks
/// of sequentially drawn sizes in [1, min(remaining, 4)].
std::vector<SupportSet> random_partition(Rng& rng, Eigen::Index n);

/// Valid canonical form over a random partition; u_j has full support on A_j
/// and psi_j is nonzero, so the blocks are exactly the minimal supports of the
/// assembled operator.
WceForm gen_random_wce(std::uint64_t seed, Eigen::Index n);
WceForm random_wce(Rng& rng, Eigen::Index n);

/// Each entry is nonzero with probability `density`; nonzero entries are small
/// rationals.
Operator gen_random_operator(std::uint64_t seed, Eigen::Index n, double density);
Operator random_operator(Rng& rng, Eigen::Index n, double density);

/// Adds one nonzero entry T(k, i) with k and i in different blocks.
Operator perturb_off_block(Rng& rng, const WceForm& form);

}  // namespace sbp
