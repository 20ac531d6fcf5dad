#include "sbp/generators.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "sbp/linalg.hpp"

namespace sbp {

std::int64_t Rng::uniform(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw std::invalid_argument("Rng::uniform: empty range");
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(engine_());
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % span;
  std::uint64_t draw;
  do {
    draw = engine_();
  } while (draw >= limit);
  return lo + static_cast<std::int64_t>(draw % span);
}

bool Rng::chance(std::uint64_t numerator, std::uint64_t denominator) {
  if (numerator >= denominator) return true;
  return static_cast<std::uint64_t>(uniform(0, static_cast<std::int64_t>(denominator) - 1)) < numerator;
}

Rational Rng::small_rational(bool nonzero) {
  std::int64_t p = 0;
  do {
    p = uniform(-9, 9);
  } while (nonzero && p == 0);
  const std::int64_t q = uniform(1, 9);
  return Rational(p, q);
}

std::vector<SupportSet> random_partition(Rng& rng, Eigen::Index n) {
  std::vector<int> atoms(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) atoms[static_cast<std::size_t>(i)] = i;
  rng.shuffle(atoms);
  std::vector<SupportSet> blocks;
  std::size_t next = 0;
  while (next < atoms.size()) {
    const auto remaining = static_cast<std::int64_t>(atoms.size() - next);
    const auto size = rng.uniform(1, std::min<std::int64_t>(remaining, 4));
    SupportSet block;
    for (std::int64_t k = 0; k < size; ++k) block.set(atoms[next++]);
    blocks.push_back(block);
  }
  return blocks;
}

WceForm random_wce(Rng& rng, Eigen::Index n) {
  if (n < 1) throw std::invalid_argument("gen_random_wce: n must be >= 1");
  const auto blocks = random_partition(rng, n);
  std::vector<Vector> u;
  std::vector<Vector> psi;
  for (SupportSet block : blocks) {
    Vector uj = Vector::Zero(n);
    for (int i : block.indices()) uj(i) = rng.small_rational(true);
    Vector pj = Vector::Zero(n);
    do {
      for (int i : block.indices()) pj(i) = rng.small_rational(false);
    } while (is_zero_matrix(pj));
    u.push_back(std::move(uj));
    psi.push_back(std::move(pj));
  }
  return make_wce(n, blocks, std::move(u), std::move(psi));
}

WceForm gen_random_wce(std::uint64_t seed, Eigen::Index n) {
  Rng rng(seed);
  return random_wce(rng, n);
}

Operator random_operator(Rng& rng, Eigen::Index n, double density) {
  if (!(density >= 0.0 && density <= 1.0)) throw std::invalid_argument("density must lie in [0, 1]");
  constexpr std::uint64_t kResolution = 1'000'000;
  const auto threshold = static_cast<std::uint64_t>(density * static_cast<double>(kResolution) + 0.5);
  Matrix m = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (threshold > 0 && rng.chance(threshold, kResolution)) m(i, j) = rng.small_rational(true);
    }
  }
  return Operator(std::move(m));
}

Operator gen_random_operator(std::uint64_t seed, Eigen::Index n, double density) {
  Rng rng(seed);
  return random_operator(rng, n, density);
}

Operator perturb_off_block(Rng& rng, const WceForm& form) {
  if (form.blocks.size() < 2) throw std::invalid_argument("perturb_off_block: needs two blocks");
  std::vector<int> block_of(static_cast<std::size_t>(form.n), -1);
  for (std::size_t j = 0; j < form.blocks.size(); ++j) {
    for (int i : form.blocks[j].indices()) block_of[static_cast<std::size_t>(i)] = static_cast<int>(j);
  }
  std::vector<std::pair<int, int>> slots;
  for (int k = 0; k < form.n; ++k) {
    for (int i = 0; i < form.n; ++i) {
      if (block_of[static_cast<std::size_t>(k)] != block_of[static_cast<std::size_t>(i)]) {
        slots.emplace_back(k, i);
      }
    }
  }
  const auto [k, i] = slots[static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(slots.size()) - 1))];
  Matrix m = form.matrix();
  m(k, i) += rng.small_rational(true);
  return Operator(std::move(m));
}

}  // namespace sbp
