#pragma once

// Reference procedures that decide the same questions as operator-analysis
// and interval-lattice by different routes. They are slow and exist to
// cross-check the production algorithms.

#include <cstdint>
#include <optional>
#include <vector>

#include "sbp/generators.hpp"
#include "sbp/interval_lattice.hpp"
#include "sbp/operator.hpp"

namespace sbp::oracle {

/// Sigma_T by the per-subset feasibility test: S is achievable iff no row of T
/// indexed by S lies in the span of the rows outside S. Ascending bitmask
/// order. Scans all 2^n subsets.
std::vector<SupportSet> sigma(const Operator& t);

/// The defining implications checked for every support pattern of f against
/// every achievable support of Tg, with (Tf)_k treated as a linear form in
/// the free coordinates of f (zero iff row k vanishes on the pattern).
bool is_sbp(const Operator& t);
bool is_scp(const Operator& t);
/// Same, against a precomputed sigma(t).
bool is_sbp(const Operator& t, const std::vector<SupportSet>& supports);
bool is_scp(const Operator& t, const std::vector<SupportSet>& supports);

/// Random (f, g) pairs; returns the first pair violating the implication of
/// `kind` (SbpViolation or ScpViolation). g is drawn with a random support
/// so that small range supports are reached.
std::optional<Witness> sample_violation(const Operator& t, WitnessKind kind, Rng& rng, std::size_t pairs);

/// Random piecewise polynomial with at most `max_pieces` pieces on a 1/16 grid
/// and per-piece degree at most `max_degree`; about a third of the pieces are
/// zero.
PiecewisePoly random_piecewise(Rng& rng, int max_pieces, int max_degree);

std::optional<IntervalWitness> sample_violation(const FiniteRankOp& t, WitnessKind kind, Rng& rng,
                                                std::size_t pairs);

/// Operators on n atoms with entries in {-1, 0, 1/2, 1} and at most
/// `max_nonzeros` nonzeros per column, one representative per class under
/// column scaling and simultaneous permutation of atoms (both preserve every
/// support-level predicate). Deterministic order.
std::vector<Operator> exhaustive_family(Eigen::Index n, int max_nonzeros);

/// The same family split by support pattern: one pattern (bit c * n + r set
/// for a nonzero entry (r, c)) per orbit under permutation, and the members
/// of the family carrying exactly that pattern. Concatenating the members over
/// family_patterns in order gives exhaustive_family.
std::vector<std::uint32_t> family_patterns(Eigen::Index n, int max_nonzeros);
std::vector<Operator> family_members(Eigen::Index n, std::uint32_t pattern);

}  // namespace sbp::oracle
