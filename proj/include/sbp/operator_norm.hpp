#pragma once

#include "sbp/norm.hpp"
#include "sbp/operator.hpp"

namespace sbp {

/// Induced norm of T on the weighted p-norm space.
///
/// p = 1 and p = inf use the weighted max-column / max-row formulas. Rank-one
/// operators u ⊗ psi give ||u|| ||psi||_*, and semi band preserving operators
/// give max_j ||psi_j||_* ||u_j|| over their blockwise decomposition. Any other
/// p = 2 operator is certified by exact positive-semidefiniteness tests of
/// c W - T^T W T (exact when a candidate Rayleigh quotient is already tight,
/// otherwise bisected to the enclosure width). Remaining general-p operators
/// get a candidate lower bound and a Riesz-Thorin upper bound.
NormValue operator_norm(const AtomicSpace& space, const Operator& t);

/// Exact decision of ||T|| <= c for p in {1, 2, inf}; general p falls back to
/// operator_norm and may throw IndeterminateComparison.
bool operator_norm_at_most(const AtomicSpace& space, const Operator& t, const Rational& c);

/// Exact positive-semidefiniteness of a symmetric rational matrix via
/// symmetric elimination (a zero pivot must have a zero row).
bool is_positive_semidefinite(const Matrix& symmetric);

}  // namespace sbp
