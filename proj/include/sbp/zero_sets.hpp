#pragma once

#include <optional>
#include <vector>

#include "sbp/rational.hpp"
#include "sbp/small_rational.hpp"
#include "sbp/support.hpp"

namespace sbp {

/// Zero-set lattice of a linear family of vectors.
///
/// Element e carries a block B_e of linear functionals on a parameter space
/// Q^d. A parameter y vanishes on e when B_e y = 0, and its zero set is
/// Z(y) = {e : B_e y = 0}. A set Z is achievable as an exact zero set iff it is
/// closed: cl(Z) = Z where cl(Z) collects every element on which all solutions
/// of {B_z y = 0 : z in Z} vanish. Over an infinite field a finite union of
/// proper subspaces never covers a space, so closedness is exact.
///
/// The atomic model uses one row per atom (rows of a column basis of T); the
/// interval model uses one block of polynomial coefficients per piece.
template <typename Scalar>
class BasicZeroSetLattice {
 public:
  using MatrixType = MatrixX<Scalar>;
  using VectorType = VectorX<Scalar>;

  BasicZeroSetLattice(std::vector<MatrixType> blocks, Eigen::Index dimension);

  int size() const { return static_cast<int>(blocks_.size()); }
  Eigen::Index dimension() const { return dimension_; }

  /// Elements whose block is identically zero (in every zero set).
  SupportSet loops() const { return loops_; }
  SupportSet closure(SupportSet zeros) const;
  bool is_closed(SupportSet zeros) const { return closure(zeros) == zeros; }

  /// Basis (columns) of the parameters vanishing on every element of `zeros`.
  MatrixType solutions(SupportSet zeros) const;

  /// Every closed set, ascending bitmask order. `threads` > 1 evaluates each
  /// BFS level in parallel; the result does not depend on it.
  std::vector<SupportSet> closed_sets(unsigned threads = 1) const;

  /// A parameter whose zero set is exactly `zeros`, or nullopt if `zeros` is
  /// not closed. Deterministic: basis solutions are merged pairwise as
  /// y + alpha h with alpha = 1, 2, ... and each element can reject at most one
  /// alpha, so size() + 1 candidates always suffice.
  std::optional<VectorType> realize(SupportSet zeros) const;

  /// Zero set of a concrete parameter.
  SupportSet zero_set(const VectorType& y) const;

 private:
  bool vanishes(int element, const MatrixType& basis) const;
  MatrixType stacked(SupportSet elements) const;

  std::vector<MatrixType> blocks_;
  Eigen::Index dimension_;
  SupportSet loops_;
  bool single_rows_ = true;
};

using ZeroSetLattice = BasicZeroSetLattice<Rational>;

}  // namespace sbp
