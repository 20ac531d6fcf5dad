#pragma once

// Exact Gauss-Jordan kernels. Every routine assumes an exact field as scalar
// (comparisons against zero are decisions, not tolerances).

#include <Eigen/Core>

#include <optional>
#include <utility>
#include <vector>

#include "sbp/rational.hpp"

namespace sbp {

template <typename Scalar>
struct RowEchelon {
  MatrixX<Scalar> reduced;           // reduced row echelon form, zero rows last
  std::vector<Eigen::Index> pivots;  // pivot column of each nonzero row

  Eigen::Index rank() const { return static_cast<Eigen::Index>(pivots.size()); }
};

template <typename Derived>
RowEchelon<typename Derived::Scalar> row_echelon(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  RowEchelon<Scalar> out{a.eval(), {}};
  auto& m = out.reduced;
  const Scalar zero(0);
  Eigen::Index row = 0;
  for (Eigen::Index col = 0; col < m.cols() && row < m.rows(); ++col) {
    Eigen::Index pivot = row;
    while (pivot < m.rows() && m(pivot, col) == zero) ++pivot;
    if (pivot == m.rows()) continue;
    if (pivot != row) m.row(pivot).swap(m.row(row));
    const Scalar inv = Scalar(1) / m(row, col);
    for (Eigen::Index j = col; j < m.cols(); ++j) m(row, j) *= inv;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      if (r == row || m(r, col) == zero) continue;
      const Scalar factor = m(r, col);
      for (Eigen::Index j = col; j < m.cols(); ++j) {
        if (m(row, j) != zero) m(r, j) -= factor * m(row, j);
      }
    }
    out.pivots.push_back(col);
    ++row;
  }
  return out;
}

template <typename Derived>
Eigen::Index rank(const Eigen::MatrixBase<Derived>& a) {
  return row_echelon(a).rank();
}

/// Basis of {x : A x = 0} as columns. Each basis vector has a single free
/// variable set to 1, so the basis is canonical for a given A.
template <typename Derived>
MatrixX<typename Derived::Scalar> nullspace(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  const auto ech = row_echelon(a);
  const Eigen::Index n = a.cols();
  std::vector<bool> is_pivot(static_cast<std::size_t>(n), false);
  for (auto p : ech.pivots) is_pivot[static_cast<std::size_t>(p)] = true;
  MatrixX<Scalar> basis = MatrixX<Scalar>::Zero(n, n - ech.rank());
  Eigen::Index k = 0;
  for (Eigen::Index free = 0; free < n; ++free) {
    if (is_pivot[static_cast<std::size_t>(free)]) continue;
    basis(free, k) = Scalar(1);
    for (Eigen::Index r = 0; r < ech.rank(); ++r) {
      basis(ech.pivots[static_cast<std::size_t>(r)], k) = -ech.reduced(r, free);
    }
    ++k;
  }
  return basis;
}

/// The pivot columns of A, which form a basis of its column space.
template <typename Derived>
MatrixX<typename Derived::Scalar> column_basis(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  const auto ech = row_echelon(a);
  MatrixX<Scalar> basis(a.rows(), ech.rank());
  for (Eigen::Index k = 0; k < ech.rank(); ++k) {
    basis.col(k) = a.col(ech.pivots[static_cast<std::size_t>(k)]);
  }
  return basis;
}

/// Some x with A x = b (free variables zero), or nullopt when inconsistent.
template <typename DerivedA, typename DerivedB>
std::optional<VectorX<typename DerivedA::Scalar>> solve(const Eigen::MatrixBase<DerivedA>& a,
                                                        const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  MatrixX<Scalar> augmented(a.rows(), a.cols() + 1);
  augmented << a, b;
  const auto ech = row_echelon(augmented);
  if (!ech.pivots.empty() && ech.pivots.back() == a.cols()) return std::nullopt;
  VectorX<Scalar> x = VectorX<Scalar>::Zero(a.cols());
  for (Eigen::Index r = 0; r < ech.rank(); ++r) {
    x(ech.pivots[static_cast<std::size_t>(r)]) = ech.reduced(r, a.cols());
  }
  return x;
}

/// Exact inverse of a square matrix, or nullopt when singular.
template <typename Derived>
std::optional<MatrixX<typename Derived::Scalar>> inverse(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = a.rows();
  MatrixX<Scalar> augmented(n, 2 * n);
  augmented << a, MatrixX<Scalar>::Identity(n, n);
  const auto ech = row_echelon(augmented);
  if (ech.rank() < n || ech.pivots[static_cast<std::size_t>(n - 1)] != n - 1) return std::nullopt;
  return ech.reduced.rightCols(n);
}

/// True when every entry is exactly zero.
template <typename Derived>
bool is_zero_matrix(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      if (a(i, j) != Scalar(0)) return false;
    }
  }
  return true;
}

}  // namespace sbp
