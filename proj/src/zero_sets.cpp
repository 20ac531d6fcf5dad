#include "sbp/zero_sets.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "sbp/linalg.hpp"
#include "sbp/parallel.hpp"

namespace sbp {

namespace {

/// Nonzero rows of the reduced echelon form: a canonical row-space key.
template <typename Scalar>
MatrixX<Scalar> row_space_key(const MatrixX<Scalar>& block) {
  const auto ech = row_echelon(block);
  return ech.reduced.topRows(ech.rank());
}

template <typename Scalar>
bool same_matrix(const MatrixX<Scalar>& a, const MatrixX<Scalar>& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && a == b;
}

template <typename Scalar>
struct Child {
  SupportSet members;
  MatrixX<Scalar> basis;
};

}  // namespace

template <typename Scalar>
BasicZeroSetLattice<Scalar>::BasicZeroSetLattice(std::vector<MatrixType> blocks, Eigen::Index dimension)
    : blocks_(std::move(blocks)), dimension_(dimension) {
  if (blocks_.size() > static_cast<std::size_t>(SupportSet::kCapacity)) {
    throw std::invalid_argument("zero-set lattice supports at most 64 elements");
  }
  for (int e = 0; e < size(); ++e) {
    if (blocks_[static_cast<std::size_t>(e)].cols() != dimension_) {
      throw DimensionError("zero-set lattice: block width mismatch");
    }
    if (is_zero_matrix(blocks_[static_cast<std::size_t>(e)])) loops_.set(e);
    if (blocks_[static_cast<std::size_t>(e)].rows() > 1 && rank(blocks_[static_cast<std::size_t>(e)]) > 1) {
      single_rows_ = false;
    }
  }
}

template <typename Scalar>
auto BasicZeroSetLattice<Scalar>::stacked(SupportSet elements) const -> MatrixType {
  Eigen::Index rows = 0;
  for (int e : elements.indices()) rows += blocks_[static_cast<std::size_t>(e)].rows();
  MatrixType out(rows, dimension_);
  Eigen::Index r = 0;
  for (int e : elements.indices()) {
    const auto& b = blocks_[static_cast<std::size_t>(e)];
    out.middleRows(r, b.rows()) = b;
    r += b.rows();
  }
  return out;
}

template <typename Scalar>
auto BasicZeroSetLattice<Scalar>::solutions(SupportSet zeros) const -> MatrixType {
  if (zeros.empty()) return MatrixType::Identity(dimension_, dimension_);
  return nullspace(stacked(zeros));
}

template <typename Scalar>
bool BasicZeroSetLattice<Scalar>::vanishes(int element, const MatrixType& basis) const {
  if (basis.cols() == 0) return true;
  return is_zero_matrix((blocks_[static_cast<std::size_t>(element)] * basis).eval());
}

template <typename Scalar>
SupportSet BasicZeroSetLattice<Scalar>::closure(SupportSet zeros) const {
  const MatrixType basis = solutions(zeros);
  SupportSet out;
  for (int e = 0; e < size(); ++e) {
    if (zeros.test(e) || vanishes(e, basis)) out.set(e);
  }
  return out;
}

template <typename Scalar>
SupportSet BasicZeroSetLattice<Scalar>::zero_set(const VectorType& y) const {
  if (y.size() != dimension_) throw DimensionError("zero_set: parameter dimension mismatch");
  SupportSet out;
  for (int e = 0; e < size(); ++e) {
    if (is_zero_matrix((blocks_[static_cast<std::size_t>(e)] * y).eval())) out.set(e);
  }
  return out;
}

template <typename Scalar>
std::vector<SupportSet> BasicZeroSetLattice<Scalar>::closed_sets(unsigned threads) const {
  // Elements with equal row spaces always vanish together: keep one
  // representative per class.
  std::vector<int> reps;
  std::vector<SupportSet> class_of(static_cast<std::size_t>(size()));
  std::vector<MatrixType> keys;
  for (int e = 0; e < size(); ++e) {
    if (loops_.test(e)) continue;
    MatrixType key = row_space_key(blocks_[static_cast<std::size_t>(e)]);
    bool merged = false;
    for (std::size_t r = 0; r < reps.size(); ++r) {
      if (same_matrix(keys[r], key)) {
        class_of[static_cast<std::size_t>(reps[r])].set(e);
        merged = true;
        break;
      }
    }
    if (!merged) {
      reps.push_back(e);
      keys.push_back(std::move(key));
      class_of[static_cast<std::size_t>(e)].set(e);
    }
  }

  // A representative whose row space meets the others only in 0 splits off
  // as a direct summand: it may be added to or removed from any closed set.
  SupportSet all_reps;
  for (int r : reps) all_reps.set(r);
  SupportSet separators;
  if (!reps.empty()) {
    const auto total = rank(stacked(all_reps));
    for (int r : reps) {
      const SupportSet rest = all_reps - SupportSet::single(r);
      const auto rest_rank = rest.empty() ? Eigen::Index{0} : rank(stacked(rest));
      if (rest_rank + rank(blocks_[static_cast<std::size_t>(r)]) == total) separators.set(r);
    }
  }
  const SupportSet core = all_reps - separators;

  // Level-by-level search over closed subsets of the core, each extended by
  // one element and re-closed. Solution bases are memoized per closed set.
  std::map<SupportSet, MatrixType> found;
  found.emplace(SupportSet{}, MatrixType::Identity(dimension_, dimension_));
  std::vector<SupportSet> frontier{SupportSet{}};
  while (!frontier.empty()) {
    std::vector<std::vector<Child<Scalar>>> children(frontier.size());
    parallel_for(frontier.size(), threads, [&](std::size_t k) {
      const SupportSet parent = frontier[k];
      const MatrixType& basis = found.at(parent);
      // With one functional per element the covers of a closed set partition
      // its complement, so an element already absorbed by a sibling can be
      // skipped. Wider blocks do not have that property.
      SupportSet covered = parent;
      for (int e : (core - parent).indices()) {
        if (single_rows_ && covered.test(e)) continue;
        const MatrixType restricted = (blocks_[static_cast<std::size_t>(e)] * basis).eval();
        MatrixType next = (basis * nullspace(restricted)).eval();
        SupportSet members = parent;
        members.set(e);
        for (int x : (core - members).indices()) {
          if (vanishes(x, next)) members.set(x);
        }
        covered = covered | members;
        children[k].push_back({members, std::move(next)});
      }
    });
    std::vector<SupportSet> next_frontier;
    for (auto& list : children) {
      for (auto& child : list) {
        if (found.emplace(child.members, std::move(child.basis)).second) {
          next_frontier.push_back(child.members);
        }
      }
    }
    std::sort(next_frontier.begin(), next_frontier.end());
    frontier = std::move(next_frontier);
  }

  const auto expand = [&](SupportSet reps_set) {
    SupportSet out = loops_;
    for (int r : reps_set.indices()) out = out | class_of[static_cast<std::size_t>(r)];
    return out;
  };
  const std::vector<int> sep = separators.indices();
  if (sep.size() >= 40) throw std::length_error("zero-set lattice too large to enumerate");
  std::vector<SupportSet> out;
  out.reserve(found.size() << sep.size());
  for (const auto& [core_set, basis] : found) {
    for (std::uint64_t pick = 0; pick < (std::uint64_t{1} << sep.size()); ++pick) {
      SupportSet chosen = core_set;
      for (std::size_t s = 0; s < sep.size(); ++s) {
        if ((pick >> s) & 1U) chosen.set(sep[s]);
      }
      out.push_back(expand(chosen));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

template <typename Scalar>
auto BasicZeroSetLattice<Scalar>::realize(SupportSet zeros) const -> std::optional<VectorType> {
  const MatrixType basis = solutions(zeros);
  if (closure(zeros) != zeros) return std::nullopt;
  VectorType y = VectorType::Zero(dimension_);
  const auto nonzero_on = [&](int e, const VectorType& v) {
    return !is_zero_matrix((blocks_[static_cast<std::size_t>(e)] * v).eval());
  };
  const SupportSet wanted = zeros.complement(size());
  for (int e : wanted.indices()) {
    if (nonzero_on(e, y)) continue;
    Eigen::Index pick = 0;
    while (pick < basis.cols() && !nonzero_on(e, basis.col(pick))) ++pick;
    if (pick == basis.cols()) throw std::logic_error("realize: closed set without a separating solution");
    const VectorType h = basis.col(pick);
    bool merged = false;
    for (int alpha = 1; alpha <= size() + 1 && !merged; ++alpha) {
      const VectorType candidate = y + Scalar(alpha) * h;
      merged = true;
      for (int x : wanted.indices()) {
        if ((nonzero_on(x, y) || nonzero_on(x, h)) && !nonzero_on(x, candidate)) {
          merged = false;
          break;
        }
      }
      if (merged) y = candidate;
    }
    if (!merged) throw std::logic_error("realize: no admissible combination coefficient");
  }
  return y;
}

template class BasicZeroSetLattice<Rational>;
template class BasicZeroSetLattice<SmallRational>;

}  // namespace sbp
