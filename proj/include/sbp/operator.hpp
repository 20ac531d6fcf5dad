#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sbp/rational.hpp"
#include "sbp/support.hpp"
#include "sbp/zero_sets.hpp"

namespace sbp {

/// Square exact matrix acting on the atoms of a finite lattice. Column i is T e_i.
class Operator {
 public:
  /// Atom budget for support enumeration.
  static constexpr Eigen::Index kMaxAtoms = 20;

  explicit Operator(Matrix matrix);
  static Operator zero(Eigen::Index n) { return Operator(Matrix::Zero(n, n)); }
  static Operator identity(Eigen::Index n) { return Operator(Matrix::Identity(n, n)); }

  Eigen::Index n() const { return matrix_.rows(); }
  const Matrix& matrix() const { return matrix_; }
  const Rational& operator()(Eigen::Index row, Eigen::Index col) const { return matrix_(row, col); }
  /// T e_i for a 0-based atom index.
  Vector column(Eigen::Index i) const { return matrix_.col(i); }
  SupportSet column_support(Eigen::Index i) const;

  friend bool operator==(const Operator&, const Operator&) = default;

 private:
  Matrix matrix_;
};

Vector apply(const Operator& t, const Vector& f);
Operator compose(const Operator& a, const Operator& b);
bool is_projection(const Operator& t);

enum class WitnessKind { SbpViolation, ScpViolation, BpViolation, DpViolation, BetaViolation, ClosureViolation };

std::string to_string(WitnessKind kind);
WitnessKind witness_kind_from_string(const std::string& text);

/// A pair (f, g) violating one of the defining implications:
///   BP:   f ⊥ g       but not Tf ⊥ g
///   DP:   f ⊥ g       but not Tf ⊥ Tg
///   beta: f ◁ g       but not Tf ◁ Tg
///   SBP:  f ⊥ Tg      but not Tf ⊥ Tg
///   SCP:  f ◁ Tg      but not Tf ◁ Tg
/// Closure witnesses hold realizers of the two sets whose combination is
/// missing from the support family.
struct Witness {
  WitnessKind kind;
  Vector f;
  Vector g;
  std::string note;

  friend bool operator==(const Witness&, const Witness&) = default;
};

/// Re-evaluates the defining implication on the witness pair. True when the
/// violation is reproduced. Closure witnesses are checked by sigma membership
/// elsewhere and always return false here.
bool replays(const Operator& t, const Witness& w);

struct Verdict {
  bool holds = true;
  std::optional<Witness> witness;

  friend bool operator==(const Verdict&, const Verdict&) = default;
};

/// Family of exact supports of range elements, with their union S_T.
struct SigmaTable {
  Eigen::Index n = 0;
  std::vector<SupportSet> supports;  // ascending bitmask order, contains ∅
  SupportSet s_t;

  bool contains(SupportSet s) const;

  friend bool operator==(const SigmaTable&, const SigmaTable&) = default;
};

/// Zero-set lattice of the range of T: one element per atom, parametrized by
/// a column basis of T.
ZeroSetLattice range_lattice(const Operator& t);

/// Throws BudgetExceeded beyond Operator::kMaxAtoms atoms.
SigmaTable enumerate_sigma(const Operator& t, unsigned threads = 1);

class BudgetExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

class UnachievableSupport : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Some g with support(T g) == s. Throws UnachievableSupport otherwise.
Vector realize_support(const Operator& t, SupportSet s);

/// Nonempty inclusion-minimal members, ordered by smallest atom.
std::vector<SupportSet> minimal_supports(const SigmaTable& sigma);

Verdict is_band_preserving(const Operator& t);
Verdict is_disjointness_preserving(const Operator& t);
Verdict is_beta(const Operator& t);
Verdict is_sbp(const Operator& t, const SigmaTable& sigma);
Verdict is_sbp(const Operator& t);
Verdict is_scp(const Operator& t, const SigmaTable& sigma);
Verdict is_scp(const Operator& t);

struct ClosureReport {
  bool union_closed = true;
  bool intersection_closed = true;
  bool complement_closed = true;
  std::optional<Witness> witness;  // first failure, if any

  friend bool operator==(const ClosureReport&, const ClosureReport&) = default;
};

ClosureReport verify_sigma_closures(const Operator& t, const SigmaTable& sigma);

}  // namespace sbp
