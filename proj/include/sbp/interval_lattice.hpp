#pragma once

// Nonatomic model on [0,1]: piecewise polynomials with rational breakpoints,
// supports modulo null sets, and finite-rank integral operators
// Tf = sum_k (int w_k f dt) phi_k.

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sbp/operator.hpp"
#include "sbp/rational.hpp"

namespace sbp {

/// Malformed piecewise data (gaps, overlaps, degenerate pieces, bad range).
class IntervalError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Coefficients in powers of t, lowest first; empty means the zero polynomial.
using Polynomial = std::vector<Rational>;

struct Piece {
  Rational from;
  Rational to;
  Polynomial coeffs;

  bool operator==(const Piece&) const = default;
};

/// Finite union of closed intervals in [0,1], modulo null sets: touching
/// intervals merge and degenerate ones vanish.
class IntervalRegion {
 public:
  IntervalRegion() = default;
  explicit IntervalRegion(std::vector<std::pair<Rational, Rational>> intervals);
  static IntervalRegion whole() { return IntervalRegion({{Rational(0), Rational(1)}}); }

  const std::vector<std::pair<Rational, Rational>>& intervals() const { return intervals_; }
  bool empty() const { return intervals_.empty(); }
  Rational measure() const;
  /// True when [a, b] lies inside the region up to a null set.
  bool covers(const Rational& a, const Rational& b) const;

  IntervalRegion complement() const;
  IntervalRegion intersect(const IntervalRegion& other) const;
  IntervalRegion unite(const IntervalRegion& other) const;
  bool subset_of(const IntervalRegion& other) const { return intersect(other.complement()).empty(); }

  /// "empty" or "[0,1/2] u [3/4,1]".
  std::string to_string() const;

  bool operator==(const IntervalRegion&) const = default;
  bool operator<(const IntervalRegion& other) const;

 private:
  std::vector<std::pair<Rational, Rational>> intervals_;
};

class PiecewisePoly {
 public:
  static constexpr std::size_t kMaxDegree = 16;
  static constexpr std::size_t kMaxPieces = 64;

  /// The zero function.
  PiecewisePoly();
  /// Validates coverage of [0,1] and budgets, then canonicalizes: zero
  /// coefficients trimmed and equal neighbours merged.
  explicit PiecewisePoly(std::vector<Piece> pieces);

  static PiecewisePoly constant(const Rational& c);
  /// p(t) on [from, to), zero elsewhere.
  static PiecewisePoly restricted(Polynomial p, const Rational& from, const Rational& to);
  static PiecewisePoly indicator(const Rational& from, const Rational& to);
  static PiecewisePoly indicator(const IntervalRegion& region);

  const std::vector<Piece>& pieces() const { return pieces_; }
  /// Interior breakpoints.
  std::vector<Rational> breakpoints() const;
  /// Polynomial on the piece containing the open interval (a, b).
  const Polynomial& on(const Rational& a, const Rational& b) const;
  bool is_zero() const;

  PiecewisePoly operator+(const PiecewisePoly& other) const;
  PiecewisePoly operator*(const Rational& c) const;
  /// Pointwise product.
  PiecewisePoly times(const PiecewisePoly& other) const;

  std::string to_string() const;
  bool operator==(const PiecewisePoly&) const = default;

 private:
  std::vector<Piece> pieces_;
};

/// Sorted union of 0, 1 and every breakpoint of the given functions.
std::vector<Rational> common_cuts(const std::vector<const PiecewisePoly*>& functions,
                                  const std::vector<Rational>& extra = {});

IntervalRegion pp_support(const PiecewisePoly& f);
bool pp_disjoint(const PiecewisePoly& f, const PiecewisePoly& g);
/// supp f inside supp g, modulo null sets.
bool pp_band_contains(const PiecewisePoly& g, const PiecewisePoly& f);
/// Exact int_0^1 w f dt.
Rational integrate(const PiecewisePoly& w, const PiecewisePoly& f);

struct Term {
  PiecewisePoly kernel;
  PiecewisePoly image;

  bool operator==(const Term&) const = default;
};

class FiniteRankOp {
 public:
  FiniteRankOp() = default;
  explicit FiniteRankOp(std::vector<Term> terms) : terms_(std::move(terms)) {}

  const std::vector<Term>& terms() const { return terms_; }
  Eigen::Index rank_bound() const { return static_cast<Eigen::Index>(terms_.size()); }

  bool operator==(const FiniteRankOp&) const = default;

 private:
  std::vector<Term> terms_;
};

/// (int w_k f)_k.
Vector frop_coefficients(const FiniteRankOp& t, const PiecewisePoly& f);
/// sum_k c_k phi_k.
PiecewisePoly frop_combine(const FiniteRankOp& t, const Vector& c);
PiecewisePoly frop_apply(const FiniteRankOp& t, const PiecewisePoly& f);

/// Basis (columns) of the coefficient vectors (int w_k f)_k over f supported
/// in `region`.
Matrix frop_image_subspace(const FiniteRankOp& t, const IntervalRegion& region);

/// Some f supported in `region` with frop_coefficients(t, f) = c, built as a
/// combination of the kernels restricted to the region. Requires c in
/// frop_image_subspace(t, region).
PiecewisePoly frop_preimage(const FiniteRankOp& t, const IntervalRegion& region, const Vector& c);

/// Supports of range elements, ascending.
std::vector<IntervalRegion> frop_range_supports(const FiniteRankOp& t);

/// A range element g = Tf with supp g exactly `target`, returned as f, or
/// nullopt when `target` is not a range support.
std::optional<PiecewisePoly> frop_realize_support(const FiniteRankOp& t, const IntervalRegion& target);

/// SBP witness: f disjoint from Tg while Tf meets Tg.
/// SCP witness: g inside supp Tf while Tg escapes supp Tf (the roles of f and
/// g in the containment implication are swapped relative to the atomic model,
/// so f is always the realizer of the offending range support).
struct IntervalWitness {
  WitnessKind kind;
  PiecewisePoly f;
  PiecewisePoly g;
  std::string note;

  bool operator==(const IntervalWitness&) const = default;
};

bool replays(const FiniteRankOp& t, const IntervalWitness& w);

struct IntervalVerdict {
  bool holds = true;
  std::optional<IntervalWitness> witness;

  bool operator==(const IntervalVerdict&) const = default;
};

IntervalVerdict frop_is_sbp(const FiniteRankOp& t);
IntervalVerdict frop_is_scp(const FiniteRankOp& t);

/// Kernels 2 chi_[0,1/2] and t chi_[0,1/2]; images 1 and t chi_[0,1/2].
FiniteRankOp build_example_ex1();
/// Projection onto span{1, t} with kernels 4 - 6t and -6 + 12t.
FiniteRankOp build_example_ex3();

}  // namespace sbp
