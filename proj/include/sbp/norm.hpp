#pragma once

#include <compare>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "sbp/rational.hpp"
#include "sbp/support.hpp"

namespace sbp {

enum class ExponentKind { One, Two, Infinity, General };

/// Weighted p-norm on n atoms:
///   p < inf:  ||x|| = (sum_i w_i |x_i|^p)^(1/p)
///   p = inf:  ||x|| = max_i w_i |x_i|
/// The dual norm of a functional psi is the conjugate-exponent norm with
/// reciprocal weights (max_i |psi_i|/w_i for p = 1, sum_i |psi_i|/w_i for
/// p = inf, sum_i psi_i^2/w_i for p = 2, and (sum_i w_i^(1-q)|psi_i|^q)^(1/q)
/// for general p).
class NormSpec {
 public:
  /// Exponent from text: "1", "2", "inf" or a rational "p/q" >= 1.
  static NormSpec parse(std::string_view exponent, Vector weights);
  static NormSpec unweighted(std::string_view exponent, Eigen::Index n);
  NormSpec(ExponentKind kind, Rational p, Vector weights);

  ExponentKind kind() const { return kind_; }
  /// Finite exponent value; meaningless for Infinity.
  const Rational& p() const { return p_; }
  const Vector& weights() const { return weights_; }
  Eigen::Index size() const { return weights_.size(); }
  /// "1", "2", "inf" or "p/q".
  std::string exponent_string() const;

  friend bool operator==(const NormSpec& a, const NormSpec& b) {
    return a.kind_ == b.kind_ && a.p_ == b.p_ && a.weights_ == b.weights_;
  }

 private:
  ExponentKind kind_;
  Rational p_;
  Vector weights_;
};

/// Finite purely atomic Banach lattice: n atoms with a weighted p-norm.
struct AtomicSpace {
  NormSpec norm;

  explicit AtomicSpace(NormSpec spec);
  static AtomicSpace unweighted(std::string_view exponent, Eigen::Index n);
  Eigen::Index n() const { return norm.size(); }
};

class IndeterminateComparison : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exact value or certified enclosure of a nonnegative norm.
///
/// When `squared()` is set the stored bounds refer to the square of the norm,
/// which keeps p = 2 quantities rational. Exactness means lower == upper.
class NormValue {
 public:
  static NormValue exact(Rational value) { return NormValue(value, value, false); }
  static NormValue exact_square(Rational square) { return NormValue(square, square, true); }
  static NormValue bounds(Rational lower, Rational upper) {
    return NormValue(std::move(lower), std::move(upper), false);
  }
  static NormValue square_bounds(Rational lower, Rational upper) {
    return NormValue(std::move(lower), std::move(upper), true);
  }

  bool squared() const { return squared_; }
  bool is_exact() const { return lower_ == upper_; }
  const Rational& lower() const { return lower_; }
  const Rational& upper() const { return upper_; }
  /// Exact value when exact and unsquared, the square when exact and squared.
  const Rational& value() const;

  /// Orders the norm against a nonnegative rational. Throws
  /// IndeterminateComparison when the enclosure straddles c.
  std::partial_ordering compare(const Rational& c) const;
  bool equals(const Rational& c) const { return compare(c) == std::partial_ordering::equivalent; }

  /// Product of norms; both operands must agree on squaredness.
  friend NormValue operator*(const NormValue& a, const NormValue& b);
  /// Norm scaled by a nonnegative factor.
  NormValue scaled(const Rational& factor) const;
  /// Upper envelope of two values of the same squaredness.
  static NormValue max(const NormValue& a, const NormValue& b);

  std::string to_string() const;

  friend bool operator==(const NormValue&, const NormValue&) = default;

 private:
  NormValue(Rational lower, Rational upper, bool squared)
      : lower_(std::move(lower)), upper_(std::move(upper)), squared_(squared) {}

  Rational lower_;
  Rational upper_;
  bool squared_;
};

enum class NormSide { Primal, Dual };

/// Enclosure width target for irrational norm values.
Rational enclosure_width();

NormValue norm_value(const AtomicSpace& space, const Vector& v, NormSide side = NormSide::Primal);

struct MonotonicityResult {
  bool strictly_monotone = false;
  /// For non-strictly-monotone spaces: x, y > 0 with ||x + y|| = ||x||.
  std::optional<std::pair<Vector, Vector>> witness;
};

MonotonicityResult is_strictly_monotone(const AtomicSpace& space);

namespace detail {

/// Enclosure [lo, hi] of x^(exponent) for x >= 0, exact when x^(exponent) is
/// rational. `digits` controls the decimal resolution of irrational roots.
std::pair<Rational, Rational> power_enclosure(const Rational& x, const Rational& exponent,
                                              unsigned digits);

}  // namespace detail

}  // namespace sbp
