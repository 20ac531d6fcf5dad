#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>

#include "sbp/rational.hpp"

namespace sbp {

class ScalarOverflow : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

/// Exact rational with 64-bit numerator and denominator, always in lowest
/// terms with a positive denominator. Every operation that would leave the
/// 64-bit range throws ScalarOverflow instead of wrapping, so callers can retry
/// the computation with Rational and get the same answer.
class SmallRational {
 public:
  constexpr SmallRational() = default;
  constexpr SmallRational(int value) : num_(value) {}  // NOLINT(google-explicit-constructor)
  SmallRational(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
    if (den_ == 0) throw std::domain_error("SmallRational: zero denominator");
    normalize();
  }

  std::int64_t numerator() const { return num_; }
  std::int64_t denominator() const { return den_; }
  int sign() const { return (num_ > 0) - (num_ < 0); }

  friend SmallRational operator+(const SmallRational& a, const SmallRational& b) {
    const std::int64_t g = std::gcd(a.den_, b.den_);
    const std::int64_t bd = b.den_ / g;
    return SmallRational(add(mul(a.num_, bd), mul(b.num_, a.den_ / g)), mul(a.den_, bd));
  }
  friend SmallRational operator-(const SmallRational& a) { return SmallRational(checked(-a.num_), a.den_, Raw{}); }
  friend SmallRational operator-(const SmallRational& a, const SmallRational& b) { return a + (-b); }
  friend SmallRational operator*(const SmallRational& a, const SmallRational& b) {
    const std::int64_t g1 = std::gcd(a.num_, b.den_);
    const std::int64_t g2 = std::gcd(b.num_, a.den_);
    return SmallRational(mul(a.num_ / g1, b.num_ / g2), mul(a.den_ / g2, b.den_ / g1), Raw{});
  }
  friend SmallRational operator/(const SmallRational& a, const SmallRational& b) {
    if (b.num_ == 0) throw std::domain_error("SmallRational: division by zero");
    const SmallRational reciprocal = b.num_ < 0 ? SmallRational(checked(-b.den_), checked(-b.num_), Raw{})
                                                : SmallRational(b.den_, b.num_, Raw{});
    return a * reciprocal;
  }
  SmallRational& operator+=(const SmallRational& o) { return *this = *this + o; }
  SmallRational& operator-=(const SmallRational& o) { return *this = *this - o; }
  SmallRational& operator*=(const SmallRational& o) { return *this = *this * o; }
  SmallRational& operator/=(const SmallRational& o) { return *this = *this / o; }

  friend bool operator==(const SmallRational&, const SmallRational&) = default;
  friend bool operator<(const SmallRational& a, const SmallRational& b) {
    return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
  }
  friend bool operator>(const SmallRational& a, const SmallRational& b) { return b < a; }
  friend bool operator<=(const SmallRational& a, const SmallRational& b) { return !(b < a); }
  friend bool operator>=(const SmallRational& a, const SmallRational& b) { return !(a < b); }

  /// Throws ScalarOverflow when x does not fit.
  static SmallRational from(const Rational& x);
  Rational to_rational() const { return Rational(Integer(num_)) / Rational(Integer(den_)); }

 private:
  struct Raw {};
  SmallRational(std::int64_t num, std::int64_t den, Raw) : num_(num), den_(den) {}

  static std::int64_t checked(std::int64_t v) {
    // INT64_MIN has no negation; keeping it out makes sign flips safe.
    if (v == INT64_MIN) throw ScalarOverflow("SmallRational overflow");
    return v;
  }
  static std::int64_t mul(std::int64_t a, std::int64_t b) {
    std::int64_t out;
    if (__builtin_mul_overflow(a, b, &out)) throw ScalarOverflow("SmallRational overflow");
    return checked(out);
  }
  static std::int64_t add(std::int64_t a, std::int64_t b) {
    std::int64_t out;
    if (__builtin_add_overflow(a, b, &out)) throw ScalarOverflow("SmallRational overflow");
    return checked(out);
  }
  void normalize() {
    checked(num_);
    checked(den_);
    if (den_ < 0) num_ = -num_, den_ = -den_;
    const std::int64_t g = std::gcd(num_, den_);
    if (g > 1) num_ /= g, den_ /= g;
    if (num_ == 0) den_ = 1;
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace sbp

namespace Eigen {

template <>
struct NumTraits<sbp::SmallRational> : GenericNumTraits<sbp::SmallRational> {
  using Real = sbp::SmallRational;
  using NonInteger = sbp::SmallRational;
  using Nested = sbp::SmallRational;
  using Literal = sbp::SmallRational;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 4,
    MulCost = 4
  };
  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 0; }
};

}  // namespace Eigen

namespace sbp {

inline SmallRational SmallRational::from(const Rational& x) {
  const Integer n = boost::multiprecision::numerator(x);
  const Integer d = boost::multiprecision::denominator(x);
  const Integer limit(INT64_MAX);
  if (abs(n) > limit || d > limit) throw ScalarOverflow("SmallRational: value out of range");
  return SmallRational(n.convert_to<std::int64_t>(), d.convert_to<std::int64_t>(), Raw{});
}

template <typename Derived>
MatrixX<SmallRational> to_small(const Eigen::MatrixBase<Derived>& a) {
  return a.unaryExpr([](const Rational& x) { return SmallRational::from(x); });
}

template <typename Derived>
Matrix to_rational(const Eigen::MatrixBase<Derived>& a) {
  return a.unaryExpr([](const SmallRational& x) { return x.to_rational(); });
}

/// Runs fn<SmallRational>() and repeats it with Rational when an intermediate
/// value leaves the 64-bit range. Both runs are exact, so the answer is the
/// same; only the cost differs.
template <typename Fn>
auto with_fast_scalar(Fn&& fn) {
  try {
    return fn(SmallRational{});
  } catch (const ScalarOverflow&) {
    return fn(Rational{});
  }
}

}  // namespace sbp
