#include "sbp/norm.hpp"

#include <gmp.h>

#include <algorithm>

namespace sbp {

namespace {

Integer pow_int(const Integer& base, unsigned long e) {
  Integer out;
  mpz_pow_ui(out.backend().data(), base.backend().data(), e);
  return out;
}

Integer ten_to(unsigned digits) { return pow_int(Integer(10), digits); }

/// floor(n^(1/k)) for n >= 0 and whether the root is exact.
std::pair<Integer, bool> integer_root(const Integer& n, unsigned long k) {
  Integer r;
  const int exact = mpz_root(r.backend().data(), n.backend().data(), k);
  return {r, exact != 0};
}

unsigned long to_exponent(const Integer& value) {
  if (value > Integer(1 << 20)) throw std::domain_error("exponent too large for exact powering");
  return value.convert_to<unsigned long>();
}

Rational pow_rational(const Rational& x, unsigned long e) {
  return Rational(pow_int(numerator(x), e), pow_int(denominator(x), e));
}

Rational abs(const Rational& x) { return x.sign() < 0 ? Rational(-x) : x; }

using Enclosure = std::pair<Rational, Rational>;

Enclosure sum(const Enclosure& a, const Enclosure& b) { return {a.first + b.first, a.second + b.second}; }

Enclosure product(const Enclosure& a, const Enclosure& b) {
  return {a.first * b.first, a.second * b.second};
}

/// (sum_i scale_i * |x_i|^exponent)^(1/exponent) enclosed to the target width.
/// `scale_exponent` is applied to the weights: scale_i = w_i^scale_exponent.
NormValue general_norm(const Vector& x, const Vector& weights, const Rational& exponent,
                       const Rational& scale_exponent) {
  const Rational width = enclosure_width();
  for (unsigned digits = 40;; digits += 30) {
    Enclosure total{Rational(0), Rational(0)};
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      if (is_zero(x(i))) continue;
      const auto term = product(detail::power_enclosure(abs(x(i)), exponent, digits),
                                detail::power_enclosure(weights(i), scale_exponent, digits));
      total = sum(total, term);
    }
    const Rational inverse = Rational(1) / exponent;
    const Rational lo = detail::power_enclosure(total.first, inverse, digits).first;
    const Rational hi = detail::power_enclosure(total.second, inverse, digits).second;
    if (hi - lo <= width) return lo == hi ? NormValue::exact(lo) : NormValue::bounds(lo, hi);
    if (digits > 400) throw IndeterminateComparison("norm enclosure failed to converge");
  }
}

}  // namespace

namespace detail {

Enclosure power_enclosure(const Rational& x, const Rational& exponent, unsigned digits) {
  if (x.sign() < 0) throw std::domain_error("power_enclosure: negative base");
  if (is_zero(exponent)) return {Rational(1), Rational(1)};
  if (is_zero(x)) {
    if (exponent.sign() < 0) throw std::domain_error("power_enclosure: zero to negative power");
    return {Rational(0), Rational(0)};
  }
  const Integer a = numerator(exponent);
  const unsigned long up = to_exponent(a.sign() < 0 ? Integer(-a) : a);
  const unsigned long root = to_exponent(denominator(exponent));
  const Rational y = pow_rational(x, up);
  const Integer& n = numerator(y);
  const Integer& d = denominator(y);

  Enclosure out;
  auto [rn, exact_n] = integer_root(n, root);
  auto [rd, exact_d] = integer_root(d, root);
  if (exact_n && exact_d) {
    out = {Rational(rn, rd), Rational(rn, rd)};
  } else {
    // y^(1/k) = (n d^(k-1))^(1/k) / d, scaled by 10^digits before flooring.
    const Integer scale = ten_to(digits);
    const Integer radicand = n * pow_int(d, root - 1) * pow_int(scale, root);
    const auto [r, exact] = integer_root(radicand, root);
    const Integer den = d * scale;
    out = {Rational(r, den), exact ? Rational(r, den) : Rational(r + 1, den)};
  }
  if (a.sign() < 0) out = {Rational(1) / out.second, Rational(1) / out.first};
  return out;
}

}  // namespace detail

NormSpec::NormSpec(ExponentKind kind, Rational p, Vector weights)
    : kind_(kind), p_(std::move(p)), weights_(std::move(weights)) {
  if (weights_.size() < 1) throw std::invalid_argument("norm needs at least one atom");
  for (Eigen::Index i = 0; i < weights_.size(); ++i) {
    if (weights_(i).sign() <= 0) throw std::invalid_argument("norm weights must be positive");
  }
  switch (kind_) {
    case ExponentKind::One: p_ = 1; break;
    case ExponentKind::Two: p_ = 2; break;
    case ExponentKind::Infinity: p_ = 0; break;
    case ExponentKind::General:
      if (p_ < 1) throw std::invalid_argument("norm exponent must be >= 1");
      if (p_ == 1) kind_ = ExponentKind::One;
      if (p_ == 2) kind_ = ExponentKind::Two;
      break;
  }
}

NormSpec NormSpec::parse(std::string_view exponent, Vector weights) {
  if (exponent == "inf") return NormSpec(ExponentKind::Infinity, 0, std::move(weights));
  return NormSpec(ExponentKind::General, parse_rational(exponent), std::move(weights));
}

NormSpec NormSpec::unweighted(std::string_view exponent, Eigen::Index n) {
  return parse(exponent, Vector::Constant(n, Rational(1)));
}

std::string NormSpec::exponent_string() const {
  return kind_ == ExponentKind::Infinity ? std::string("inf") : sbp::to_string(p_);
}

AtomicSpace::AtomicSpace(NormSpec spec) : norm(std::move(spec)) {}

AtomicSpace AtomicSpace::unweighted(std::string_view exponent, Eigen::Index n) {
  return AtomicSpace(NormSpec::unweighted(exponent, n));
}

const Rational& NormValue::value() const {
  if (!is_exact()) throw IndeterminateComparison("norm value is only known up to an enclosure");
  return lower_;
}

std::partial_ordering NormValue::compare(const Rational& c) const {
  const Rational target = squared_ ? Rational(c * c) : c;
  if (is_exact()) return three_way(lower_, target);
  if (upper_ < target) return std::partial_ordering::less;
  if (lower_ > target) return std::partial_ordering::greater;
  throw IndeterminateComparison("cannot order norm enclosure " + to_string() + " against " +
                                sbp::to_string(c));
}

NormValue operator*(const NormValue& a, const NormValue& b) {
  if (a.squared_ != b.squared_) throw std::logic_error("NormValue product: mixed squaredness");
  return NormValue(a.lower_ * b.lower_, a.upper_ * b.upper_, a.squared_);
}

NormValue NormValue::scaled(const Rational& factor) const {
  const Rational f = squared_ ? Rational(factor * factor) : factor;
  return NormValue(lower_ * f, upper_ * f, squared_);
}

NormValue NormValue::max(const NormValue& a, const NormValue& b) {
  if (a.squared_ != b.squared_) throw std::logic_error("NormValue max: mixed squaredness");
  return NormValue(std::max(a.lower_, b.lower_), std::max(a.upper_, b.upper_), a.squared_);
}

std::string NormValue::to_string() const {
  std::string body = is_exact() ? sbp::to_string(lower_)
                                : "[" + sbp::to_string(lower_) + ", " + sbp::to_string(upper_) + "]";
  return squared_ ? "sqrt(" + body + ")" : body;
}

Rational enclosure_width() { return Rational(Integer(1), ten_to(30)); }

NormValue norm_value(const AtomicSpace& space, const Vector& v, NormSide side) {
  const NormSpec& spec = space.norm;
  if (v.size() != spec.size()) throw DimensionError("norm_value: dimension mismatch");
  const Vector& w = spec.weights();
  // Dual of p = 1 is a max-norm and dual of p = inf is a sum-norm.
  ExponentKind kind = spec.kind();
  if (side == NormSide::Dual) {
    if (kind == ExponentKind::One) kind = ExponentKind::Infinity;
    else if (kind == ExponentKind::Infinity) kind = ExponentKind::One;
  }
  const bool dual = side == NormSide::Dual;
  switch (kind) {
    case ExponentKind::One: {
      Rational s = 0;
      for (Eigen::Index i = 0; i < v.size(); ++i) s += dual ? abs(v(i)) / w(i) : w(i) * abs(v(i));
      return NormValue::exact(s);
    }
    case ExponentKind::Infinity: {
      Rational m = 0;
      for (Eigen::Index i = 0; i < v.size(); ++i) {
        m = std::max(m, dual ? Rational(abs(v(i)) / w(i)) : Rational(w(i) * abs(v(i))));
      }
      return NormValue::exact(m);
    }
    case ExponentKind::Two: {
      Rational s = 0;
      for (Eigen::Index i = 0; i < v.size(); ++i) s += dual ? v(i) * v(i) / w(i) : w(i) * v(i) * v(i);
      return NormValue::exact_square(s);
    }
    case ExponentKind::General: {
      if (!dual) return general_norm(v, w, spec.p(), Rational(1));
      const Rational q = spec.p() / (spec.p() - 1);
      return general_norm(v, w, q, Rational(1) - q);
    }
  }
  throw std::logic_error("norm_value: unknown exponent kind");
}

MonotonicityResult is_strictly_monotone(const AtomicSpace& space) {
  MonotonicityResult out;
  const Eigen::Index n = space.n();
  // A single atom is strictly monotone under every weighted norm.
  if (space.norm.kind() != ExponentKind::Infinity || n == 1) {
    out.strictly_monotone = true;
    return out;
  }
  const Vector& w = space.norm.weights();
  Vector x = Vector::Zero(n);
  Vector y = Vector::Zero(n);
  x(0) = Rational(1) / w(0);
  y(1) = Rational(1) / w(1);
  out.witness = std::make_pair(std::move(x), std::move(y));
  return out;
}

}  // namespace sbp
