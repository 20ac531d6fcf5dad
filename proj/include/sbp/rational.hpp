#pragma once

#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/gmp.hpp>
#include <Eigen/Core>

#include <compare>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sbp {

/// Exact rational scalar (GMP backed, always in lowest terms).
///
/// Expression templates are disabled so the type composes cleanly with Eigen's
/// own expression machinery.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Matrix = MatrixX<Rational>;
using Vector = VectorX<Rational>;

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses "p", "-p" or "p/q" with decimal integers. Rejects zero denominators,
/// whitespace and any other decoration.
Rational parse_rational(std::string_view text);

/// "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& value);

/// "(a, b, c)".
std::string to_string(const Vector& v);

inline bool is_zero(const Rational& value) { return value.sign() == 0; }

inline std::strong_ordering three_way(const Rational& a, const Rational& b) {
  const int c = a.compare(b);
  return c < 0 ? std::strong_ordering::less
               : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

/// Vector from a brace list, e.g. make_vector({1, Rational(1, 2)}).
Vector make_vector(std::initializer_list<Rational> coords);
Matrix make_matrix(std::initializer_list<std::initializer_list<Rational>> rows);

}  // namespace sbp
