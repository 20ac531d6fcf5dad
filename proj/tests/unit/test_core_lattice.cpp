#include <doctest.h>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <random>

#include "sbp/linalg.hpp"
#include "sbp/norm.hpp"
#include "sbp/support.hpp"

using namespace sbp;

namespace {

Vector random_vector(std::mt19937_64& rng, Eigen::Index n, bool positive = false) {
  std::uniform_int_distribution<int> num(positive ? 1 : -9, 9), den(1, 9), zero(0, 3);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    v(i) = (!positive && zero(rng) == 0) ? Rational(0) : Rational(num(rng), den(rng));
  }
  return v;
}

Vector random_weights(std::mt19937_64& rng, Eigen::Index n) { return random_vector(rng, n, true); }

using Float = boost::multiprecision::cpp_bin_float_100;

Float to_float(const Rational& x) {
  return Float(numerator(x).str()) / Float(denominator(x).str());
}

}  // namespace

TEST_CASE("rationals are canonical") {
  CHECK(Rational(3, 6) == Rational(1, 2));
  CHECK(denominator(Rational(-3, 6)) == 2);
  CHECK(numerator(Rational(-3, 6)) == -1);
  CHECK(parse_rational("3/6") == Rational(1, 2));
  CHECK(to_string(parse_rational("3/6")) == "1/2");
  CHECK(to_string(parse_rational("-0/5")) == "0");
  CHECK(to_string(parse_rational("-12")) == "-12");
  CHECK(to_string(parse_rational("123456789012345678901234567890/3")) == "41152263004115226300411522630");
  CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
  CHECK_THROWS_AS(parse_rational(""), ParseError);
  CHECK_THROWS_AS(parse_rational(" 1"), ParseError);
  CHECK_THROWS_AS(parse_rational("1/-2"), ParseError);
  CHECK_THROWS_AS(parse_rational("0.5"), ParseError);
  CHECK_THROWS_AS(parse_rational("1/"), ParseError);
  CHECK(to_string(make_vector({1, Rational(-1, 2), 0})) == "(1, -1/2, 0)");
}

TEST_CASE("exact linear algebra") {
  const Matrix a = make_matrix({{1, 2, 3}, {2, 4, 6}, {1, 0, 1}});
  CHECK(rank(a) == 2);
  const Matrix k = nullspace(a);
  REQUIRE(k.cols() == 1);
  CHECK(is_zero_matrix((a * k).eval()));
  CHECK(column_basis(a).cols() == 2);
  const auto x = solve(a, make_vector({4, 8, 2}));
  REQUIRE(x.has_value());
  CHECK((a * *x).eval() == make_vector({4, 8, 2}));
  CHECK_FALSE(solve(a, make_vector({1, 0, 0})).has_value());
  const Matrix b = make_matrix({{2, 1}, {1, 1}});
  CHECK((b * *inverse(b)).eval() == Matrix::Identity(2, 2));
  CHECK_FALSE(inverse(a).has_value());
}

TEST_CASE("support") {
  CHECK(support(make_vector({0, 3, 0, -2})) == SupportSet::from_atoms({2, 4}));
  CHECK(support(make_vector({0, 0, 0})).empty());
  CHECK(support(make_vector({Rational(1, 3), 0, 5})) == SupportSet::from_atoms({1, 3}));
  CHECK(SupportSet::from_atoms({1, 3}).to_string() == "{1,3}");
  CHECK(SupportSet().to_string() == "{}");
}

TEST_CASE("is_disjoint") {
  CHECK(is_disjoint(make_vector({1, 0}), make_vector({0, 2})));
  CHECK_FALSE(is_disjoint(make_vector({1, 1}), make_vector({0, 2})));
  CHECK(is_disjoint(make_vector({0, 0}), make_vector({5, 7})));
  CHECK_THROWS_AS(is_disjoint(make_vector({1}), make_vector({0, 2})), DimensionError);
}

TEST_CASE("band_contains") {
  CHECK(band_contains(make_vector({1, 0, 2}), make_vector({0, 0, 5})));
  CHECK_FALSE(band_contains(make_vector({1, 0, 2}), make_vector({1, 1, 0})));
  CHECK(band_contains(make_vector({0, 0, 0}), make_vector({0, 0, 0})));
  CHECK_THROWS_AS(band_contains(make_vector({1}), make_vector({0, 2})), DimensionError);
}

TEST_CASE("order relation laws") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 2000; ++trial) {
    const Vector f = random_vector(rng, 5), g = random_vector(rng, 5), h = random_vector(rng, 5);
    CHECK(support(f + g).subset_of(support(f) | support(g)));
    CHECK(is_disjoint(f, g) == is_disjoint(g, f));
    CHECK(is_disjoint(f, f) == is_zero_matrix(f));
    CHECK(band_contains(f, f));
    if (band_contains(g, f) && band_contains(h, g)) CHECK(band_contains(h, f));
    if (is_disjoint(f, g) && band_contains(g, h)) CHECK(is_disjoint(f, h));
  }
}

TEST_CASE("norm_value examples") {
  const auto l2 = AtomicSpace::unweighted("2", 2);
  const NormValue five = norm_value(l2, make_vector({3, 4}));
  CHECK(five.squared());
  CHECK(five.value() == 25);
  CHECK(five.equals(5));
  CHECK(five.to_string() == "sqrt(25)");
  CHECK(norm_value(AtomicSpace::unweighted("1", 2), make_vector({1, Rational(1, 2)}), NormSide::Dual) ==
        NormValue::exact(1));
  CHECK(norm_value(AtomicSpace::unweighted("inf", 2), make_vector({2, -3})) == NormValue::exact(3));
}

TEST_CASE("weighted norms and their duals") {
  const Vector w = make_vector({2, Rational(1, 3)});
  const Vector x = make_vector({1, -3});
  CHECK(norm_value(AtomicSpace(NormSpec::parse("1", w)), x).value() == Rational(2 + 1));
  CHECK(norm_value(AtomicSpace(NormSpec::parse("1", w)), x, NormSide::Dual).value() == 9);
  CHECK(norm_value(AtomicSpace(NormSpec::parse("inf", w)), x).value() == 2);
  CHECK(norm_value(AtomicSpace(NormSpec::parse("inf", w)), x, NormSide::Dual).value() == Rational(1, 2) + 9);
  CHECK(norm_value(AtomicSpace(NormSpec::parse("2", w)), x).value() == 2 + 3);
  CHECK(norm_value(AtomicSpace(NormSpec::parse("2", w)), x, NormSide::Dual).value() == Rational(1, 2) + 27);
}

TEST_CASE("norm spec validation") {
  CHECK_THROWS(NormSpec::parse("1/2", make_vector({1})));
  CHECK_THROWS(NormSpec::parse("2", make_vector({1, 0})));
  CHECK_THROWS(NormSpec::parse("2", make_vector({-1})));
  CHECK_THROWS(NormSpec::parse("abc", make_vector({1})));
  CHECK(NormSpec::parse("4/2", make_vector({1})).kind() == ExponentKind::Two);
  CHECK(NormSpec::parse("3/2", make_vector({1})).exponent_string() == "3/2");
}

TEST_CASE("general exponents are certified enclosures") {
  std::mt19937_64 rng(2);
  const Rational width = enclosure_width();
  for (const char* p : {"3/2", "3", "7/3"}) {
    for (int trial = 0; trial < 40; ++trial) {
      const Vector w = random_weights(rng, 3);
      const Vector x = random_vector(rng, 3);
      const AtomicSpace space(NormSpec::parse(p, w));
      for (NormSide side : {NormSide::Primal, NormSide::Dual}) {
        const NormValue v = norm_value(space, x, side);
        REQUIRE_FALSE(v.squared());
        CHECK(v.upper() - v.lower() <= width);
        // Independent oracle: 100-digit binary floating point.
        const Float pp = to_float(space.norm.p());
        const Float e = side == NormSide::Primal ? pp : pp / (pp - 1);
        Float sum = 0;
        for (Eigen::Index i = 0; i < 3; ++i) {
          const Float xi = abs(to_float(x(i)));
          const Float wi = to_float(w(i));
          sum += side == NormSide::Primal ? wi * pow(xi, e) : pow(wi, 1 - e) * pow(xi, e);
        }
        const Float value = sum == 0 ? Float(0) : pow(sum, 1 / e);
        const Float slack("1e-60");
        CHECK(to_float(v.lower()) <= value + slack);
        CHECK(value <= to_float(v.upper()) + slack);
      }
    }
  }
  // Perfect powers come back exact.
  CHECK(norm_value(AtomicSpace::unweighted("3", 2), make_vector({3, 0})) == NormValue::exact(3));
}

TEST_CASE("indeterminate comparison") {
  const NormValue v = NormValue::bounds(Rational(1), Rational(2));
  CHECK_THROWS_AS(v.compare(Rational(3, 2)), IndeterminateComparison);
  CHECK(v.compare(3) == std::partial_ordering::less);
  CHECK(v.compare(0) == std::partial_ordering::greater);
}

TEST_CASE("norms are homogeneous and lattice norms") {
  std::mt19937_64 rng(3);
  for (const char* p : {"1", "2", "inf"}) {
    for (int trial = 0; trial < 10000 / 3; ++trial) {
      const Vector w = random_weights(rng, 4);
      const Vector x = random_vector(rng, 4);
      const AtomicSpace space(NormSpec::parse(p, w));
      const Rational s(static_cast<int>(rng() % 19) - 9, static_cast<int>(rng() % 5) + 1);
      const NormValue nx = norm_value(space, x);
      const Rational factor = s.sign() < 0 ? Rational(-s) : s;
      CHECK(norm_value(space, (x * s).eval()) == nx.scaled(factor));
      CHECK(norm_value(space, x.cwiseAbs().eval()) == nx);
    }
  }
}

TEST_CASE("strict monotonicity") {
  CHECK(is_strictly_monotone(AtomicSpace::unweighted("1", 2)).strictly_monotone);
  CHECK(is_strictly_monotone(AtomicSpace(NormSpec::parse("2", make_vector({1, 3})))).strictly_monotone);
  const auto sup = is_strictly_monotone(AtomicSpace::unweighted("inf", 2));
  REQUIRE_FALSE(sup.strictly_monotone);
  REQUIRE(sup.witness.has_value());
  CHECK(sup.witness->first == unit_vector(2, 0));
  CHECK(sup.witness->second == unit_vector(2, 1));
  const auto space = AtomicSpace::unweighted("inf", 2);
  CHECK(norm_value(space, (sup.witness->first + sup.witness->second).eval()) ==
        norm_value(space, sup.witness->first));
  // One atom: ||x + y|| > ||x|| for positive x, y regardless of p.
  CHECK(is_strictly_monotone(AtomicSpace::unweighted("inf", 1)).strictly_monotone);
}

TEST_CASE("strict monotonicity oracle on random positive pairs") {
  std::mt19937_64 rng(4);
  for (const char* p : {"1", "2"}) {
    const bool claimed = is_strictly_monotone(AtomicSpace::unweighted(p, 3)).strictly_monotone;
    bool observed = true;
    for (int trial = 0; trial < 1000; ++trial) {
      const AtomicSpace space(NormSpec::parse(p, random_weights(rng, 3)));
      Vector x = random_vector(rng, 3).cwiseAbs();
      const Vector y = random_vector(rng, 3, true);
      if (is_zero_matrix(x)) x(0) = 1;
      if (norm_value(space, (x + y).eval()).compare(0) == std::partial_ordering::equivalent) continue;
      const NormValue a = norm_value(space, (x + y).eval());
      const NormValue b = norm_value(space, x);
      if (!(a.value() > b.value())) observed = false;
    }
    CHECK(claimed == observed);
  }
}
