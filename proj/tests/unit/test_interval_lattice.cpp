#include <doctest.h>

#include <random>

#include "sbp/interval_lattice.hpp"

using namespace sbp;

namespace {

const Rational half(1, 2);

PiecewisePoly phi2() { return PiecewisePoly::restricted({0, 1}, 0, half); }
PiecewisePoly identity_t() { return PiecewisePoly({{0, 1, {0, 1}}}); }

IntervalRegion region(std::initializer_list<std::pair<Rational, Rational>> spans) {
  return IntervalRegion(std::vector<std::pair<Rational, Rational>>(spans));
}

/// Pointwise value from the raw pieces, right-continuous except at 1.
Rational evaluate(const PiecewisePoly& f, const Rational& x) {
  for (const Piece& p : f.pieces()) {
    if (x >= p.from && (x < p.to || p.to == Rational(1))) {
      Rational acc = 0;
      for (auto it = p.coeffs.rbegin(); it != p.coeffs.rend(); ++it) acc = acc * x + *it;
      return acc;
    }
  }
  return 0;
}

/// Simpson's rule per piece of the common refinement; exact up to degree 3.
Rational simpson(const PiecewisePoly& w, const PiecewisePoly& f) {
  const auto cuts = common_cuts({&w, &f});
  Rational total = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const Rational a = cuts[i], b = cuts[i + 1], m = (a + b) / 2;
    // Evaluate strictly inside the piece to avoid neighbouring pieces at the ends.
    auto at = [&](const Rational& x, const PiecewisePoly& h) {
      const Polynomial& p = h.on(a, b);
      Rational acc = 0;
      for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
      return acc;
    };
    auto prod = [&](const Rational& x) { return at(x, w) * at(x, f); };
    total += (b - a) / 6 * (prod(a) + 4 * prod(m) + prod(b));
  }
  return total;
}

PiecewisePoly random_pp(std::mt19937_64& rng, int max_pieces, int max_degree) {
  std::uniform_int_distribution<int> count(1, max_pieces), coeff(-4, 4), deg(0, max_degree), cut(1, 15);
  std::vector<Rational> cuts{0, 1};
  const int pieces = count(rng);
  for (int i = 1; i < pieces; ++i) cuts.push_back(Rational(cut(rng), 16));
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<Piece> out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    Polynomial p;
    const int d = deg(rng);
    if (coeff(rng) % 3 != 0) {
      for (int k = 0; k <= d; ++k) p.push_back(Rational(coeff(rng)));
    }
    out.push_back({cuts[i], cuts[i + 1], p});
  }
  return PiecewisePoly(std::move(out));
}

}  // namespace

TEST_CASE("pp_support") {
  CHECK(pp_support(phi2()) == region({{0, half}}));
  CHECK(pp_support(PiecewisePoly::constant(1)) == IntervalRegion::whole());
  CHECK(pp_support(PiecewisePoly()).empty());
}

TEST_CASE("pp_disjoint") {
  CHECK(pp_disjoint(phi2(), PiecewisePoly::indicator(half, 1)));
  CHECK_FALSE(pp_disjoint(phi2(), PiecewisePoly::constant(1)));
  CHECK(pp_disjoint(PiecewisePoly(), PiecewisePoly::constant(1)));
}

TEST_CASE("pp_band_contains") {
  CHECK(pp_band_contains(PiecewisePoly::indicator(0, half), phi2()));
  CHECK_FALSE(pp_band_contains(phi2(), PiecewisePoly::constant(1)));
  CHECK(pp_band_contains(PiecewisePoly(), PiecewisePoly()));
}

TEST_CASE("integrate") {
  CHECK(integrate(PiecewisePoly::indicator(0, half), identity_t()) == Rational(1, 8));
  // int_0^{1/2} (t^2 - t/4) dt = 1/24 - 1/32.
  const PiecewisePoly shifted({{0, 1, {Rational(-1, 4), 1}}});
  CHECK(integrate(phi2(), shifted) == Rational(1, 24) - Rational(1, 32));
  CHECK(integrate(phi2(), shifted) == Rational(1, 96));
  CHECK(integrate(PiecewisePoly::constant(1), PiecewisePoly()) == 0);
}

TEST_CASE("integrate agrees with Simpson on random low-degree data") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const PiecewisePoly w = random_pp(rng, 5, 1);
    const PiecewisePoly f = random_pp(rng, 5, 2);
    REQUIRE(integrate(w, f) == simpson(w, f));
  }
}

TEST_CASE("integrate is bilinear and vanishes on disjoint supports") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const PiecewisePoly a = random_pp(rng, 6, 3);
    const PiecewisePoly b = random_pp(rng, 6, 3);
    const PiecewisePoly f = random_pp(rng, 6, 3);
    const Rational s(trial - 50, 7);
    CHECK(integrate(a * s + b, f) == s * integrate(a, f) + integrate(b, f));
    if (pp_disjoint(a, f)) CHECK(integrate(a, f) == 0);
  }
}

TEST_CASE("canonicalization") {
  const PiecewisePoly split({{0, Rational(1, 4), {1, 2, 0}}, {Rational(1, 4), 1, {1, 2}}});
  CHECK(split.pieces().size() == 1);
  CHECK(split.pieces()[0].coeffs == Polynomial{1, 2});
  CHECK(PiecewisePoly(split.pieces()) == split);
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const PiecewisePoly f = random_pp(rng, 6, 3);
    CHECK(PiecewisePoly(f.pieces()) == f);
  }
}

TEST_CASE("malformed piecewise data") {
  CHECK_THROWS_AS(PiecewisePoly({{0, Rational(1, 3), {1}}, {Rational(1, 2), 1, {1}}}), IntervalError);
  CHECK_THROWS_AS(PiecewisePoly({{0, Rational(2, 3), {1}}, {Rational(1, 2), 1, {1}}}), IntervalError);
  CHECK_THROWS_AS(PiecewisePoly({{Rational(1, 4), 1, {1}}}), IntervalError);
  CHECK_THROWS_AS(PiecewisePoly({{0, 0, {1}}, {0, 1, {1}}}), IntervalError);
  CHECK_THROWS_AS(PiecewisePoly(std::vector<Piece>{}), IntervalError);
  CHECK_THROWS_AS(PiecewisePoly({{0, 1, Polynomial(18, Rational(1))}}), BudgetExceeded);
  CHECK_NOTHROW(PiecewisePoly({{0, 1, Polynomial(17, Rational(1))}}));
  std::vector<Piece> many;
  for (int i = 0; i < 65; ++i) many.push_back({Rational(i, 65), Rational(i + 1, 65), {Rational(i)}});
  CHECK_THROWS_AS(PiecewisePoly{many}, BudgetExceeded);
}

TEST_CASE("interval regions") {
  const IntervalRegion r = region({{Rational(1, 2), 1}, {0, Rational(1, 4)}, {Rational(1, 4), Rational(1, 3)}});
  CHECK(r.intervals().size() == 2);
  CHECK(r.to_string() == "[0,1/3] u [1/2,1]");
  CHECK(r.complement() == region({{Rational(1, 3), half}}));
  CHECK(r.measure() == Rational(5, 6));
  CHECK(region({{half, half}}).empty());
  CHECK(IntervalRegion().to_string() == "empty");
  CHECK(region({{0, half}}).intersect(region({{half, 1}})).empty());
}

TEST_CASE("frop_apply") {
  const FiniteRankOp t = build_example_ex1();
  const PiecewisePoly image = frop_apply(t, PiecewisePoly::indicator(0, half));
  CHECK(frop_coefficients(t, PiecewisePoly::indicator(0, half)) == make_vector({1, Rational(1, 8)}));
  CHECK(image == PiecewisePoly::constant(1) + phi2() * Rational(1, 8));
  CHECK(frop_apply(t, PiecewisePoly::restricted({3, -1, 5}, half, 1)).is_zero());
  CHECK(frop_apply(FiniteRankOp(), identity_t()).is_zero());
}

TEST_CASE("frop_apply stays inside the image supports") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<Term> terms;
    IntervalRegion images;
    for (int k = 0; k < 3; ++k) {
      terms.push_back({random_pp(rng, 4, 2), random_pp(rng, 4, 2)});
      images = images.unite(pp_support(terms.back().image));
    }
    const FiniteRankOp t(terms);
    CHECK(pp_support(frop_apply(t, random_pp(rng, 5, 3))).subset_of(images));
  }
}

TEST_CASE("frop_range_supports") {
  CHECK(frop_range_supports(build_example_ex1()) ==
        std::vector<IntervalRegion>{IntervalRegion(), region({{0, half}}), IntervalRegion::whole()});
  CHECK(frop_range_supports(build_example_ex3()) ==
        std::vector<IntervalRegion>{IntervalRegion(), IntervalRegion::whole()});
  CHECK(frop_range_supports(FiniteRankOp()) == std::vector<IntervalRegion>{IntervalRegion()});
}

TEST_CASE("ex1 range supports are not closed under relative complement") {
  const auto sigma = frop_range_supports(build_example_ex1());
  const IntervalRegion tail = IntervalRegion::whole().intersect(region({{0, half}}).complement());
  CHECK(tail == region({{half, 1}}));
  CHECK(std::find(sigma.begin(), sigma.end(), tail) == sigma.end());
  CHECK_FALSE(frop_realize_support(build_example_ex1(), tail).has_value());
}

TEST_CASE("frop_image_subspace") {
  const FiniteRankOp t = build_example_ex1();
  CHECK(frop_image_subspace(t, region({{half, 1}})).cols() == 0);
  CHECK(frop_image_subspace(t, region({{0, Rational(1, 4)}})).cols() == 2);
  CHECK(frop_image_subspace(t, IntervalRegion()).cols() == 0);
  CHECK(frop_image_subspace(build_example_ex3(), IntervalRegion()).cols() == 0);
}

TEST_CASE("frop_preimage hits the requested coefficients") {
  const FiniteRankOp t = build_example_ex1();
  const Vector c = make_vector({3, -2});
  const IntervalRegion r = region({{0, Rational(1, 4)}});
  const PiecewisePoly f = frop_preimage(t, r, c);
  CHECK(frop_coefficients(t, f) == c);
  CHECK(pp_support(f).subset_of(r));
}

TEST_CASE("frop_is_sbp") {
  CHECK(frop_is_sbp(build_example_ex1()).holds);
  CHECK(frop_is_sbp(build_example_ex3()).holds);
  const FiniteRankOp t({{PiecewisePoly::indicator(half, 1), PiecewisePoly::indicator(0, half)}});
  const IntervalVerdict v = frop_is_sbp(t);
  REQUIRE_FALSE(v.holds);
  CHECK(v.witness->f == PiecewisePoly::indicator(half, 1));
  CHECK_FALSE(frop_apply(t, v.witness->g).is_zero());
  CHECK(replays(t, *v.witness));
}

TEST_CASE("frop_is_scp") {
  const FiniteRankOp t = build_example_ex1();
  const IntervalVerdict v = frop_is_scp(t);
  REQUIRE_FALSE(v.holds);
  const IntervalWitness& w = *v.witness;
  CHECK(w.kind == WitnessKind::ScpViolation);
  CHECK(w.f == PiecewisePoly::restricted({Rational(-1, 4), 1}, 0, half));
  CHECK(w.g == PiecewisePoly::indicator(0, half));
  CHECK(frop_coefficients(t, w.f) == make_vector({0, Rational(1, 96)}));
  CHECK(pp_support(frop_apply(t, w.f)) == region({{0, half}}));
  CHECK(pp_support(frop_apply(t, w.g)) == IntervalRegion::whole());
  CHECK(replays(t, w));
  CHECK(frop_is_scp(build_example_ex3()).holds);
  CHECK(frop_is_scp(FiniteRankOp()).holds);
}

TEST_CASE("ex3 is a projection onto span{1, t}") {
  const FiniteRankOp t = build_example_ex3();
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      CHECK(integrate(t.terms()[i].kernel, t.terms()[j].image) == Rational(i == j ? 1 : 0));
    }
  }
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const PiecewisePoly tf = frop_apply(t, random_pp(rng, 4, 3));
    CHECK(frop_apply(t, tf) == tf);
    if (!tf.is_zero()) CHECK(pp_support(tf) == IntervalRegion::whole());
  }
}
