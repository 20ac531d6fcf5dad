#include <doctest.h>

#include "sbp/generators.hpp"
#include "sbp/operator_norm.hpp"
#include "sbp/oracle.hpp"
#include "sbp/wce.hpp"

using namespace sbp;

namespace {

Operator averaging_m() { return make_averaging(3, {SupportSet::from_atoms({1, 2}), SupportSet::from_atoms({3})}); }
Operator q_op() { return Operator(make_matrix({{1, Rational(1, 2)}, {0, 0}})); }

std::vector<SupportSet> sets(std::initializer_list<std::initializer_list<int>> lists) {
  std::vector<SupportSet> out;
  for (auto l : lists) out.push_back(SupportSet::from_atoms(l));
  return out;
}

}  // namespace

TEST_CASE("apply") {
  CHECK(apply(averaging_m(), make_vector({1, 3, 5})) == make_vector({2, 2, 5}));
  CHECK(apply(averaging_m(), Vector::Zero(3).eval()) == Vector::Zero(3).eval());
  CHECK(apply(Operator::identity(2), make_vector({7, -1})) == make_vector({7, -1}));
  CHECK_THROWS_AS(apply(averaging_m(), make_vector({1, 2})), DimensionError);
}

TEST_CASE("is_projection") {
  CHECK(is_projection(averaging_m()));
  CHECK(is_projection(q_op()));
  CHECK_FALSE(is_projection(Operator(Matrix::Identity(2, 2) * Rational(2))));
}

TEST_CASE("enumerate_sigma examples") {
  const SigmaTable m = enumerate_sigma(averaging_m());
  CHECK(m.supports == sets({{}, {1, 2}, {3}, {1, 2, 3}}));
  CHECK(m.s_t == SupportSet::from_atoms({1, 2, 3}));
  CHECK(enumerate_sigma(Operator::zero(3)).supports == sets({{}}));
  CHECK(enumerate_sigma(Operator::zero(3)).s_t.empty());
  CHECK(enumerate_sigma(Operator::identity(2)).supports == sets({{}, {1}, {2}, {1, 2}}));
}

TEST_CASE("enumerate_sigma against the subset-feasibility oracle") {
  Rng rng(11);
  for (int trial = 0; trial < 150; ++trial) {
    const Eigen::Index n = rng.uniform(1, 7);
    const Operator t = random_operator(rng, n, trial % 3 == 0 ? 0.25 : 0.45);
    CHECK(enumerate_sigma(t).supports == oracle::sigma(t));
    CHECK(enumerate_sigma(t, 3).supports == enumerate_sigma(t).supports);
  }
  // A range whose zero-set blocks have rank two: {1,2,3} supports
  // only vectors vanishing nowhere or at a single chosen atom.
  const Operator t(make_matrix({{1, 0, 0}, {0, 1, 0}, {1, 1, 0}}));
  CHECK(enumerate_sigma(t).supports == oracle::sigma(t));
}

TEST_CASE("realize_support") {
  const Operator m = averaging_m();
  CHECK(realize_support(m, SupportSet::from_atoms({1, 2, 3})) == make_vector({1, 0, 1}));
  CHECK(realize_support(m, SupportSet::from_atoms({3})) == make_vector({0, 0, 1}));
  CHECK_THROWS_WITH_AS(realize_support(m, SupportSet::from_atoms({1})), "support not achievable: {1}",
                       UnachievableSupport);
  Rng rng(12);
  for (int trial = 0; trial < 60; ++trial) {
    const Operator t = random_operator(rng, rng.uniform(1, 6), 0.4);
    for (SupportSet s : enumerate_sigma(t).supports) CHECK(support(apply(t, realize_support(t, s))) == s);
  }
}

TEST_CASE("minimal_supports") {
  CHECK(minimal_supports(enumerate_sigma(averaging_m())) == sets({{1, 2}, {3}}));
  CHECK(minimal_supports(enumerate_sigma(Operator::zero(2))).empty());
  CHECK(minimal_supports(enumerate_sigma(Operator::identity(2))) == sets({{1}, {2}}));
}

TEST_CASE("band and disjointness preservation") {
  const Operator diag(make_matrix({{2, 0, 0}, {0, -1, 0}, {0, 0, 0}}));
  CHECK(is_band_preserving(diag).holds);
  CHECK(is_band_preserving(Operator::zero(2)).holds);
  const Verdict bp = is_band_preserving(averaging_m());
  REQUIRE_FALSE(bp.holds);
  CHECK(bp.witness->f == unit_vector(3, 0));
  CHECK(bp.witness->g == unit_vector(3, 1));
  CHECK(replays(averaging_m(), *bp.witness));

  CHECK(is_disjointness_preserving(Operator(make_matrix({{0, 1, 0}, {0, 0, 1}, {1, 0, 0}}))).holds);
  CHECK(is_disjointness_preserving(Operator(make_matrix({{1, 0}, {0, 0}}))).holds);
  const Verdict dp = is_disjointness_preserving(averaging_m());
  REQUIRE_FALSE(dp.holds);
  CHECK(dp.witness->f == unit_vector(3, 0));
  CHECK(dp.witness->g == unit_vector(3, 1));
  CHECK(replays(averaging_m(), *dp.witness));
}

TEST_CASE("is_beta") {
  CHECK(is_beta(Operator(make_matrix({{3, 0}, {0, Rational(-1, 2)}}))).holds);
  CHECK(is_beta(Operator::zero(3)).holds);
  const Verdict beta = is_beta(averaging_m());
  REQUIRE_FALSE(beta.holds);
  CHECK(beta.witness->f == unit_vector(3, 0));
  CHECK(beta.witness->g == make_vector({1, -1, 0}));
  CHECK(replays(averaging_m(), *beta.witness));
}

TEST_CASE("is_sbp and is_scp examples") {
  CHECK(is_sbp(averaging_m()).holds);
  CHECK(is_scp(averaging_m()).holds);
  const Verdict q = is_sbp(q_op());
  REQUIRE_FALSE(q.holds);
  CHECK(q.witness->f == unit_vector(2, 1));
  CHECK(q.witness->g == unit_vector(2, 0));
  CHECK(replays(q_op(), *q.witness));
  CHECK(is_scp(q_op()).holds);
  CHECK(is_sbp(Operator(make_matrix({{5, 0}, {0, 0}}))).holds);
  const Operator t(make_matrix({{1, 0}, {1, 0}}));
  CHECK(enumerate_sigma(t).supports == sets({{}, {1, 2}}));
  CHECK(is_scp(t).holds);
}

TEST_CASE("predicates agree with the symbolic oracle on small exhaustive families") {
  for (Eigen::Index n = 1; n <= 3; ++n) {
    for (const Operator& t : oracle::exhaustive_family(n, 3)) {
      const SigmaTable sigma = enumerate_sigma(t);
      const Verdict sbp = is_sbp(t, sigma), scp = is_scp(t, sigma);
      CHECK(sbp.holds == oracle::is_sbp(t));
      CHECK(scp.holds == oracle::is_scp(t));
      if (!sbp.holds) CHECK(replays(t, *sbp.witness));
      if (!scp.holds) CHECK(replays(t, *scp.witness));
    }
  }
}

TEST_CASE("sampled pairs never contradict a positive verdict") {
  Rng rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    const WceForm form = random_wce(rng, rng.uniform(2, 6));
    const Operator t = form.to_operator();
    CHECK_FALSE(oracle::sample_violation(t, WitnessKind::SbpViolation, rng, 300).has_value());
    CHECK_FALSE(oracle::sample_violation(t, WitnessKind::ScpViolation, rng, 300).has_value());
  }
}

TEST_CASE("sigma closure laws") {
  const ClosureReport m = verify_sigma_closures(averaging_m(), enumerate_sigma(averaging_m()));
  CHECK(m.union_closed);
  CHECK(m.intersection_closed);
  CHECK(m.complement_closed);
  CHECK(enumerate_sigma(q_op()).supports == sets({{}, {1}}));
  CHECK(verify_sigma_closures(q_op(), enumerate_sigma(q_op())).union_closed);
  const ClosureReport id = verify_sigma_closures(Operator::identity(3), enumerate_sigma(Operator::identity(3)));
  CHECK((id.union_closed && id.intersection_closed && id.complement_closed));

  // Range spanned by (1,1,0) and (0,1,1): {1,3} ∩ {1,2} = {1} is missing.
  const Operator t(make_matrix({{1, 0, 0}, {1, 1, 0}, {0, 1, 0}}));
  const SigmaTable sigma = enumerate_sigma(t);
  CHECK_FALSE(is_sbp(t, sigma).holds);
  const ClosureReport r = verify_sigma_closures(t, sigma);
  CHECK(r.union_closed);
  CHECK_FALSE(r.intersection_closed);

  Rng rng(14);
  for (int trial = 0; trial < 80; ++trial) {
    const Operator op = random_operator(rng, rng.uniform(1, 7), 0.35);
    const SigmaTable s = enumerate_sigma(op);
    const ClosureReport c = verify_sigma_closures(op, s);
    CHECK(c.union_closed);
    if (is_sbp(op, s).holds) {
      CHECK(c.intersection_closed);
      CHECK(c.complement_closed);
      for (int i : s.s_t.complement(static_cast<int>(op.n())).indices()) CHECK(op.column_support(i).empty());
    }
  }
}

TEST_CASE("implications between the conditions") {
  Rng rng(15);
  for (int trial = 0; trial < 200; ++trial) {
    const Operator t = random_operator(rng, rng.uniform(1, 6), trial % 2 ? 0.2 : 0.5);
    const SigmaTable sigma = enumerate_sigma(t);
    if (is_sbp(t, sigma).holds) CHECK(is_scp(t, sigma).holds);
    if (is_band_preserving(t).holds) CHECK(is_sbp(t, sigma).holds);
    for (const Verdict& v : {is_band_preserving(t), is_disjointness_preserving(t), is_beta(t), is_sbp(t, sigma),
                             is_scp(t, sigma)}) {
      if (!v.holds) CHECK(replays(t, *v.witness));
    }
  }
}

TEST_CASE("operator norm examples") {
  CHECK(operator_norm(AtomicSpace::unweighted("1", 2), q_op()) == NormValue::exact(1));
  CHECK(operator_norm(AtomicSpace::unweighted("inf", 3), averaging_m()) == NormValue::exact(1));
  CHECK(operator_norm(AtomicSpace::unweighted("2", 3), averaging_m()) == NormValue::exact_square(1));
  // ||Q||_2 = |(1, 1/2)| so the square is 5/4.
  CHECK(operator_norm(AtomicSpace::unweighted("2", 2), q_op()) == NormValue::exact_square(Rational(5, 4)));
  CHECK(operator_norm_at_most(AtomicSpace::unweighted("2", 2), q_op(), Rational(9, 8)));
  CHECK_FALSE(operator_norm_at_most(AtomicSpace::unweighted("2", 2), q_op(), Rational(11, 10)));
  CHECK(is_positive_semidefinite(make_matrix({{2, 1}, {1, 1}})));
  CHECK_FALSE(is_positive_semidefinite(make_matrix({{1, 2}, {2, 1}})));
  CHECK_FALSE(is_positive_semidefinite(make_matrix({{0, 1}, {1, 1}})));
}

TEST_CASE("operator norm p = 2 is the largest singular value") {
  // [[2,1],[1,2]] has eigenvalues 3 and 1.
  CHECK(operator_norm(AtomicSpace::unweighted("2", 2), Operator(make_matrix({{2, 1}, {1, 2}}))).equals(3));
  const NormValue v = operator_norm(AtomicSpace::unweighted("2", 2), Operator(make_matrix({{1, 1}, {0, 1}})));
  // Square of the golden ratio, (3 + sqrt 5) / 2 ≈ 2.618.
  REQUIRE(v.squared());
  CHECK(v.lower() <= Rational(2618034, 1000000));
  CHECK(v.upper() >= Rational(2618033, 1000000));
}
