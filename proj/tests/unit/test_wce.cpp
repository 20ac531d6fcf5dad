#include <doctest.h>

#include <algorithm>

#include "sbp/generators.hpp"
#include "sbp/operator_norm.hpp"
#include "sbp/wce.hpp"

using namespace sbp;

namespace {

const SupportSet kA = SupportSet::from_atoms({1, 2});
const SupportSet kB = SupportSet::from_atoms({3});

WceForm averaging_form() {
  return make_wce(3, {kA, kB}, {make_vector({1, 1, 0}), make_vector({0, 0, 1})},
                  {make_vector({Rational(1, 2), Rational(1, 2), 0}), make_vector({0, 0, 1})});
}

}  // namespace

TEST_CASE("make_averaging") {
  CHECK(make_averaging(3, {kA, kB}).matrix() ==
        make_matrix({{Rational(1, 2), Rational(1, 2), 0}, {Rational(1, 2), Rational(1, 2), 0}, {0, 0, 1}}));
  CHECK(make_averaging(2, {SupportSet::from_atoms({1}), SupportSet::from_atoms({2})}) == Operator::identity(2));
  CHECK(make_averaging(3, {kA}).matrix() ==
        make_matrix({{Rational(1, 2), Rational(1, 2), 0}, {Rational(1, 2), Rational(1, 2), 0}, {0, 0, 0}}));
  CHECK_THROWS_AS(make_averaging(3, {kA, SupportSet::from_atoms({2, 3})}), WceError);
}

TEST_CASE("make_wce") {
  CHECK(averaging_form().to_operator() == make_averaging(3, {kA, kB}));
  CHECK_THROWS_WITH_AS(make_wce(3, {kA}, {make_vector({1, 1, 0})}, {make_vector({Rational(1, 2), 0, Rational(1, 2)})}),
                       "functional support escapes block", WceError);
  CHECK_THROWS_AS(make_wce(3, {kA}, {make_vector({1, 0, 1})}, {make_vector({1, 0, 0})}), WceError);
  CHECK_THROWS_AS(make_wce(3, {kA}, {make_vector({0, 0, 0})}, {make_vector({1, 0, 0})}), WceError);
  CHECK_THROWS_AS(make_wce(3, {kA, SupportSet::from_atoms({2})}, {make_vector({1, 0, 0}), make_vector({0, 1, 0})},
                           {make_vector({1, 0, 0}), make_vector({0, 1, 0})}),
                  WceError);
  CHECK(make_wce(3, {}, {}, {}).matrix() == Matrix::Zero(3, 3));
  // u is rescaled to a leading 1 and psi absorbs the factor.
  const WceForm scaled = make_wce(2, {SupportSet::from_atoms({1, 2})}, {make_vector({2, 4})}, {make_vector({1, 0})});
  CHECK(scaled.u[0] == make_vector({1, 2}));
  CHECK(scaled.psi[0] == make_vector({2, 0}));
}

TEST_CASE("decompose_wce examples") {
  const Decomposition m = decompose_wce(make_averaging(3, {kA, kB}));
  REQUIRE(std::holds_alternative<WceForm>(m));
  CHECK(std::get<WceForm>(m) == averaging_form());

  const Operator q(make_matrix({{1, Rational(1, 2)}, {0, 0}}));
  const Decomposition dq = decompose_wce(q);
  REQUIRE(std::holds_alternative<Witness>(dq));
  CHECK(std::get<Witness>(dq).f == unit_vector(2, 1));
  CHECK(std::get<Witness>(dq).g == unit_vector(2, 0));
  CHECK(replays(q, std::get<Witness>(dq)));

  const Decomposition zero = decompose_wce(Operator::zero(3));
  REQUIRE(std::holds_alternative<WceForm>(zero));
  CHECK(std::get<WceForm>(zero).size() == 0);
}

TEST_CASE("round trip on generated forms") {
  for (std::uint64_t seed = 1; seed <= 80; ++seed) {
    const WceForm form = gen_random_wce(seed, static_cast<Eigen::Index>(2 + seed % 9));
    const Operator t = form.to_operator();
    CHECK(is_sbp(t).holds);
    CHECK(is_scp(t).holds);
    const Decomposition d = decompose_wce(t);
    REQUIRE(std::holds_alternative<WceForm>(d));
    CHECK(std::get<WceForm>(d) == form);
    CHECK(is_projection(t) == wce_is_projection_form(form));
  }
}

TEST_CASE("projection criterion in both directions") {
  Rng rng(21);
  int projections = 0;
  for (int trial = 0; trial < 60; ++trial) {
    WceForm form = random_wce(rng, rng.uniform(1, 6));
    // Rescale psi_j so <psi_j, u_j> = 1 on every other form.
    if (trial % 2 == 0) {
      for (std::size_t j = 0; j < form.size(); ++j) {
        const Rational pairing = form.psi[j].dot(form.u[j]);
        if (!is_zero(pairing)) form.psi[j] /= pairing;
      }
    }
    projections += wce_is_projection_form(form);
    CHECK(is_projection(form.to_operator()) == wce_is_projection_form(form));
  }
  CHECK(projections > 10);
}

TEST_CASE("negatives fail exactly when SBP fails") {
  Rng rng(22);
  int negatives = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const WceForm form = random_wce(rng, rng.uniform(2, 7));
    if (form.size() < 2) continue;
    const Operator t = perturb_off_block(rng, form);
    const Verdict sbp = is_sbp(t);
    const Decomposition d = decompose_wce(t);
    CHECK(std::holds_alternative<Witness>(d) == !sbp.holds);
    if (std::holds_alternative<Witness>(d)) {
      ++negatives;
      CHECK(replays(t, std::get<Witness>(d)));
    }
  }
  CHECK(negatives > 0);
}

TEST_CASE("generators are deterministic") {
  CHECK(gen_random_wce(42, 6) == gen_random_wce(42, 6));
  const WceForm one = gen_random_wce(7, 1);
  REQUIRE(one.size() == 1);
  CHECK(one.blocks[0] == SupportSet::from_atoms({1}));
  CHECK(is_sbp(gen_random_wce(42, 6).to_operator()).holds);
  CHECK(gen_random_operator(3, 5, 0.0) == Operator::zero(5));
  const Operator dense = gen_random_operator(3, 5, 1.0);
  CHECK(std::none_of(dense.matrix().data(), dense.matrix().data() + 25, [](const Rational& x) { return is_zero(x); }));
  CHECK(gen_random_operator(9, 6, 0.4) == gen_random_operator(9, 6, 0.4));
}

TEST_CASE("wce_operator_norm") {
  CHECK(wce_operator_norm(AtomicSpace::unweighted("2", 3), averaging_form()) == NormValue::exact_square(1));
  CHECK(wce_operator_norm(AtomicSpace::unweighted("1", 3), averaging_form()) == NormValue::exact(1));
  WceForm doubled = averaging_form();
  doubled.psi[0] *= 2;
  CHECK(wce_operator_norm(AtomicSpace::unweighted("1", 3), doubled) == NormValue::exact(2));
  Rng rng(23);
  for (int trial = 0; trial < 60; ++trial) {
    const WceForm form = random_wce(rng, rng.uniform(1, 5));
    for (const char* p : {"1", "2", "inf"}) {
      const AtomicSpace space = AtomicSpace::unweighted(p, form.n);
      CHECK(wce_operator_norm(space, form) == operator_norm(space, form.to_operator()));
    }
  }
}

TEST_CASE("averaging operators are norm one projections") {
  Rng rng(24);
  for (int trial = 0; trial < 40; ++trial) {
    const Eigen::Index n = rng.uniform(1, 10);
    const Operator m = make_averaging(n, random_partition(rng, n));
    CHECK(is_projection(m));
    CHECK(is_sbp(m).holds);
    CHECK(operator_norm(AtomicSpace::unweighted("1", n), m).equals(1));
    CHECK(operator_norm(AtomicSpace::unweighted("2", n), m) == NormValue::exact_square(1));
    CHECK(operator_norm(AtomicSpace::unweighted("inf", n), m).equals(1));
  }
}

TEST_CASE("probe at p = 1 finds the rank-one projection Q") {
  ProbeOptions options;
  options.exponent = "1";
  options.min_dim = 2;
  options.max_dim = 2;
  options.budget = 400;
  const ProbeReport report = probe_charscp(options);
  const Operator q(make_matrix({{1, Rational(1, 2)}, {0, 0}}));
  const auto hit = std::find_if(report.findings.begin(), report.findings.end(),
                                [&](const ProbeFinding& f) { return f.op == q; });
  REQUIRE(hit != report.findings.end());
  CHECK(hit->family == "rank-one-grid");
  for (const ProbeFinding& f : report.findings) CHECK(reverify(f));
  REQUIRE(hit->checks.size() == 5);
  for (std::size_t k = 0; k < 4; ++k) CHECK(hit->checks[k].holds);
  CHECK(hit->checks[4].name == "wce_decomposable");
  CHECK_FALSE(hit->checks[4].holds);

  ProbeFinding tampered = *hit;
  tampered.checks[4].holds = true;
  CHECK_FALSE(reverify(tampered));
}

TEST_CASE("probe at p = 2 has no rank-one findings") {
  ProbeOptions options;
  options.exponent = "2";
  options.min_dim = 2;
  options.max_dim = 3;
  options.budget = 600;
  const ProbeReport report = probe_charscp(options);
  CHECK(report.examined > 0);
  for (const ProbeFinding& f : report.findings) {
    CHECK(f.family != "rank-one-grid");
    CHECK(reverify(f));
  }
}

TEST_CASE("probe guards and determinism") {
  ProbeOptions options;
  options.exponent = "inf";
  CHECK_THROWS_WITH_AS(probe_charscp(options), "space not strictly monotone; probe requires strict monotonicity",
                       ProbeHypothesisError);
  options.exponent = "1";
  options.max_dim = 7;
  CHECK_THROWS_AS(probe_charscp(options), BudgetExceeded);
  options.max_dim = 3;
  options.budget = 300;
  const ProbeReport a = probe_charscp(options);
  options.threads = 4;
  const ProbeReport b = probe_charscp(options);
  CHECK(a.findings == b.findings);
  CHECK(a.examined == b.examined);
}
