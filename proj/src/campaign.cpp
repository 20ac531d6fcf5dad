#include "sbp/campaign.hpp"

#include <algorithm>
#include <array>
#include <exception>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <variant>

#include "sbp/generators.hpp"
#include "sbp/io.hpp"
#include "sbp/operator_norm.hpp"
#include "sbp/oracle.hpp"
#include "sbp/parallel.hpp"
#include "sbp/report.hpp"

namespace sbp {

std::uint64_t instance_seed(std::uint64_t seed, int criterion, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(criterion) * 1'000'003ULL + index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

struct Outcome {
  std::string failure;  // empty on success
  std::array<std::size_t, 4> counts{};
};

struct Summary {
  std::size_t instances = 0;
  std::size_t failures = 0;
  std::string first_failure;
  std::array<std::size_t, 4> totals{};
};

Summary summarize(const std::vector<Outcome>& outcomes) {
  Summary s;
  s.instances = outcomes.size();
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const Outcome& o = outcomes[i];
    for (std::size_t k = 0; k < o.counts.size(); ++k) s.totals[k] += o.counts[k];
    if (o.failure.empty()) continue;
    if (s.failures++ == 0) s.first_failure = "instance " + std::to_string(i) + ": " + o.failure;
  }
  return s;
}

/// Runs fn(i) for every instance; an exception is that instance's failure.
Summary run_instances(std::size_t count, unsigned threads, const std::function<Outcome(std::size_t)>& fn) {
  std::vector<Outcome> outcomes(count);
  parallel_for(count, threads, [&](std::size_t i) {
    try {
      outcomes[i] = fn(i);
    } catch (const std::exception& e) {
      outcomes[i].failure = std::string("exception: ") + e.what();
    }
  });
  return summarize(outcomes);
}

CriterionResult result(int id, std::size_t failures, std::string detail, const std::string& first_failure) {
  if (failures > 0) detail += "; first failure: " + first_failure;
  return CriterionResult{id, criterion_names()[static_cast<std::size_t>(id - 1)], failures == 0, std::move(detail)};
}

std::string matrix_text(const Matrix& m) { return io::to_json(m).dump(); }

Eigen::Index to_index(std::size_t i) { return static_cast<Eigen::Index>(i); }

/// Four kinds of operator, rotated by `variant`: sparse, dense, low rank and
/// weighted conditional expectation (so every predicate sees both verdicts).
Operator sample_operator(Rng& rng, Eigen::Index n, std::size_t variant) {
  switch (variant % 4) {
    case 0:
      return random_operator(rng, n, 0.25);
    case 1:
      return random_operator(rng, n, 0.6);
    case 2: {
      const auto r = rng.uniform(1, std::max<std::int64_t>(1, n - 1));
      Matrix a = random_operator(rng, n, 0.6).matrix();
      a.rightCols(n - r).setZero();
      return Operator(a * random_operator(rng, n, 0.6).matrix());
    }
    default:
      return random_wce(rng, n).to_operator();
  }
}

std::string check_witness(const Operator& t, const Verdict& v, WitnessKind kind, const char* name) {
  if (v.holds) return {};
  if (!v.witness) return std::string(name) + " false without a witness";
  if (v.witness->kind != kind || !replays(t, *v.witness)) return std::string(name) + " witness does not replay";
  return {};
}

// 1 -------------------------------------------------------------------------

WceForm round_trip_form(std::uint64_t seed, std::size_t i) {
  return gen_random_wce(instance_seed(seed, 1, i), to_index(2 + i % 11));
}

CriterionResult wce_round_trip(std::uint64_t seed, unsigned threads) {
  constexpr std::size_t kForms = 200;
  const Summary s = run_instances(kForms, threads, [&](std::size_t i) {
    Outcome o;
    const WceForm form = round_trip_form(seed, i);
    const Operator t = form.to_operator();
    o.counts[0] = form.size();
    if (!is_sbp(t).holds) {
      o.failure = "is_sbp false on " + matrix_text(t.matrix());
    } else if (!is_scp(t).holds) {
      o.failure = "is_scp false on " + matrix_text(t.matrix());
    } else {
      const Decomposition d = decompose_wce(t);
      if (!std::holds_alternative<WceForm>(d)) {
        o.failure = "decompose_wce returned a witness on " + matrix_text(t.matrix());
      } else if (std::get<WceForm>(d) != form) {
        o.failure = "decompose_wce recovered a different form on " + matrix_text(t.matrix());
      }
    }
    return o;
  });
  std::ostringstream detail;
  detail << kForms << " forms with n in [2,12] and " << s.totals[0] << " blocks, " << (kForms - s.failures)
         << " recovered exactly, " << s.failures << " failures";
  return result(1, s.failures, detail.str(), s.first_failure);
}

// 2 -------------------------------------------------------------------------

CriterionResult sbp_negative(std::uint64_t seed, unsigned threads) {
  constexpr std::size_t kMatrices = 200;
  const Summary s = run_instances(kMatrices, threads, [&](std::size_t i) {
    Outcome o;
    Rng rng(instance_seed(seed, 2, i));
    const Eigen::Index n = to_index(2 + i % 11);
    WceForm form = random_wce(rng, n);
    while (form.size() < 2) form = random_wce(rng, n);
    const Operator t = perturb_off_block(rng, form);
    const Verdict v = is_sbp(t);
    const Decomposition d = decompose_wce(t);
    if (v.holds) {
      // The perturbation happened to keep SBP (e.g. it merged two blocks).
      ++o.counts[1];
      if (!std::holds_alternative<WceForm>(d) || std::get<WceForm>(d).matrix() != t.matrix()) {
        o.failure = "SBP holds but no exact decomposition of " + matrix_text(t.matrix());
      }
      return o;
    }
    ++o.counts[0];
    if (!std::holds_alternative<Witness>(d)) {
      o.failure = "decompose_wce returned a form for a non-SBP operator " + matrix_text(t.matrix());
    } else if (const Witness& w = std::get<Witness>(d); w.kind != WitnessKind::SbpViolation || !replays(t, w)) {
      o.failure = "witness does not replay on " + matrix_text(t.matrix());
    }
    return o;
  });
  std::ostringstream detail;
  detail << kMatrices << " perturbed forms, " << s.totals[0] << " not SBP with replayed witnesses, " << s.totals[1]
         << " still SBP and decomposed, " << s.failures << " failures";
  return result(2, s.failures, detail.str(), s.first_failure);
}

// 3 -------------------------------------------------------------------------

CriterionResult sbp_implies_scp(std::uint64_t seed, unsigned threads) {
  constexpr std::size_t kRandom = 500;
  constexpr std::size_t kForms = 200;
  const Summary s = run_instances(kRandom + kForms, threads, [&](std::size_t i) {
    Outcome o;
    Operator t = Operator::zero(1);
    if (i < kRandom) {
      Rng rng(instance_seed(seed, 3, i));
      t = sample_operator(rng, to_index(1 + i % 8), i / 8);
    } else {
      t = round_trip_form(seed, i - kRandom).to_operator();
    }
    const SigmaTable sigma = enumerate_sigma(t);
    const Verdict sbp = is_sbp(t, sigma);
    const Verdict scp = is_scp(t, sigma);
    o.counts[0] = sbp.holds;
    o.counts[1] = scp.holds;
    if (sbp.holds && !scp.holds) {
      o.failure = "SBP without SCP on " + matrix_text(t.matrix());
    } else if (auto e = check_witness(t, sbp, WitnessKind::SbpViolation, "SBP"); !e.empty()) {
      o.failure = e + " on " + matrix_text(t.matrix());
    } else if (auto e2 = check_witness(t, scp, WitnessKind::ScpViolation, "SCP"); !e2.empty()) {
      o.failure = e2 + " on " + matrix_text(t.matrix());
    }
    return o;
  });
  std::ostringstream detail;
  detail << kRandom << " random operators (n <= 8) and " << kForms << " round-trip forms, " << s.totals[0]
         << " SBP, " << s.totals[1] << " SCP, " << s.failures << " failures";
  return result(3, s.failures, detail.str(), s.first_failure);
}

// 4 -------------------------------------------------------------------------

CriterionResult sigma_laws(std::uint64_t seed, unsigned threads) {
  constexpr std::size_t kOperators = 300;
  const Summary s = run_instances(kOperators, threads, [&](std::size_t i) {
    Outcome o;
    Rng rng(instance_seed(seed, 4, i));
    const Operator t = sample_operator(rng, to_index(1 + i % 8), i / 8);
    const SigmaTable sigma = enumerate_sigma(t);
    const ClosureReport closures = verify_sigma_closures(t, sigma);
    const bool sbp = is_sbp(t, sigma).holds;
    o.counts[0] = sigma.supports.size();
    o.counts[1] = sbp;
    SupportSet all;
    for (SupportSet x : sigma.supports) all = all | x;
    if (all != sigma.s_t) {
      o.failure = "S_T is not the union of Sigma_T on " + matrix_text(t.matrix());
    } else if (!closures.union_closed) {
      o.failure = "Sigma_T not closed under union on " + matrix_text(t.matrix());
    } else if (sbp && !closures.intersection_closed) {
      o.failure = "SBP but Sigma_T not closed under intersection on " + matrix_text(t.matrix());
    } else if (sbp && !closures.complement_closed) {
      o.failure = "SBP but Sigma_T not closed under relative complement on " + matrix_text(t.matrix());
    } else if (sbp) {
      for (int a : sigma.s_t.complement(static_cast<int>(t.n())).indices()) {
        if (!t.column_support(a).empty()) {
          o.failure = "SBP but atom " + std::to_string(a + 1) + " outside S_T is not mapped to 0 on " +
                      matrix_text(t.matrix());
          break;
        }
      }
    }
    if (closures.witness) {
      // f and g realize two members of Sigma_T whose combination is missing.
      const SupportSet a = support(apply(t, closures.witness->f));
      const SupportSet b = support(apply(t, closures.witness->g));
      const bool missing = !sigma.contains(a | b) || !sigma.contains(a & b) || !sigma.contains(a - b) ||
                           !sigma.contains(b - a);
      if (!sigma.contains(a) || !sigma.contains(b) || !missing) {
        o.failure = "closure witness is not a missing combination on " + matrix_text(t.matrix());
      }
    }
    return o;
  });
  std::ostringstream detail;
  detail << kOperators << " operators (n <= 8), " << s.totals[0] << " supports enumerated, " << s.totals[1]
         << " SBP, " << s.failures << " failures";
  return result(4, s.failures, detail.str(), s.first_failure);
}

// 5 -------------------------------------------------------------------------

CriterionResult oracle_agreement(std::uint64_t seed, unsigned threads) {
  constexpr int kMaxNonzeros = 3;
  std::vector<std::pair<Eigen::Index, std::uint32_t>> patterns;
  for (Eigen::Index n = 1; n <= 4; ++n) {
    for (std::uint32_t p : oracle::family_patterns(n, kMaxNonzeros)) patterns.emplace_back(n, p);
  }
  const Summary family = run_instances(patterns.size(), threads, [&](std::size_t i) {
    Outcome o;
    const auto [n, pattern] = patterns[i];
    for (const Operator& t : oracle::family_members(n, pattern)) {
      ++o.counts[0];
      const SigmaTable sigma = enumerate_sigma(t);
      const std::vector<SupportSet> reference = oracle::sigma(t);
      const bool sbp = is_sbp(t, sigma).holds;
      const bool scp = is_scp(t, sigma).holds;
      o.counts[1] += sbp;
      o.counts[2] += scp;
      const char* what = nullptr;
      if (sigma.supports != reference) {
        what = "Sigma_T";
      } else if (sbp != oracle::is_sbp(t, reference)) {
        what = "SBP";
      } else if (scp != oracle::is_scp(t, reference)) {
        what = "SCP";
      }
      if (what != nullptr) {
        ++o.counts[3];
        if (o.failure.empty()) o.failure = std::string(what) + " disagrees with the oracle on " + matrix_text(t.matrix());
      }
    }
    return o;
  });

  constexpr std::size_t kSampled = 50;
  constexpr std::size_t kPairs = 10'000;
  const Summary sampled = run_instances(kSampled, threads, [&](std::size_t i) {
    Outcome o;
    Rng rng(instance_seed(seed, 5, i));
    const Eigen::Index n = to_index(1 + i % 12);
    const Operator t = i % 2 == 0 ? random_wce(rng, n).to_operator() : random_operator(rng, n, 0.15);
    const SigmaTable sigma = enumerate_sigma(t);
    const std::pair<WitnessKind, Verdict> verdicts[] = {{WitnessKind::SbpViolation, is_sbp(t, sigma)},
                                                        {WitnessKind::ScpViolation, is_scp(t, sigma)}};
    for (const auto& [kind, verdict] : verdicts) {
      if (!verdict.holds) continue;
      ++o.counts[0];
      o.counts[1] += kPairs;
      if (const auto w = oracle::sample_violation(t, kind, rng, kPairs); w && o.failure.empty()) {
        o.failure = "sampled " + to_string(kind) + " contradicts a true verdict on " + matrix_text(t.matrix());
      }
    }
    return o;
  });

  std::ostringstream detail;
  detail << "exhaustive family (n <= 4, entries in {-1,0,1/2,1}, <= " << kMaxNonzeros << " nonzeros per column): "
         << family.totals[0] << " operators, " << family.totals[1] << " SBP, " << family.totals[2] << " SCP, "
         << family.totals[3] << " disagreements; sampled (n <= 12): " << kSampled << " operators, "
         << sampled.totals[0] << " true verdicts, " << sampled.totals[1] << " pairs, " << sampled.failures
         << " contradictions";
  const std::string first = family.failures > 0 ? family.first_failure : sampled.first_failure;
  return result(5, family.failures + sampled.failures, detail.str(), first);
}

// 6 -------------------------------------------------------------------------

CriterionResult worked_examples() {
  std::vector<std::string> failures;
  const auto expect = [&](bool ok, const char* what) {
    if (!ok) failures.emplace_back(what);
  };
  const Rational half(1, 2);

  const FiniteRankOp ex1 = build_example_ex1();
  const IntervalReport r1 = analyze_interval(ex1);
  expect(r1.sbp.holds, "ex1: SBP should hold");
  expect(!r1.scp.holds && r1.scp.witness.has_value(), "ex1: SCP should fail with a witness");
  if (r1.scp.witness) {
    expect(replays(ex1, *r1.scp.witness), "ex1: SCP witness does not replay");
    expect(frop_coefficients(ex1, r1.scp.witness->f) == make_vector({0, Rational(1, 96)}),
           "ex1: witness pairings are not (0, 1/96)");
  }
  const IntervalRegion tail({{half, Rational(1)}});
  expect(std::find(r1.range_supports.begin(), r1.range_supports.end(), tail) == r1.range_supports.end(),
         "ex1: [1/2,1] should not be a range support");
  expect(!frop_realize_support(ex1, tail).has_value(), "ex1: [1/2,1] should not be realizable");

  const Operator q(make_matrix({{1, half}, {0, 0}}));
  const Verdict q_sbp = is_sbp(q);
  expect(is_scp(q).holds, "Q: SCP should hold");
  expect(!q_sbp.holds && q_sbp.witness && q_sbp.witness->f == unit_vector(2, 1) &&
             q_sbp.witness->g == unit_vector(2, 0) && replays(q, *q_sbp.witness),
         "Q: SBP should fail with witness (e_2, e_1)");
  expect(is_projection(q), "Q: should be a projection");
  const NormValue q_norm = operator_norm(AtomicSpace::unweighted("1", 2), q);
  expect(q_norm.is_exact() && !q_norm.squared() && q_norm.value() == 1, "Q: l1 operator norm should be exactly 1");

  const FiniteRankOp ex3 = build_example_ex3();
  const IntervalReport r3 = analyze_interval(ex3);
  expect(r3.sbp.holds && r3.scp.holds, "ex3: SBP and SCP should hold");
  expect(r3.range_supports == std::vector<IntervalRegion>{IntervalRegion(), IntervalRegion::whole()},
         "ex3: range supports should be {empty, [0,1]}");

  std::string first = failures.empty() ? "" : failures.front();
  return result(6, failures.size(), "ex1, Q, ex3 and the missing [1/2,1] support: " +
                                        std::to_string(failures.size()) + " mismatches", first);
}

// 7 -------------------------------------------------------------------------

CriterionResult averaging(std::uint64_t seed, unsigned threads) {
  constexpr std::size_t kPartitions = 100;
  const Summary s = run_instances(kPartitions, threads, [&](std::size_t i) {
    Outcome o;
    Rng rng(instance_seed(seed, 7, i));
    const Eigen::Index n = to_index(1 + i % 10);
    const Operator t = make_averaging(n, random_partition(rng, n));
    const auto exactly_one = [&](const char* p) {
      const NormValue v = operator_norm(AtomicSpace::unweighted(p, n), t);
      return v.is_exact() && v.value() == 1;
    };
    if (!is_projection(t)) {
      o.failure = "not a projection: ";
    } else if (!is_sbp(t).holds || !is_scp(t).holds) {
      o.failure = "SBP or SCP fails: ";
    } else if (!exactly_one("1") || !exactly_one("2") || !exactly_one("inf")) {
      o.failure = "operator norm is not exactly 1: ";
    }
    if (!o.failure.empty()) o.failure += matrix_text(t.matrix());
    return o;
  });
  std::ostringstream detail;
  detail << kPartitions << " partitions (n <= 10), norms on l1, l2 (by squares), l_inf, " << s.failures
         << " failures";
  return result(7, s.failures, detail.str(), s.first_failure);
}

// 8 -------------------------------------------------------------------------

CriterionResult norm_one_probe(std::uint64_t seed, unsigned threads) {
  ProbeOptions options;
  options.min_dim = 2;
  options.max_dim = 3;
  options.seed = instance_seed(seed, 8, 0);
  options.threads = threads;
  options.exponent = "1";
  const ProbeReport p1 = probe_charscp(options);
  options.exponent = "2";
  const ProbeReport p2 = probe_charscp(options);
  std::size_t failures = 0;
  std::string first;
  for (const ProbeReport* report : {&p1, &p2}) {
    for (const ProbeFinding& f : report->findings) {
      if (!reverify(f) && failures++ == 0) first = "finding does not re-verify: " + matrix_text(f.op.matrix());
    }
  }
  const auto rank_one = std::count_if(p2.findings.begin(), p2.findings.end(),
                                      [](const ProbeFinding& f) { return f.family == "rank-one-grid"; });
  std::ostringstream detail;
  detail << "p=1: " << p1.examined << " candidates, " << p1.findings.size() << " findings; p=2: " << p2.examined
         << " candidates, " << p2.findings.size() << " findings (" << rank_one << " rank-one-grid); "
         << failures << " re-verification failures";
  return result(8, failures, detail.str(), first);
}

// 9 -------------------------------------------------------------------------

CriterionResult determinism(std::uint64_t seed, unsigned threads) {
  const unsigned many = std::max(threads, 4U);
  std::vector<std::string> failures;

  std::vector<io::OperatorInput> inputs;
  inputs.push_back({NormSpec::unweighted("1", 2), Operator(make_matrix({{1, Rational(1, 2)}, {0, 0}}))});
  for (std::size_t i = 0; i < 8; ++i) {
    Rng rng(instance_seed(seed, 9, i));
    const Eigen::Index n = to_index(3 + i);
    inputs.push_back({NormSpec::unweighted(i % 2 == 0 ? "2" : "3/2", n), sample_operator(rng, n, i)});
  }
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const std::string once = io::dump(to_json(analyze(inputs[i], 1)));
    const std::string again = io::dump(to_json(analyze(inputs[i], 1)));
    const std::string parallel = io::dump(to_json(analyze(inputs[i], many)));
    if (once != again || once != parallel) failures.push_back("analyze output differs on input " + std::to_string(i));
  }

  ProbeOptions options;
  options.budget = 300;
  options.seed = instance_seed(seed, 9, 100);
  const std::string probe_once = io::dump(io::to_json(probe_charscp(options)));
  const std::string probe_again = io::dump(io::to_json(probe_charscp(options)));
  options.threads = many;
  const std::string probe_parallel = io::dump(io::to_json(probe_charscp(options)));
  if (probe_once != probe_again || probe_once != probe_parallel) failures.emplace_back("probe output differs");

  for (int id : {1, 2, 3, 4, 7}) {
    if (run_criterion(id, seed, 1) != run_criterion(id, seed, many)) {
      failures.push_back("selftest criterion " + std::to_string(id) + " differs between 1 and " +
                         std::to_string(many) + " threads");
    }
  }
  std::ostringstream detail;
  detail << inputs.size() << " analyze inputs, 1 probe, 5 selftest criteria compared across runs and 1 vs " << many
         << " threads, " << failures.size() << " differences";
  return result(9, failures.size(), detail.str(), failures.empty() ? "" : failures.front());
}

}  // namespace

const std::vector<std::string>& criterion_names() {
  static const std::vector<std::string> names = {"wce-round-trip",  "sbp-negative",   "sbp-implies-scp",
                                                 "sigma-laws",      "oracle-agreement", "worked-examples",
                                                 "averaging",       "norm-one-probe", "determinism"};
  return names;
}

CriterionResult run_criterion(int id, std::uint64_t seed, unsigned threads) {
  try {
    switch (id) {
      case 1: return wce_round_trip(seed, threads);
      case 2: return sbp_negative(seed, threads);
      case 3: return sbp_implies_scp(seed, threads);
      case 4: return sigma_laws(seed, threads);
      case 5: return oracle_agreement(seed, threads);
      case 6: return worked_examples();
      case 7: return averaging(seed, threads);
      case 8: return norm_one_probe(seed, threads);
      case 9: return determinism(seed, threads);
      default: throw std::out_of_range("no criterion " + std::to_string(id));
    }
  } catch (const std::out_of_range&) {
    throw;
  } catch (const std::exception& e) {
    return result(id, 1, "aborted", std::string("exception: ") + e.what());
  }
}

bool CampaignReport::passed() const {
  return std::all_of(criteria.begin(), criteria.end(), [](const CriterionResult& c) { return c.passed; });
}

std::string CampaignReport::text() const {
  std::ostringstream out;
  out << "selftest seed " << seed << "\n";
  std::size_t passed_count = 0;
  for (const CriterionResult& c : criteria) {
    out << (c.passed ? "PASS " : "FAIL ") << c.id << " " << c.name << ": " << c.detail << "\n";
    passed_count += c.passed;
  }
  out << passed_count << "/" << criteria.size() << " criteria passed\n";
  return out.str();
}

CampaignReport run_campaign(std::uint64_t seed, unsigned threads) {
  CampaignReport report{seed, {}};
  for (int id = 1; id <= static_cast<int>(criterion_names().size()); ++id) {
    report.criteria.push_back(run_criterion(id, seed, threads));
  }
  return report;
}

}  // namespace sbp
