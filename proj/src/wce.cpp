#include "sbp/wce.hpp"

#include <algorithm>
#include <numeric>

#include "sbp/generators.hpp"
#include "sbp/linalg.hpp"
#include "sbp/operator_norm.hpp"
#include "sbp/parallel.hpp"

namespace sbp {

namespace {

void check_block_support(const Vector& v, SupportSet block, const char* message) {
  if (!support(v).subset_of(block)) throw WceError(message);
}

/// Scales v so its first nonzero coordinate is 1; returns the factor applied.
Rational normalize_leading(Vector& v) {
  const int lead = support(v).first();
  const Rational factor = Rational(1) / v(lead);
  v *= factor;
  return factor;
}

}  // namespace

Matrix WceForm::matrix() const {
  Matrix m = Matrix::Zero(n, n);
  for (std::size_t j = 0; j < blocks.size(); ++j) m += u[j] * psi[j].transpose();
  return m;
}

WceForm make_wce(Eigen::Index n, std::vector<SupportSet> blocks, std::vector<Vector> u,
                 std::vector<Vector> psi) {
  if (n < 1 || n > SupportSet::kCapacity) throw WceError("atom count out of range");
  if (u.size() != blocks.size() || psi.size() != blocks.size()) {
    throw WceError("blocks, vectors and functionals must have equal counts");
  }
  SupportSet seen;
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    if (blocks[j].empty()) throw WceError("empty block");
    if (!blocks[j].subset_of(SupportSet::full(static_cast<int>(n)))) throw WceError("block exceeds atom range");
    if (blocks[j].intersects(seen)) throw WceError("blocks overlap");
    seen = seen | blocks[j];
    if (u[j].size() != n || psi[j].size() != n) throw DimensionError("make_wce: dimension mismatch");
    if (is_zero_matrix(u[j])) throw WceError("zero vector u_j");
    check_block_support(u[j], blocks[j], "vector support escapes block");
    check_block_support(psi[j], blocks[j], "functional support escapes block");
    psi[j] /= normalize_leading(u[j]);
  }
  std::vector<std::size_t> order(blocks.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return blocks[a].first() < blocks[b].first(); });
  WceForm form;
  form.n = n;
  for (std::size_t j : order) {
    form.blocks.push_back(blocks[j]);
    form.u.push_back(std::move(u[j]));
    form.psi.push_back(std::move(psi[j]));
  }
  return form;
}

Operator make_averaging(Eigen::Index n, const std::vector<SupportSet>& partition) {
  Matrix m = Matrix::Zero(n, n);
  SupportSet seen;
  for (SupportSet block : partition) {
    if (block.empty()) throw WceError("empty block");
    if (!block.subset_of(SupportSet::full(static_cast<int>(n)))) throw WceError("block exceeds atom range");
    if (block.intersects(seen)) throw WceError("blocks overlap");
    seen = seen | block;
    const Rational weight(1, block.size());
    for (int k : block.indices()) {
      for (int i : block.indices()) m(k, i) = weight;
    }
  }
  return Operator(std::move(m));
}

Decomposition decompose_wce(const Operator& t, unsigned threads) {
  return decompose_wce(t, enumerate_sigma(t, threads));
}

Decomposition decompose_wce(const Operator& t, const SigmaTable& sigma) {
  Verdict sbp = is_sbp(t, sigma);
  if (!sbp.holds) return *sbp.witness;

  const auto blocks = minimal_supports(sigma);
  std::vector<Vector> u;
  std::vector<Vector> psi;
  for (SupportSet block : blocks) {
    Vector uj = apply(t, realize_support(t, block));
    normalize_leading(uj);
    const int pivot = block.first();
    Vector pj = t.matrix().row(pivot).transpose() / uj(pivot);
#ifdef SBP_FAULT_INJECT
    pj = -pj;
#endif
    if (!support(pj).subset_of(block)) {
      throw std::logic_error("decompose_wce: functional support escapes block " + block.to_string());
    }
    u.push_back(std::move(uj));
    psi.push_back(std::move(pj));
  }
  WceForm form = make_wce(t.n(), blocks, std::move(u), std::move(psi));
  if (form.matrix() != t.matrix()) throw std::logic_error("decompose_wce: reassembly mismatch");
  return form;
}

NormValue wce_operator_norm(const AtomicSpace& space, const WceForm& form) {
  if (space.n() != form.n) throw DimensionError("wce_operator_norm: dimension mismatch");
  const bool squared = space.norm.kind() == ExponentKind::Two;
  NormValue best = squared ? NormValue::exact_square(0) : NormValue::exact(0);
  for (std::size_t j = 0; j < form.size(); ++j) {
    const NormValue block =
        norm_value(space, form.psi[j], NormSide::Dual) * norm_value(space, form.u[j]);
    best = NormValue::max(best, block);
  }
  return best;
}

bool wce_is_projection_form(const WceForm& form) {
  for (std::size_t j = 0; j < form.size(); ++j) {
    if (form.psi[j].dot(form.u[j]) != Rational(1)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Probe

namespace {

struct Candidate {
  std::string family;
  Operator op;
};

const std::vector<Rational>& grid_values() {
  static const std::vector<Rational> values{Rational(-1), Rational(-1, 2), Rational(0), Rational(1, 2),
                                            Rational(1)};
  return values;
}

/// All vectors in grid^n, lexicographic in grid order.
std::vector<Vector> grid_vectors(Eigen::Index n) {
  const auto& g = grid_values();
  std::vector<Vector> out;
  std::vector<std::size_t> digits(static_cast<std::size_t>(n), 0);
  while (true) {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = g[digits[static_cast<std::size_t>(i)]];
    out.push_back(std::move(v));
    Eigen::Index pos = n - 1;
    while (pos >= 0 && ++digits[static_cast<std::size_t>(pos)] == g.size()) {
      digits[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  return out;
}

void append_rank_one_grid(Eigen::Index n, std::size_t limit, std::vector<Candidate>& out) {
  const auto vectors = grid_vectors(n);
  std::size_t added = 0;
  for (const Vector& u : vectors) {
    const int lead = support(u).first();
    if (lead < 0 || u(lead) != Rational(1)) continue;
    for (const Vector& psi : vectors) {
      if (psi.dot(u) != Rational(1)) continue;
      if (added++ == limit) return;
      out.push_back({"rank-one-grid", Operator(u * psi.transpose())});
    }
  }
}

void append_random_projections(Eigen::Index n, std::size_t count, bool orthogonal_too, Rng& rng,
                               std::vector<Candidate>& out) {
  for (std::size_t made = 0; made < count;) {
    const auto k = static_cast<Eigen::Index>(rng.uniform(1, std::max<std::int64_t>(1, n - 1)));
    Matrix u(n, k);
    Matrix psi(n, k);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < k; ++j) {
        u(i, j) = rng.chance(1, 2) ? Rational(0) : Rational(rng.uniform(-2, 2));
        psi(i, j) = rng.chance(1, 2) ? Rational(0) : Rational(rng.uniform(-2, 2));
      }
    }
    const bool orthogonal = orthogonal_too && made % 2 == 1;
    if (orthogonal) psi = u;
    const Matrix pairing = (psi.transpose() * u).eval();
    if (rank(pairing) != k) continue;
    const Matrix pairing_inverse = *inverse(pairing);
    out.push_back({orthogonal ? "orthogonal-projection" : "random-projection",
                   Operator((u * pairing_inverse * psi.transpose()).eval())});
    ++made;
  }
}

struct Evaluation {
  bool finding = false;
  bool indeterminate = false;
  std::vector<FactCheck> checks;
};

std::string describe(const Witness& w) {
  return to_string(w.kind) + " f=" + to_string(w.f) + " g=" + to_string(w.g);
}

/// Evaluates the five facts in order, stopping at the first hypothesis that
/// fails (such candidates are never findings).
Evaluation evaluate(const NormSpec& norm, const Operator& p) {
  Evaluation out;
  const AtomicSpace space(norm);

  const bool projection = is_projection(p) && !is_zero_matrix(p.matrix());
  out.checks.push_back({"projection", projection, projection ? "P*P == P, P != 0" : "P*P != P or P == 0"});
  if (!projection) return out;

  bool norm_one = false;
  try {
    norm_one = operator_norm_at_most(space, p, Rational(1));
  } catch (const IndeterminateComparison&) {
    out.indeterminate = true;
    return out;
  }
  out.checks.push_back({"norm_one", norm_one,
                        norm_one ? "||P|| <= 1 certified exactly; ||P|| >= 1 for a nonzero projection"
                                 : "||P|| > 1 certified exactly"});
  if (!norm_one) return out;

  const SigmaTable sigma = enumerate_sigma(p);
  const Verdict scp = is_scp(p, sigma);
  std::string family = "Sigma = {";
  for (std::size_t k = 0; k < sigma.supports.size(); ++k) {
    family += (k ? "," : "") + sigma.supports[k].to_string();
  }
  family += "}";
  out.checks.push_back({"semi_containment_preserving", scp.holds, scp.holds ? family : describe(*scp.witness)});
  if (!scp.holds) return out;

  const auto mono = is_strictly_monotone(space);
  out.checks.push_back({"strictly_monotone", mono.strictly_monotone,
                        mono.strictly_monotone ? "p = " + norm.exponent_string() + " < inf"
                                               : "p = inf admits ||x + y|| = ||x||"});
  if (!mono.strictly_monotone) return out;

  const Decomposition decomposition = decompose_wce(p, sigma);
  bool decomposable = false;
  std::string evidence;
  if (const auto* form = std::get_if<WceForm>(&decomposition)) {
    decomposable = true;
    for (std::size_t j = 0; j < form->size(); ++j) {
      if (!support(form->psi[j]).subset_of(support(form->u[j]))) {
        decomposable = false;
        evidence = "supp psi_" + std::to_string(j + 1) + " = " + support(form->psi[j]).to_string() +
                   " not inside supp u_" + std::to_string(j + 1) + " = " + support(form->u[j]).to_string();
        break;
      }
    }
    if (decomposable) evidence = std::to_string(form->size()) + " blocks with supp psi_j inside supp u_j";
  } else {
    evidence = "not semi band preserving: " + describe(std::get<Witness>(decomposition));
  }
  out.checks.push_back({"wce_decomposable", decomposable, evidence});
  out.finding = !decomposable;
  return out;
}

}  // namespace

ProbeReport probe_charscp(const ProbeOptions& options) {
  if (options.exponent == "inf") {
    throw ProbeHypothesisError("space not strictly monotone; probe requires strict monotonicity");
  }
  if (options.min_dim < 1 || options.max_dim < options.min_dim) {
    throw std::invalid_argument("probe: invalid dimension range");
  }
  if (options.max_dim > 6) throw BudgetExceeded("probe dimensions are limited to 6");
  const NormSpec probe_norm = NormSpec::unweighted(options.exponent, 1);
  const bool p2 = probe_norm.kind() == ExponentKind::Two;

  const auto dims = static_cast<std::size_t>(options.max_dim - options.min_dim + 1);
  const std::size_t per_dim = std::max<std::size_t>(1, options.budget / dims);
  std::vector<Candidate> candidates;
  std::vector<Eigen::Index> dim_of;
  Rng rng(options.seed);
  for (Eigen::Index n = options.min_dim; n <= options.max_dim; ++n) {
    const std::size_t before = candidates.size();
    append_rank_one_grid(n, per_dim, candidates);
    const std::size_t used = candidates.size() - before;
    if (used < per_dim) append_random_projections(n, per_dim - used, p2, rng, candidates);
    dim_of.resize(candidates.size(), n);
  }

  std::vector<Evaluation> results(candidates.size());
  parallel_for(candidates.size(), options.threads, [&](std::size_t k) {
    results[k] = evaluate(NormSpec::unweighted(options.exponent, dim_of[k]), candidates[k].op);
  });

  ProbeReport report;
  report.options = options;
  report.examined = candidates.size();
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    if (results[k].indeterminate) ++report.indeterminate;
    if (!results[k].finding) continue;
    report.findings.push_back({candidates[k].family, NormSpec::unweighted(options.exponent, dim_of[k]),
                               candidates[k].op, std::move(results[k].checks)});
  }
  return report;
}

bool reverify(const ProbeFinding& finding) {
  const Evaluation fresh = evaluate(finding.norm, finding.op);
  return fresh.finding && fresh.checks == finding.checks;
}

}  // namespace sbp
