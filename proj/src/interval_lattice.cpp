#include "sbp/interval_lattice.hpp"

#include <algorithm>

#include "sbp/linalg.hpp"
#include "sbp/zero_sets.hpp"

namespace sbp {

namespace {

void trim(Polynomial& p) {
  while (!p.empty() && is_zero(p.back())) p.pop_back();
}

Polynomial add(const Polynomial& a, const Polynomial& b) {
  Polynomial out(std::max(a.size(), b.size()), Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  trim(out);
  return out;
}

Polynomial multiply(const Polynomial& a, const Polynomial& b) {
  if (a.empty() || b.empty()) return {};
  Polynomial out(a.size() + b.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (is_zero(a[i])) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  trim(out);
  return out;
}

/// int_a^b p(t) dt via the antiderivative.
Rational definite(const Polynomial& p, const Rational& a, const Rational& b) {
  Rational fa = 0;
  Rational fb = 0;
  for (std::size_t i = p.size(); i-- > 0;) {
    const Rational c = p[i] / Rational(static_cast<long>(i + 1));
    fa = (fa + c) * a;
    fb = (fb + c) * b;
  }
  return fb - fa;
}

std::string poly_string(const Polynomial& p) {
  if (p.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (is_zero(p[i])) continue;
    const bool negative = p[i].sign() < 0;
    const Rational mag = negative ? Rational(-p[i]) : p[i];
    if (out.empty()) out += negative ? "-" : "";
    else out += negative ? " - " : " + ";
    const bool unit = mag == Rational(1) && i > 0;
    if (!unit) out += to_string(mag);
    if (i > 0) out += (unit ? "" : "*") + std::string("t") + (i > 1 ? "^" + std::to_string(i) : "");
  }
  return out;
}

using Span = std::pair<Rational, Rational>;

}  // namespace

// ---------------------------------------------------------------------------
// IntervalRegion

IntervalRegion::IntervalRegion(std::vector<Span> intervals) {
  for (const auto& [a, b] : intervals) {
    if (a > b) throw IntervalError("interval endpoints out of order");
    if (a.sign() < 0 || b > Rational(1)) throw IntervalError("interval outside [0,1]");
  }
  std::sort(intervals.begin(), intervals.end());
  for (auto& span : intervals) {
    if (span.first == span.second) continue;
    if (!intervals_.empty() && span.first <= intervals_.back().second) {
      intervals_.back().second = std::max(intervals_.back().second, span.second);
    } else {
      intervals_.push_back(std::move(span));
    }
  }
}

Rational IntervalRegion::measure() const {
  Rational total = 0;
  for (const auto& [a, b] : intervals_) total += b - a;
  return total;
}

bool IntervalRegion::covers(const Rational& a, const Rational& b) const {
  if (a >= b) return true;
  return std::any_of(intervals_.begin(), intervals_.end(),
                     [&](const Span& s) { return s.first <= a && b <= s.second; });
}

IntervalRegion IntervalRegion::complement() const {
  std::vector<Span> out;
  Rational cursor = 0;
  for (const auto& [a, b] : intervals_) {
    if (cursor < a) out.emplace_back(cursor, a);
    cursor = b;
  }
  if (cursor < Rational(1)) out.emplace_back(cursor, Rational(1));
  return IntervalRegion(std::move(out));
}

IntervalRegion IntervalRegion::intersect(const IntervalRegion& other) const {
  std::vector<Span> out;
  for (const auto& [a, b] : intervals_) {
    for (const auto& [c, d] : other.intervals_) {
      const Rational lo = std::max(a, c);
      const Rational hi = std::min(b, d);
      if (lo < hi) out.emplace_back(lo, hi);
    }
  }
  return IntervalRegion(std::move(out));
}

IntervalRegion IntervalRegion::unite(const IntervalRegion& other) const {
  std::vector<Span> all = intervals_;
  all.insert(all.end(), other.intervals_.begin(), other.intervals_.end());
  return IntervalRegion(std::move(all));
}

std::string IntervalRegion::to_string() const {
  if (intervals_.empty()) return "empty";
  std::string out;
  for (const auto& [a, b] : intervals_) {
    if (!out.empty()) out += " u ";
    out += "[" + sbp::to_string(a) + "," + sbp::to_string(b) + "]";
  }
  return out;
}

bool IntervalRegion::operator<(const IntervalRegion& other) const {
  return std::lexicographical_compare(intervals_.begin(), intervals_.end(), other.intervals_.begin(),
                                      other.intervals_.end());
}

// ---------------------------------------------------------------------------
// PiecewisePoly

PiecewisePoly::PiecewisePoly() : pieces_{{Rational(0), Rational(1), {}}} {}

PiecewisePoly::PiecewisePoly(std::vector<Piece> pieces) {
  if (pieces.empty()) throw IntervalError("piecewise polynomial needs at least one piece");
  if (!sbp::is_zero(pieces.front().from)) throw IntervalError("first piece must start at 0");
  if (pieces.back().to != Rational(1)) throw IntervalError("last piece must end at 1");
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    Piece& p = pieces[i];
    if (p.from >= p.to) throw IntervalError("degenerate piece [" + sbp::to_string(p.from) + "," + sbp::to_string(p.to) + ")");
    if (i + 1 < pieces.size() && p.to != pieces[i + 1].from) {
      throw IntervalError("pieces not contiguous at " + sbp::to_string(p.to) + " (gap or overlap)");
    }
    trim(p.coeffs);
    if (p.coeffs.size() > kMaxDegree + 1) {
      throw BudgetExceeded("polynomial degree exceeds " + std::to_string(kMaxDegree));
    }
  }
  for (Piece& p : pieces) {
    if (!pieces_.empty() && pieces_.back().coeffs == p.coeffs) {
      pieces_.back().to = p.to;
    } else {
      pieces_.push_back(std::move(p));
    }
  }
  if (pieces_.size() > kMaxPieces) throw BudgetExceeded("more than " + std::to_string(kMaxPieces) + " pieces");
}

PiecewisePoly PiecewisePoly::constant(const Rational& c) {
  return PiecewisePoly({{Rational(0), Rational(1), {c}}});
}

PiecewisePoly PiecewisePoly::restricted(Polynomial p, const Rational& from, const Rational& to) {
  if (from.sign() < 0 || to > Rational(1) || from >= to) throw IntervalError("restriction outside [0,1]");
  std::vector<Piece> pieces;
  if (from.sign() > 0) pieces.push_back({Rational(0), from, {}});
  pieces.push_back({from, to, std::move(p)});
  if (to < Rational(1)) pieces.push_back({to, Rational(1), {}});
  return PiecewisePoly(std::move(pieces));
}

PiecewisePoly PiecewisePoly::indicator(const Rational& from, const Rational& to) {
  return restricted({Rational(1)}, from, to);
}

PiecewisePoly PiecewisePoly::indicator(const IntervalRegion& region) {
  std::vector<Rational> ends;
  for (const auto& [a, b] : region.intervals()) {
    ends.push_back(a);
    ends.push_back(b);
  }
  const auto cuts = common_cuts({}, ends);
  std::vector<Piece> pieces;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    pieces.push_back({cuts[i], cuts[i + 1], region.covers(cuts[i], cuts[i + 1]) ? Polynomial{Rational(1)} : Polynomial{}});
  }
  return PiecewisePoly(std::move(pieces));
}

std::vector<Rational> PiecewisePoly::breakpoints() const {
  std::vector<Rational> out;
  for (std::size_t i = 1; i < pieces_.size(); ++i) out.push_back(pieces_[i].from);
  return out;
}

const Polynomial& PiecewisePoly::on(const Rational& a, const Rational& b) const {
  auto it = std::upper_bound(pieces_.begin(), pieces_.end(), a,
                             [](const Rational& x, const Piece& p) { return x < p.from; });
  if (it == pieces_.begin()) throw IntervalError("interval outside [0,1]");
  --it;
  if (b > it->to) throw std::logic_error("PiecewisePoly::on: interval straddles a breakpoint");
  return it->coeffs;
}

bool PiecewisePoly::is_zero() const {
  return std::all_of(pieces_.begin(), pieces_.end(), [](const Piece& p) { return p.coeffs.empty(); });
}

PiecewisePoly PiecewisePoly::operator+(const PiecewisePoly& other) const {
  const auto cuts = common_cuts({this, &other});
  std::vector<Piece> pieces;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    pieces.push_back({cuts[i], cuts[i + 1], add(on(cuts[i], cuts[i + 1]), other.on(cuts[i], cuts[i + 1]))});
  }
  return PiecewisePoly(std::move(pieces));
}

PiecewisePoly PiecewisePoly::operator*(const Rational& c) const {
  std::vector<Piece> pieces = pieces_;
  for (Piece& p : pieces) {
    for (Rational& x : p.coeffs) x *= c;
  }
  return PiecewisePoly(std::move(pieces));
}

PiecewisePoly PiecewisePoly::times(const PiecewisePoly& other) const {
  const auto cuts = common_cuts({this, &other});
  std::vector<Piece> pieces;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    pieces.push_back({cuts[i], cuts[i + 1], multiply(on(cuts[i], cuts[i + 1]), other.on(cuts[i], cuts[i + 1]))});
  }
  return PiecewisePoly(std::move(pieces));
}

std::string PiecewisePoly::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const Piece& p = pieces_[i];
    if (i) out += "; ";
    out += "[" + sbp::to_string(p.from) + "," + sbp::to_string(p.to) + (i + 1 == pieces_.size() ? "]" : ")") +
           ": " + poly_string(p.coeffs);
  }
  return out;
}

std::vector<Rational> common_cuts(const std::vector<const PiecewisePoly*>& functions,
                                  const std::vector<Rational>& extra) {
  std::vector<Rational> cuts{Rational(0), Rational(1)};
  for (const PiecewisePoly* f : functions) {
    const auto b = f->breakpoints();
    cuts.insert(cuts.end(), b.begin(), b.end());
  }
  for (const Rational& x : extra) {
    if (x.sign() > 0 && x < Rational(1)) cuts.push_back(x);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return cuts;
}

IntervalRegion pp_support(const PiecewisePoly& f) {
  std::vector<Span> spans;
  for (const Piece& p : f.pieces()) {
    if (!p.coeffs.empty()) spans.emplace_back(p.from, p.to);
  }
  return IntervalRegion(std::move(spans));
}

bool pp_disjoint(const PiecewisePoly& f, const PiecewisePoly& g) {
  return pp_support(f).intersect(pp_support(g)).empty();
}

bool pp_band_contains(const PiecewisePoly& g, const PiecewisePoly& f) {
  return pp_support(f).subset_of(pp_support(g));
}

Rational integrate(const PiecewisePoly& w, const PiecewisePoly& f) {
  const auto cuts = common_cuts({&w, &f});
  Rational total = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    total += definite(multiply(w.on(cuts[i], cuts[i + 1]), f.on(cuts[i], cuts[i + 1])), cuts[i], cuts[i + 1]);
  }
  return total;
}

// ---------------------------------------------------------------------------
// Finite-rank operators

Vector frop_coefficients(const FiniteRankOp& t, const PiecewisePoly& f) {
  Vector c(t.rank_bound());
  for (Eigen::Index k = 0; k < c.size(); ++k) c(k) = integrate(t.terms()[static_cast<std::size_t>(k)].kernel, f);
  return c;
}

PiecewisePoly frop_combine(const FiniteRankOp& t, const Vector& c) {
  if (c.size() != t.rank_bound()) throw DimensionError("frop_combine: coefficient count mismatch");
  PiecewisePoly out;
  for (Eigen::Index k = 0; k < c.size(); ++k) {
    if (!is_zero(c(k))) out = out + t.terms()[static_cast<std::size_t>(k)].image * c(k);
  }
  return out;
}

PiecewisePoly frop_apply(const FiniteRankOp& t, const PiecewisePoly& f) {
  return frop_combine(t, frop_coefficients(t, f));
}

namespace {

std::vector<const PiecewisePoly*> kernels(const FiniteRankOp& t) {
  std::vector<const PiecewisePoly*> out;
  for (const Term& term : t.terms()) out.push_back(&term.kernel);
  return out;
}

std::vector<const PiecewisePoly*> images(const FiniteRankOp& t) {
  std::vector<const PiecewisePoly*> out;
  for (const Term& term : t.terms()) out.push_back(&term.image);
  return out;
}

/// Rows: polynomial coefficients of each function on (a, b), one column per
/// function, right-multiplied by `coords`.
Matrix coefficient_block(const std::vector<const PiecewisePoly*>& functions, const Rational& a,
                         const Rational& b, const Matrix& coords) {
  std::size_t degree = 0;
  for (const PiecewisePoly* f : functions) degree = std::max(degree, f->on(a, b).size());
  Matrix raw = Matrix::Zero(static_cast<Eigen::Index>(std::max<std::size_t>(degree, 1)),
                            static_cast<Eigen::Index>(functions.size()));
  for (std::size_t k = 0; k < functions.size(); ++k) {
    const Polynomial& p = functions[k]->on(a, b);
    for (std::size_t d = 0; d < p.size(); ++d) raw(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(k)) = p[d];
  }
  return (raw * coords).eval();
}

/// Range elements parametrized as frop_combine(t, coords * beta), with one
/// lattice element per refinement piece of the images.
struct RangeModel {
  std::vector<Rational> cuts;
  Matrix coords;
  ZeroSetLattice lattice;

  IntervalRegion region(SupportSet zeros) const {
    std::vector<Span> spans;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      if (!zeros.test(static_cast<int>(i))) spans.emplace_back(cuts[i], cuts[i + 1]);
    }
    return IntervalRegion(std::move(spans));
  }

  std::optional<SupportSet> zeros_of(const IntervalRegion& target) const {
    SupportSet zeros;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      if (!target.covers(cuts[i], cuts[i + 1])) zeros.set(static_cast<int>(i));
    }
    if (region(zeros) != target) return std::nullopt;
    return zeros;
  }
};

RangeModel range_model(const FiniteRankOp& t) {
  const auto funcs = images(t);
  auto cuts = common_cuts(funcs);
  if (cuts.size() - 1 > PiecewisePoly::kMaxPieces) {
    throw BudgetExceeded("range refinement exceeds " + std::to_string(PiecewisePoly::kMaxPieces) + " pieces");
  }
  Matrix coords = frop_image_subspace(t, IntervalRegion::whole());
  std::vector<Matrix> blocks;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    blocks.push_back(coefficient_block(funcs, cuts[i], cuts[i + 1], coords));
  }
  const Eigen::Index d = coords.cols();
  return {std::move(cuts), std::move(coords), ZeroSetLattice(std::move(blocks), d)};
}

/// Scales f so the top coefficient on its first nonzero piece is 1.
PiecewisePoly normalized(const PiecewisePoly& f) {
  for (const Piece& p : f.pieces()) {
    if (!p.coeffs.empty()) return f * (Rational(1) / p.coeffs.back());
  }
  return f;
}

PiecewisePoly realizer(const FiniteRankOp& t, const RangeModel& model, SupportSet zeros) {
  const auto beta = model.lattice.realize(zeros);
  if (!beta) throw UnachievableSupport("not a range support: " + model.region(zeros).to_string());
  return normalized(frop_preimage(t, IntervalRegion::whole(), model.coords * *beta));
}

}  // namespace

Matrix frop_image_subspace(const FiniteRankOp& t, const IntervalRegion& region) {
  const Eigen::Index k = t.rank_bound();
  std::vector<Rational> ends;
  for (const auto& [a, b] : region.intervals()) {
    ends.push_back(a);
    ends.push_back(b);
  }
  const auto funcs = kernels(t);
  const auto cuts = common_cuts(funcs, ends);
  const Matrix identity = Matrix::Identity(k, k);
  std::vector<Matrix> rows;
  Eigen::Index total = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (!region.covers(cuts[i], cuts[i + 1])) continue;
    rows.push_back(coefficient_block(funcs, cuts[i], cuts[i + 1], identity));
    total += rows.back().rows();
  }
  Matrix a(total, k);
  Eigen::Index r = 0;
  for (const Matrix& block : rows) {
    a.middleRows(r, block.rows()) = block;
    r += block.rows();
  }
  // {c : sum c_k w_k = 0 on the region} is the kernel of A; the achievable
  // coefficients form its orthogonal complement.
  const Matrix vanishing = nullspace(a);
  return nullspace(vanishing.transpose());
}

PiecewisePoly frop_preimage(const FiniteRankOp& t, const IntervalRegion& region, const Vector& c) {
  const Eigen::Index k = t.rank_bound();
  if (c.size() != k) throw DimensionError("frop_preimage: coefficient count mismatch");
  const PiecewisePoly mask = PiecewisePoly::indicator(region);
  std::vector<PiecewisePoly> local;
  for (const Term& term : t.terms()) local.push_back(term.kernel.times(mask));
  Matrix gram(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = i; j < k; ++j) {
      gram(i, j) = gram(j, i) = integrate(local[static_cast<std::size_t>(i)], local[static_cast<std::size_t>(j)]);
    }
  }
  const auto beta = solve(gram, c);
  if (!beta) throw UnachievableSupport("coefficients not achievable on " + region.to_string());
  PiecewisePoly f;
  for (Eigen::Index i = 0; i < k; ++i) {
    if (!is_zero((*beta)(i))) f = f + local[static_cast<std::size_t>(i)] * (*beta)(i);
  }
  return f;
}

std::vector<IntervalRegion> frop_range_supports(const FiniteRankOp& t) {
  const RangeModel model = range_model(t);
  std::vector<IntervalRegion> out;
  for (SupportSet zeros : model.lattice.closed_sets()) out.push_back(model.region(zeros));
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<PiecewisePoly> frop_realize_support(const FiniteRankOp& t, const IntervalRegion& target) {
  const RangeModel model = range_model(t);
  const auto zeros = model.zeros_of(target);
  if (!zeros || !model.lattice.is_closed(*zeros)) return std::nullopt;
  return realizer(t, model, *zeros);
}

bool replays(const FiniteRankOp& t, const IntervalWitness& w) {
  const PiecewisePoly tf = frop_apply(t, w.f);
  const PiecewisePoly tg = frop_apply(t, w.g);
  switch (w.kind) {
    case WitnessKind::SbpViolation: return pp_disjoint(w.f, tg) && !pp_disjoint(tf, tg);
    case WitnessKind::ScpViolation: return pp_band_contains(tf, w.g) && !pp_band_contains(tf, tg);
    default: return false;
  }
}

namespace {

/// Visits range supports in ascending order and returns the first violation.
/// For each support S, `probe_region(S)` is where the test element lives and
/// `allowed(S)` is where its image must stay.
template <typename Region, typename Allowed>
IntervalVerdict scan(const FiniteRankOp& t, WitnessKind kind, Region probe_region, Allowed allowed) {
  const RangeModel model = range_model(t);
  std::vector<std::pair<IntervalRegion, SupportSet>> supports;
  for (SupportSet zeros : model.lattice.closed_sets()) supports.emplace_back(model.region(zeros), zeros);
  std::sort(supports.begin(), supports.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& [s, zeros] : supports) {
    const IntervalRegion region = probe_region(s);
    const Matrix basis = frop_image_subspace(t, region);
    for (Eigen::Index j = 0; j < basis.cols(); ++j) {
      const PiecewisePoly image = frop_combine(t, basis.col(j));
      if (pp_support(image).subset_of(allowed(s))) continue;
      const PiecewisePoly realized = realizer(t, model, zeros);
      IntervalWitness w{kind, {}, {}, "range support " + s.to_string()};
      PiecewisePoly& test = kind == WitnessKind::SbpViolation ? w.f : w.g;
      (kind == WitnessKind::SbpViolation ? w.g : w.f) = realized;
      test = PiecewisePoly::indicator(region);
      if (!replays(t, w)) test = normalized(frop_preimage(t, region, basis.col(j)));
      if (!replays(t, w)) throw std::logic_error("interval witness failed to replay");
      return {false, std::move(w)};
    }
  }
  return {true, std::nullopt};
}

}  // namespace

IntervalVerdict frop_is_sbp(const FiniteRankOp& t) {
  return scan(
      t, WitnessKind::SbpViolation, [](const IntervalRegion& s) { return s.complement(); },
      [](const IntervalRegion& s) { return s.complement(); });
}

IntervalVerdict frop_is_scp(const FiniteRankOp& t) {
  return scan(
      t, WitnessKind::ScpViolation, [](const IntervalRegion& s) { return s; },
      [](const IntervalRegion& s) { return s; });
}

FiniteRankOp build_example_ex1() {
  const Rational half(1, 2);
  return FiniteRankOp({
      {PiecewisePoly::restricted({Rational(2)}, 0, half), PiecewisePoly::constant(1)},
      {PiecewisePoly::restricted({Rational(0), Rational(1)}, 0, half),
       PiecewisePoly::restricted({Rational(0), Rational(1)}, 0, half)},
  });
}

FiniteRankOp build_example_ex3() {
  return FiniteRankOp({
      {PiecewisePoly({{0, 1, {Rational(4), Rational(-6)}}}), PiecewisePoly::constant(1)},
      {PiecewisePoly({{0, 1, {Rational(-6), Rational(12)}}}), PiecewisePoly({{0, 1, {Rational(0), Rational(1)}}})},
  });
}

}  // namespace sbp
