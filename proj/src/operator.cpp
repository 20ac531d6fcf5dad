#include "sbp/operator.hpp"

#include <algorithm>
#include <type_traits>

#include "sbp/linalg.hpp"

namespace sbp {

Operator::Operator(Matrix matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols()) throw DimensionError("operator matrix must be square");
  if (matrix_.rows() < 1) throw DimensionError("operator needs at least one atom");
  if (matrix_.rows() > SupportSet::kCapacity) throw DimensionError("operator exceeds 64 atoms");
}

SupportSet Operator::column_support(Eigen::Index i) const { return support(column(i)); }

Vector apply(const Operator& t, const Vector& f) {
  if (f.size() != t.n()) throw DimensionError("apply: dimension mismatch");
  return t.matrix() * f;
}

Operator compose(const Operator& a, const Operator& b) {
  if (a.n() != b.n()) throw DimensionError("compose: dimension mismatch");
  return Operator(a.matrix() * b.matrix());
}

bool is_projection(const Operator& t) { return (t.matrix() * t.matrix()).eval() == t.matrix(); }

std::string to_string(WitnessKind kind) {
  switch (kind) {
    case WitnessKind::SbpViolation: return "SBP-violation";
    case WitnessKind::ScpViolation: return "SCP-violation";
    case WitnessKind::BpViolation: return "BP-violation";
    case WitnessKind::DpViolation: return "DP-violation";
    case WitnessKind::BetaViolation: return "beta-violation";
    case WitnessKind::ClosureViolation: return "closure-violation";
  }
  return "unknown";
}

WitnessKind witness_kind_from_string(const std::string& text) {
  for (auto k : {WitnessKind::SbpViolation, WitnessKind::ScpViolation, WitnessKind::BpViolation,
                 WitnessKind::DpViolation, WitnessKind::BetaViolation, WitnessKind::ClosureViolation}) {
    if (to_string(k) == text) return k;
  }
  throw ParseError("unknown witness kind \"" + text + "\"");
}

bool replays(const Operator& t, const Witness& w) {
  const Vector tf = apply(t, w.f);
  const Vector tg = apply(t, w.g);
  switch (w.kind) {
    case WitnessKind::BpViolation: return is_disjoint(w.f, w.g) && !is_disjoint(tf, w.g);
    case WitnessKind::DpViolation: return is_disjoint(w.f, w.g) && !is_disjoint(tf, tg);
    case WitnessKind::BetaViolation: return band_contains(w.g, w.f) && !band_contains(tg, tf);
    case WitnessKind::SbpViolation: return is_disjoint(w.f, tg) && !is_disjoint(tf, tg);
    case WitnessKind::ScpViolation: return band_contains(tg, w.f) && !band_contains(tg, tf);
    case WitnessKind::ClosureViolation: return false;
  }
  return false;
}

bool SigmaTable::contains(SupportSet s) const {
  return std::binary_search(supports.begin(), supports.end(), s);
}

namespace {

/// Range lattice parametrized by the pivot columns of T, so a parameter y is
/// the preimage that puts y_k on pivot column k and zero elsewhere.
template <typename Scalar>
struct PivotRange {
  std::vector<Eigen::Index> pivots;
  BasicZeroSetLattice<Scalar> lattice;
};

template <typename Scalar>
PivotRange<Scalar> pivot_range(const MatrixX<Scalar>& t) {
  const auto ech = row_echelon(t);
  std::vector<MatrixX<Scalar>> rows;
  rows.reserve(static_cast<std::size_t>(t.rows()));
  for (Eigen::Index i = 0; i < t.rows(); ++i) {
    MatrixX<Scalar> row(1, ech.rank());
    for (Eigen::Index k = 0; k < ech.rank(); ++k) row(0, k) = t(i, ech.pivots[static_cast<std::size_t>(k)]);
    rows.push_back(std::move(row));
  }
  return {ech.pivots, BasicZeroSetLattice<Scalar>(std::move(rows), ech.rank())};
}

template <typename Scalar>
MatrixX<Scalar> convert(const Matrix& m) {
  if constexpr (std::is_same_v<Scalar, Rational>) {
    return m;
  } else {
    return to_small(m);
  }
}

}  // namespace

ZeroSetLattice range_lattice(const Operator& t) { return pivot_range(t.matrix()).lattice; }

SigmaTable enumerate_sigma(const Operator& t, unsigned threads) {
  if (t.n() > Operator::kMaxAtoms) {
    throw BudgetExceeded("support enumeration is limited to " + std::to_string(Operator::kMaxAtoms) +
                         " atoms");
  }
  const int n = static_cast<int>(t.n());
  SigmaTable table;
  table.n = t.n();
  const auto [closed, loops] = with_fast_scalar([&](auto tag) {
    using Scalar = decltype(tag);
    const auto range = pivot_range(convert<Scalar>(t.matrix()));
    return std::pair{range.lattice.closed_sets(threads), range.lattice.loops()};
  });
  for (SupportSet zeros : closed) table.supports.push_back(zeros.complement(n));
  std::sort(table.supports.begin(), table.supports.end());
  table.s_t = loops.complement(n);
  return table;
}

Vector realize_support(const Operator& t, SupportSet s) {
  const int n = static_cast<int>(t.n());
  if (!s.subset_of(SupportSet::full(n))) throw UnachievableSupport("support not achievable");
  return with_fast_scalar([&](auto tag) {
    using Scalar = decltype(tag);
    const auto range = pivot_range(convert<Scalar>(t.matrix()));
    const auto y = range.lattice.realize(s.complement(n));
    if (!y) throw UnachievableSupport("support not achievable: " + s.to_string());
    Vector g = Vector::Zero(t.n());
    for (std::size_t k = 0; k < range.pivots.size(); ++k) {
      const Scalar& value = (*y)(static_cast<Eigen::Index>(k));
      if constexpr (std::is_same_v<Scalar, Rational>) {
        g(range.pivots[k]) = value;
      } else {
        g(range.pivots[k]) = value.to_rational();
      }
    }
    return g;
  });
}

std::vector<SupportSet> minimal_supports(const SigmaTable& sigma) {
  std::vector<SupportSet> out;
  for (SupportSet s : sigma.supports) {
    if (s.empty()) continue;
    bool minimal = true;
    for (SupportSet other : sigma.supports) {
      if (!other.empty() && other != s && other.subset_of(s)) {
        minimal = false;
        break;
      }
    }
    if (minimal) out.push_back(s);
  }
  std::sort(out.begin(), out.end(),
            [](SupportSet a, SupportSet b) { return a.first() < b.first(); });
  return out;
}

Verdict is_band_preserving(const Operator& t) {
  for (Eigen::Index i = 0; i < t.n(); ++i) {
    for (Eigen::Index k = 0; k < t.n(); ++k) {
      if (k != i && !is_zero(t(k, i))) {
        return {false, Witness{WitnessKind::BpViolation, unit_vector(t.n(), i), unit_vector(t.n(), k),
                               "off-diagonal entry at row " + std::to_string(k + 1) + ", column " +
                                   std::to_string(i + 1)}};
      }
    }
  }
  return {};
}

Verdict is_disjointness_preserving(const Operator& t) {
  for (Eigen::Index i = 0; i < t.n(); ++i) {
    for (Eigen::Index j = i + 1; j < t.n(); ++j) {
      if (t.column_support(i).intersects(t.column_support(j))) {
        return {false, Witness{WitnessKind::DpViolation, unit_vector(t.n(), i), unit_vector(t.n(), j),
                               "columns " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                                   " share support"}};
      }
    }
  }
  return {};
}

// A g with support exactly G has (Tg)_k = 0 for some k in U(G) iff row k has
// at least two nonzeros inside G (the kernel of a row with a single nonzero in
// G is a coordinate hyperplane). Taking G = {1..n} shows (beta) holds iff
// every row has at most one nonzero entry.
Verdict is_beta(const Operator& t) {
  for (Eigen::Index k = 0; k < t.n(); ++k) {
    Eigen::Index first = -1;
    for (Eigen::Index j = 0; j < t.n(); ++j) {
      if (is_zero(t(k, j))) continue;
      if (first < 0) {
        first = j;
        continue;
      }
      Vector g = Vector::Zero(t.n());
      g(first) = 1;
      g(j) = -t(k, first) / t(k, j);
      return {false, Witness{WitnessKind::BetaViolation, unit_vector(t.n(), first), g,
                             "row " + std::to_string(k + 1) + " cancels on {" + std::to_string(first + 1) +
                                 "," + std::to_string(j + 1) + "}"}};
    }
  }
  return {};
}

Verdict is_sbp(const Operator& t, const SigmaTable& sigma) {
  const int n = static_cast<int>(t.n());
  std::vector<SupportSet> columns;
  for (int i = 0; i < n; ++i) columns.push_back(t.column_support(i));
  for (SupportSet s : sigma.supports) {
    for (int i : s.complement(n).indices()) {
      if (columns[static_cast<std::size_t>(i)].intersects(s)) {
        return {false, Witness{WitnessKind::SbpViolation, unit_vector(t.n(), i), realize_support(t, s),
                               "atom " + std::to_string(i + 1) + " lies outside " + s.to_string() +
                                   " but T e_" + std::to_string(i + 1) + " meets it"}};
      }
    }
  }
  return {};
}

Verdict is_sbp(const Operator& t) { return is_sbp(t, enumerate_sigma(t)); }

Verdict is_scp(const Operator& t, const SigmaTable& sigma) {
  const int n = static_cast<int>(t.n());
  std::vector<SupportSet> columns;
  for (int i = 0; i < n; ++i) columns.push_back(t.column_support(i));
  for (SupportSet s : sigma.supports) {
    for (int i : s.indices()) {
      if (!columns[static_cast<std::size_t>(i)].subset_of(s)) {
        return {false, Witness{WitnessKind::ScpViolation, unit_vector(t.n(), i), realize_support(t, s),
                               "atom " + std::to_string(i + 1) + " lies in " + s.to_string() +
                                   " but T e_" + std::to_string(i + 1) + " leaves it"}};
      }
    }
  }
  return {};
}

Verdict is_scp(const Operator& t) { return is_scp(t, enumerate_sigma(t)); }

ClosureReport verify_sigma_closures(const Operator& t, const SigmaTable& sigma) {
  ClosureReport report;
  std::vector<bool> present(std::size_t{1} << sigma.n, false);
  for (SupportSet s : sigma.supports) present[s.bits()] = true;
  const auto record = [&](SupportSet a, SupportSet b, const std::string& what) {
    if (report.witness) return;
    report.witness = Witness{WitnessKind::ClosureViolation, realize_support(t, a), realize_support(t, b),
                             what + " of " + a.to_string() + " and " + b.to_string() + " is missing"};
  };
  for (SupportSet a : sigma.supports) {
    for (SupportSet b : sigma.supports) {
      if (b < a) continue;
      if (!present[(a | b).bits()]) {
        report.union_closed = false;
        record(a, b, "union");
      }
      if (!present[(a & b).bits()]) {
        report.intersection_closed = false;
        record(a, b, "intersection");
      }
    }
  }
  for (SupportSet a : sigma.supports) {
    for (SupportSet b : sigma.supports) {
      if (a.subset_of(b) && !present[(b - a).bits()]) {
        report.complement_closed = false;
        record(a, b, "relative complement");
      }
    }
  }
  return report;
}

}  // namespace sbp
