#include "sbp/oracle.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <iterator>
#include <cstring>
#include <numeric>
#include <type_traits>
#include <unordered_set>

#include "sbp/linalg.hpp"

namespace sbp::oracle {

// Some v = T x vanishes off S with v_i != 0 exactly when row i of T is not in
// the span of the rows outside S. S is achievable when that holds for every
// i in S.
std::vector<SupportSet> sigma(const Operator& t) {
  const int n = static_cast<int>(t.n());
  if (n > 16) throw BudgetExceeded("oracle sigma scans 2^n subsets; n must be <= 16");
  return with_fast_scalar([&](auto tag) {
    using Scalar = decltype(tag);
    MatrixX<Scalar> m(t.n(), t.n());
    for (Eigen::Index r = 0; r < t.n(); ++r) {
      for (Eigen::Index c = 0; c < t.n(); ++c) {
        if constexpr (std::is_same_v<Scalar, Rational>) {
          m(r, c) = t(r, c);
        } else {
          m(r, c) = SmallRational::from(t(r, c));
        }
      }
    }
    const auto rows_of = [&](SupportSet s) {
      MatrixX<Scalar> out(s.size(), m.cols());
      Eigen::Index k = 0;
      for (int i : s.indices()) out.row(k++) = m.row(i);
      return out;
    };
    std::vector<SupportSet> out;
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
      const SupportSet s(bits);
      const SupportSet outside = s.complement(n);
      const Eigen::Index base = outside.empty() ? 0 : rank(rows_of(outside));
      bool achievable = true;
      for (int i : s.indices()) {
        if (rank(rows_of(outside | SupportSet::single(i))) == base) {
          achievable = false;
          break;
        }
      }
      if (achievable) out.push_back(s);
    }
    return out;
  });
}

namespace {

/// Rows k where sum_{i in pattern} T_ki x_i is not the zero form.
SupportSet generic_image(const Operator& t, SupportSet pattern) {
  SupportSet out;
  for (Eigen::Index k = 0; k < t.n(); ++k) {
    for (int i : pattern.indices()) {
      if (!is_zero(t(k, i))) {
        out.set(static_cast<int>(k));
        break;
      }
    }
  }
  return out;
}

}  // namespace

bool is_sbp(const Operator& t) { return is_sbp(t, sigma(t)); }
bool is_scp(const Operator& t) { return is_scp(t, sigma(t)); }

bool is_sbp(const Operator& t, const std::vector<SupportSet>& supports) {
  const int n = static_cast<int>(t.n());
  for (SupportSet s : supports) {
    // Every f with supp f = F inside the complement of S = supp Tg.
    const std::uint64_t free = s.complement(n).bits();
    for (std::uint64_t f = free; f != 0; f = (f - 1) & free) {
      if (generic_image(t, SupportSet(f)).intersects(s)) return false;
    }
  }
  return true;
}

bool is_scp(const Operator& t, const std::vector<SupportSet>& supports) {
  for (SupportSet s : supports) {
    const std::uint64_t free = s.bits();
    for (std::uint64_t f = free; f != 0; f = (f - 1) & free) {
      if (!generic_image(t, SupportSet(f)).subset_of(s)) return false;
    }
  }
  return true;
}

namespace {

Vector random_supported(Rng& rng, Eigen::Index n) {
  Vector v = Vector::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (rng.chance(1, 2)) v(i) = rng.small_rational(true);
  }
  return v;
}

}  // namespace

std::optional<Witness> sample_violation(const Operator& t, WitnessKind kind, Rng& rng, std::size_t pairs) {
  for (std::size_t k = 0; k < pairs; ++k) {
    const Vector g = random_supported(rng, t.n());
    const Vector tg = apply(t, g);
    Vector f = random_supported(rng, t.n());
    // Bias f towards the hypothesis of the implication.
    for (Eigen::Index i = 0; i < t.n(); ++i) {
      const bool in_tg = !is_zero(tg(i));
      if ((kind == WitnessKind::SbpViolation && in_tg) || (kind == WitnessKind::ScpViolation && !in_tg)) {
        f(i) = 0;
      }
    }
    Witness w{kind, f, g, "sampled"};
    if (replays(t, w)) return w;
  }
  return std::nullopt;
}

PiecewisePoly random_piecewise(Rng& rng, int max_pieces, int max_degree) {
  std::vector<Rational> cuts{Rational(0), Rational(1)};
  const auto pieces = rng.uniform(1, max_pieces);
  for (std::int64_t i = 1; i < pieces; ++i) cuts.push_back(Rational(rng.uniform(1, 15), 16));
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<Piece> out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    Polynomial p;
    if (!rng.chance(1, 3)) {
      const auto degree = rng.uniform(0, max_degree);
      for (std::int64_t d = 0; d <= degree; ++d) p.push_back(rng.small_rational(false));
    }
    out.push_back({cuts[i], cuts[i + 1], std::move(p)});
  }
  return PiecewisePoly(std::move(out));
}

std::optional<IntervalWitness> sample_violation(const FiniteRankOp& t, WitnessKind kind, Rng& rng,
                                                std::size_t pairs) {
  for (std::size_t k = 0; k < pairs; ++k) {
    const PiecewisePoly g = random_piecewise(rng, 6, 3);
    const IntervalRegion target = pp_support(frop_apply(t, g));
    // Restrict f to the region its hypothesis needs half of the time.
    PiecewisePoly f = random_piecewise(rng, 6, 3);
    if (rng.chance(1, 2)) {
      const IntervalRegion keep = kind == WitnessKind::SbpViolation ? target.complement() : target;
      f = f.times(PiecewisePoly::indicator(keep));
    }
    // The interval SCP witness carries the realizer as f.
    IntervalWitness w = kind == WitnessKind::SbpViolation ? IntervalWitness{kind, f, g, "sampled"}
                                                          : IntervalWitness{kind, g, f, "sampled"};
    if (replays(t, w)) return w;
  }
  return std::nullopt;
}

namespace {

/// Entries are ±2^e (e in [-8, 8]) or zero, coded as 0 for zero and
/// sign * (e + 9) otherwise, so codes multiply by adding exponents.
using Code = std::int8_t;

Code encode(const Rational& x) {
  if (is_zero(x)) return 0;
  const int sign = x.sign();
  const Rational a = sign < 0 ? Rational(-x) : x;
  int e = 0;
  Rational m = a;
  while (m > Rational(1)) m /= 2, ++e;
  while (m < Rational(1)) m *= 2, --e;
  return static_cast<Code>(sign * (e + 9));
}

Rational decode(Code c) {
  if (c == 0) return 0;
  const int e = std::abs(c) - 9;
  Rational v = 1;
  for (int k = 0; k < std::abs(e); ++k) v = e > 0 ? Rational(v * 2) : Rational(v / 2);
  return c < 0 ? Rational(-v) : v;
}

Code divide(Code a, Code b) {
  if (a == 0) return 0;
  const int sign = (a < 0) == (b < 0) ? 1 : -1;
  return static_cast<Code>(sign * ((std::abs(a) - 9) - (std::abs(b) - 9) + 9));
}

Code multiply(Code a, Code b) {
  if (a == 0 || b == 0) return 0;
  const int sign = (a < 0) == (b < 0) ? 1 : -1;
  return static_cast<Code>(sign * ((std::abs(a) - 9) + (std::abs(b) - 9) + 9));
}

constexpr Code kOne = 9;
constexpr std::size_t kMaxN = 4;
using Square = std::array<Code, kMaxN * kMaxN>;  // column-major, entry (r, c) at c * n + r

/// Canonical form under D1 T D2: a breadth-first spanning forest of the
/// bipartite support graph, rooted at the first unvisited column, is scaled to
/// ones. Only cycle values survive, and those are scaling invariants.
Square scale_canonical(const Square& m, std::size_t n) {
  std::array<Code, kMaxN> rs{}, cs{};
  std::array<std::size_t, 2 * kMaxN> queue{};
  for (std::size_t root = 0; root < n; ++root) {
    if (cs[root] != 0) continue;
    cs[root] = kOne;
    std::size_t head = 0, tail = 0;
    queue[tail++] = root;  // columns as c, rows as kMaxN + r
    while (head < tail) {
      const std::size_t node = queue[head++];
      if (node < kMaxN) {
        for (std::size_t r = 0; r < n; ++r) {
          const Code e = m[node * n + r];
          if (e == 0 || rs[r] != 0) continue;
          rs[r] = divide(kOne, multiply(e, cs[node]));
          queue[tail++] = kMaxN + r;
        }
      } else {
        const std::size_t r = node - kMaxN;
        for (std::size_t c = 0; c < n; ++c) {
          const Code e = m[c * n + r];
          if (e == 0 || cs[c] != 0) continue;
          cs[c] = divide(kOne, multiply(e, rs[r]));
          queue[tail++] = c;
        }
      }
    }
  }
  Square out{};
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t r = 0; r < n; ++r) out[c * n + r] = multiply(multiply(rs[r], m[c * n + r]), cs[c]);
  }
  return out;
}

using Perm = std::array<std::size_t, kMaxN>;
using Pattern = std::uint16_t;  // bit c * n + r

Pattern permute(Pattern pattern, std::size_t n, const Perm& p) {
  Pattern out = 0;
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t r = 0; r < n; ++r) {
      if ((pattern >> (c * n + r)) & 1U) out |= static_cast<Pattern>(1U << (p[c] * n + p[r]));
    }
  }
  return out;
}

Square permute(const Square& m, std::size_t n, const Perm& p) {
  Square q{};
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t r = 0; r < n; ++r) q[p[c] * n + p[r]] = m[c * n + r];
  }
  return q;
}

struct SquareHash {
  std::size_t operator()(const Square& s) const {
    std::uint64_t lo = 0, hi = 0;
    std::memcpy(&lo, s.data(), 8);
    std::memcpy(&hi, s.data() + 8, 8);
    return std::hash<std::uint64_t>{}(lo ^ (hi * 0x9e3779b97f4a7c15ULL));
  }
};

}  // namespace

// Equivalent matrices share their support pattern up to the permutation, so
// classes are enumerated per pattern orbit and deduplicated under the
// pattern's stabilizer only.
namespace {

std::vector<Perm> permutations(std::size_t n) {
  std::vector<Perm> perms;
  Perm p{};
  std::iota(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(n), std::size_t{0});
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(n)));
  return perms;
}

void check_family_size(Eigen::Index n) {
  if (n < 1 || n > static_cast<Eigen::Index>(kMaxN)) throw BudgetExceeded("exhaustive family supports 1 <= n <= 4");
}

}  // namespace

std::vector<std::uint32_t> family_patterns(Eigen::Index n, int max_nonzeros) {
  check_family_size(n);
  const auto size = static_cast<std::size_t>(n);
  const std::vector<Perm> perms = permutations(size);
  const std::uint32_t column_mask = (1U << size) - 1;
  std::vector<std::uint32_t> out;
  for (std::uint32_t pattern = 0; pattern < (1U << (size * size)); ++pattern) {
    bool admissible = true;
    for (std::size_t c = 0; c < size && admissible; ++c) {
      admissible = std::popcount((pattern >> (c * size)) & column_mask) <= max_nonzeros;
    }
    if (!admissible) continue;
    const bool representative = std::all_of(perms.begin(), perms.end(), [&](const Perm& q) {
      return permute(static_cast<Pattern>(pattern), size, q) >= pattern;
    });
    if (representative) out.push_back(pattern);
  }
  return out;
}

std::vector<Operator> family_members(Eigen::Index n, std::uint32_t pattern) {
  check_family_size(n);
  const auto size = static_cast<std::size_t>(n);
  const std::array<Code, 3> values{encode(Rational(-1)), encode(Rational(1, 2)), encode(Rational(1))};
  std::vector<Perm> stabilizer;
  for (const Perm& q : permutations(size)) {
    if (permute(static_cast<Pattern>(pattern), size, q) == pattern) stabilizer.push_back(q);
  }
  std::vector<std::size_t> positions;
  for (std::size_t b = 0; b < size * size; ++b) {
    if ((pattern >> b) & 1U) positions.push_back(b);
  }
  std::unordered_set<Square, SquareHash> seen;
  std::vector<std::size_t> digits(positions.size(), 0);
  while (true) {
    Square m{};
    for (std::size_t k = 0; k < positions.size(); ++k) m[positions[k]] = values[digits[k]];
    Square best{};
    bool first = true;
    for (const Perm& q : stabilizer) {
      const Square key = scale_canonical(permute(m, size, q), size);
      if (first || key < best) best = key;
      first = false;
    }
    seen.insert(best);
    std::size_t pos = 0;
    while (pos < digits.size() && ++digits[pos] == values.size()) digits[pos++] = 0;
    if (pos == digits.size()) break;
  }
  std::vector<Square> keys(seen.begin(), seen.end());
  std::sort(keys.begin(), keys.end());
  std::vector<Operator> out;
  out.reserve(keys.size());
  for (const Square& key : keys) {
    Matrix m(n, n);
    for (std::size_t c = 0; c < size; ++c) {
      for (std::size_t r = 0; r < size; ++r) {
        m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = decode(key[c * size + r]);
      }
    }
    out.emplace_back(std::move(m));
  }
  return out;
}

std::vector<Operator> exhaustive_family(Eigen::Index n, int max_nonzeros) {
  std::vector<Operator> out;
  for (std::uint32_t pattern : family_patterns(n, max_nonzeros)) {
    auto members = family_members(n, pattern);
    std::move(members.begin(), members.end(), std::back_inserter(out));
  }
  return out;
}

}  // namespace sbp::oracle
