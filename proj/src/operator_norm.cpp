#include "sbp/operator_norm.hpp"

#include <algorithm>
#include <cmath>

#include "sbp/linalg.hpp"
#include "sbp/wce.hpp"

namespace sbp {

namespace {

Rational abs(const Rational& x) { return x.sign() < 0 ? Rational(-x) : x; }

/// max_i (sum_k w_k |T_ki|) / w_i: the induced norm on L1(w).
Rational l1_norm(const Vector& w, const Matrix& t) {
  Rational best = 0;
  for (Eigen::Index i = 0; i < t.cols(); ++i) {
    Rational col = 0;
    for (Eigen::Index k = 0; k < t.rows(); ++k) col += w(k) * abs(t(k, i));
    best = std::max(best, Rational(col / w(i)));
  }
  return best;
}

/// max_k w_k sum_i |T_ki| / w_i: the induced norm for ||x|| = max_i w_i |x_i|.
Rational weighted_sup_norm(const Vector& w, const Matrix& t) {
  Rational best = 0;
  for (Eigen::Index k = 0; k < t.rows(); ++k) {
    Rational row = 0;
    for (Eigen::Index i = 0; i < t.cols(); ++i) row += abs(t(k, i)) / w(i);
    best = std::max(best, Rational(w(k) * row));
  }
  return best;
}

/// max_k sum_i |T_ki|: the induced norm on unweighted L_inf.
Rational plain_sup_norm(const Matrix& t) {
  Rational best = 0;
  for (Eigen::Index k = 0; k < t.rows(); ++k) {
    Rational row = 0;
    for (Eigen::Index i = 0; i < t.cols(); ++i) row += abs(t(k, i));
    best = std::max(best, row);
  }
  return best;
}

/// T = u psi^T for rank(T) == 1.
std::pair<Vector, Vector> rank_one_factors(const Matrix& t) {
  Eigen::Index col = 0;
  while (is_zero_matrix(t.col(col))) ++col;
  const Vector u = t.col(col);
  Eigen::Index pivot = 0;
  while (is_zero(u(pivot))) ++pivot;
  Vector psi = t.row(pivot).transpose() / u(pivot);
  return {u, psi};
}

Matrix gram(const Vector& w, const Matrix& t) {
  return (t.transpose() * w.asDiagonal() * t).eval();
}

bool norm_squared_at_most(const Vector& w, const Matrix& g, const Rational& c2) {
  Matrix a = (-g).eval();
  for (Eigen::Index i = 0; i < a.rows(); ++i) a(i, i) += c2 * w(i);
  return is_positive_semidefinite(a);
}

/// Rationalizes a floating-point direction onto a grid of step 1/1024.
Vector rationalize(const Eigen::VectorXd& x) {
  Vector out(x.size());
  const double scale = x.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double v = scale > 0 ? x(i) / scale : 0.0;
    out(i) = Rational(static_cast<long>(std::lround(v * 1024.0)), 1024L);
  }
  return out;
}

/// Candidate maximizers: atoms, and a power-iteration estimate of the top
/// eigenvector of W^{-1} T^T W T rationalized onto a grid. Only the Rayleigh
/// quotients are used, which are exact lower bounds.
std::vector<Vector> p2_candidates(const Vector& w, const Matrix& g) {
  const Eigen::Index n = g.rows();
  std::vector<Vector> out;
  for (Eigen::Index i = 0; i < n; ++i) out.push_back(unit_vector(n, i));
  Eigen::MatrixXd gd(n, n);
  Eigen::VectorXd wd(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    wd(i) = w(i).convert_to<double>();
    for (Eigen::Index j = 0; j < n; ++j) gd(i, j) = g(i, j).convert_to<double>();
  }
  Eigen::VectorXd x = Eigen::VectorXd::Ones(n);
  for (int iter = 0; iter < 200; ++iter) {
    Eigen::VectorXd next = (gd * x).cwiseQuotient(wd);
    const double len = next.norm();
    if (!(len > 0) || !std::isfinite(len)) break;
    x = next / len;
  }
  if (x.allFinite() && x.norm() > 0) out.push_back(rationalize(x));
  return out;
}

NormValue p2_general(const Vector& w, const Matrix& t) {
  const Matrix g = gram(w, t);
  Rational lo = 0;
  for (const Vector& x : p2_candidates(w, g)) {
    const Rational den = (x.transpose() * w.asDiagonal() * x).value();
    if (is_zero(den)) continue;
    const Rational num = (x.transpose() * g * x).value();
    lo = std::max(lo, Rational(num / den));
  }
  if (norm_squared_at_most(w, g, lo)) return NormValue::exact_square(lo);
  // Riesz-Thorin on L2(w): ||T||^2 <= ||T||_{L1(w)} ||T||_{L_inf}.
  Rational hi = l1_norm(w, t) * plain_sup_norm(t);
  while (!norm_squared_at_most(w, g, hi)) hi *= 2;
  const Rational width = enclosure_width();
  while (hi - lo > width) {
    const Rational mid = (lo + hi) / 2;
    if (norm_squared_at_most(w, g, mid)) hi = mid;
    else lo = mid;
  }
  return NormValue::square_bounds(lo, hi);
}

NormValue general_p_bounds(const AtomicSpace& space, const Operator& t) {
  const Vector& w = space.norm.weights();
  const Eigen::Index n = t.n();
  std::vector<Vector> candidates;
  for (Eigen::Index i = 0; i < n; ++i) candidates.push_back(unit_vector(n, i));
  if (n <= 10) {
    for (std::uint32_t signs = 0; signs < (1U << (n - 1)); ++signs) {
      Vector x = Vector::Constant(n, Rational(1));
      for (Eigen::Index i = 1; i < n; ++i) {
        if ((signs >> (i - 1)) & 1U) x(i) = -1;
      }
      candidates.push_back(x);
    }
  }
  Rational lo = 0;
  for (const Vector& x : candidates) {
    const NormValue image = norm_value(space, apply(t, x));
    const NormValue source = norm_value(space, x);
    lo = std::max(lo, Rational(image.lower() / source.upper()));
  }
  // Riesz-Thorin between L1(w) and unweighted L_inf.
  const Rational inv_p = Rational(1) / space.norm.p();
  const unsigned digits = 40;
  const Rational hi =
      detail::power_enclosure(l1_norm(w, t.matrix()), inv_p, digits).second *
      detail::power_enclosure(plain_sup_norm(t.matrix()), Rational(1) - inv_p, digits).second;
  return NormValue::bounds(lo, std::max(lo, hi));
}

}  // namespace

bool is_positive_semidefinite(const Matrix& symmetric) {
  Matrix a = symmetric;
  const Eigen::Index n = a.rows();
  for (Eigen::Index k = 0; k < n; ++k) {
    const int s = a(k, k).sign();
    if (s < 0) return false;
    if (s == 0) {
      for (Eigen::Index j = k + 1; j < n; ++j) {
        if (!is_zero(a(k, j))) return false;
      }
      continue;
    }
    for (Eigen::Index i = k + 1; i < n; ++i) {
      if (is_zero(a(i, k))) continue;
      const Rational factor = a(i, k) / a(k, k);
      for (Eigen::Index j = k + 1; j < n; ++j) {
        if (!is_zero(a(k, j))) a(i, j) -= factor * a(k, j);
      }
    }
  }
  return true;
}

NormValue operator_norm(const AtomicSpace& space, const Operator& t) {
  if (space.n() != t.n()) throw DimensionError("operator_norm: dimension mismatch");
  const Vector& w = space.norm.weights();
  const ExponentKind kind = space.norm.kind();
  if (kind == ExponentKind::One) return NormValue::exact(l1_norm(w, t.matrix()));
  if (kind == ExponentKind::Infinity) return NormValue::exact(weighted_sup_norm(w, t.matrix()));

  const Eigen::Index r = rank(t.matrix());
  if (r == 0) {
    return kind == ExponentKind::Two ? NormValue::exact_square(0) : NormValue::exact(0);
  }
  if (r == 1) {
    const auto [u, psi] = rank_one_factors(t.matrix());
    return norm_value(space, u) * norm_value(space, psi, NormSide::Dual);
  }
  if (t.n() <= Operator::kMaxAtoms) {
    const auto decomposition = decompose_wce(t);
    if (const auto* form = std::get_if<WceForm>(&decomposition)) return wce_operator_norm(space, *form);
  }
  if (kind == ExponentKind::Two) return p2_general(w, t.matrix());
  return general_p_bounds(space, t);
}

bool operator_norm_at_most(const AtomicSpace& space, const Operator& t, const Rational& c) {
  if (space.n() != t.n()) throw DimensionError("operator_norm_at_most: dimension mismatch");
  const Vector& w = space.norm.weights();
  switch (space.norm.kind()) {
    case ExponentKind::One: return l1_norm(w, t.matrix()) <= c;
    case ExponentKind::Infinity: return weighted_sup_norm(w, t.matrix()) <= c;
    case ExponentKind::Two:
      return c.sign() >= 0 && norm_squared_at_most(w, gram(w, t.matrix()), c * c);
    case ExponentKind::General: return operator_norm(space, t).compare(c) != std::partial_ordering::greater;
  }
  return false;
}

}  // namespace sbp
