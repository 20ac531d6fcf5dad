#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "sbp/norm.hpp"
#include "sbp/operator.hpp"

namespace sbp {

class WceError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Weighted conditional expectation in block form:
///   T f = sum_j <psi_j, f> u_j,  supp u_j ⊆ A_j,  supp psi_j ⊆ A_j,
/// with pairwise disjoint blocks A_j.
///
/// Forms built through make_wce are canonical: blocks are ordered by smallest
/// atom and each u_j has leading nonzero coordinate 1 (psi_j carries the
/// reciprocal scale). Equality of canonical forms is exact equality.
struct WceForm {
  Eigen::Index n = 0;
  std::vector<SupportSet> blocks;
  std::vector<Vector> u;
  std::vector<Vector> psi;

  /// T e_i = sum_j psi_j[i] u_j.
  Matrix matrix() const;
  Operator to_operator() const { return Operator(matrix()); }
  std::size_t size() const { return blocks.size(); }

  friend bool operator==(const WceForm&, const WceForm&) = default;
};

WceForm make_wce(Eigen::Index n, std::vector<SupportSet> blocks, std::vector<Vector> u,
                 std::vector<Vector> psi);

/// Blockwise averaging: x ↦ sum_j (mean of x over A_j) 1_{A_j}. Atoms outside
/// every block map to 0.
Operator make_averaging(Eigen::Index n, const std::vector<SupportSet>& partition);

/// The form when T is semi band preserving, otherwise the SBP witness.
using Decomposition = std::variant<WceForm, Witness>;

/// Blocks are the minimal supports of Σ_T, u_j the canonical realizer of A_j,
/// and psi_j is read off a single pivot row of each block. Throws
/// std::logic_error if the exact reassembly check fails.
Decomposition decompose_wce(const Operator& t, unsigned threads = 1);
Decomposition decompose_wce(const Operator& t, const SigmaTable& sigma);

/// max_j ||psi_j||_* ||u_j||.
NormValue wce_operator_norm(const AtomicSpace& space, const WceForm& form);

/// <psi_j, u_j> == 1 for every block.
bool wce_is_projection_form(const WceForm& form);

// ---------------------------------------------------------------------------
// Norm-one projection probe

struct FactCheck {
  std::string name;
  bool holds = false;
  std::string evidence;

  friend bool operator==(const FactCheck&, const FactCheck&) = default;
};

/// A projection of norm one on a strictly monotone atomic space that is semi
/// containment preserving yet has no block decomposition with
/// supp psi_j ⊆ supp u_j.
struct ProbeFinding {
  std::string family;
  NormSpec norm;
  Operator op;
  std::vector<FactCheck> checks;  // projection, norm_one, semi_containment_preserving,
                                  // strictly_monotone, wce_decomposable

  friend bool operator==(const ProbeFinding&, const ProbeFinding&) = default;
};

class ProbeHypothesisError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ProbeOptions {
  std::string exponent = "1";
  Eigen::Index min_dim = 2;
  Eigen::Index max_dim = 3;
  std::size_t budget = 2000;
  std::uint64_t seed = 1;
  unsigned threads = 1;

  friend bool operator==(const ProbeOptions&, const ProbeOptions&) = default;
};

struct ProbeReport {
  ProbeOptions options;
  std::size_t examined = 0;
  std::size_t indeterminate = 0;  // candidates whose norm could not be decided
  std::vector<ProbeFinding> findings;

  friend bool operator==(const ProbeReport&, const ProbeReport&) = default;
};

/// Searches two candidate families per dimension, in this order:
///   "rank-one-grid":      u ⊗ psi with entries in {-1, -1/2, 0, 1/2, 1},
///                         u canonical and <psi, u> = 1;
///   "random-projection":  oblique projections U (Psi^T U)^{-1} Psi^T with
///                         small integer data, and for p = 2 the orthogonal
///                         projections (norm one by construction).
/// The budget is split evenly across dimensions. Throws ProbeHypothesisError
/// for p = inf.
ProbeReport probe_charscp(const ProbeOptions& options);

/// Recomputes every fact of a finding from scratch.
bool reverify(const ProbeFinding& finding);

}  // namespace sbp
