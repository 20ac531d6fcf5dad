#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

#include "sbp/rational.hpp"

namespace sbp {

/// A subset of at most 64 elements stored as a bitmask.
///
/// Index-based members (test/set/reset) are 0-based like std::bitset. Atom-based
/// members (from_atoms/atoms/to_string) use the 1-based atom labels that appear
/// in reports and files.
class SupportSet {
 public:
  static constexpr int kCapacity = 64;

  constexpr SupportSet() = default;
  constexpr explicit SupportSet(std::uint64_t bits) : bits_(bits) {}

  static SupportSet from_atoms(std::initializer_list<int> atoms);
  static SupportSet from_atoms(const std::vector<int>& atoms);
  static constexpr SupportSet full(int n) {
    return SupportSet(n >= kCapacity ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1);
  }
  static constexpr SupportSet single(int index) { return SupportSet(std::uint64_t{1} << index); }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr bool test(int index) const { return (bits_ >> index) & 1U; }
  constexpr void set(int index) { bits_ |= std::uint64_t{1} << index; }
  constexpr void reset(int index) { bits_ &= ~(std::uint64_t{1} << index); }
  /// Smallest 0-based index, or -1 when empty.
  constexpr int first() const { return bits_ == 0 ? -1 : std::countr_zero(bits_); }

  constexpr bool subset_of(SupportSet other) const { return (bits_ & ~other.bits_) == 0; }
  constexpr bool intersects(SupportSet other) const { return (bits_ & other.bits_) != 0; }

  constexpr SupportSet operator|(SupportSet o) const { return SupportSet(bits_ | o.bits_); }
  constexpr SupportSet operator&(SupportSet o) const { return SupportSet(bits_ & o.bits_); }
  constexpr SupportSet operator-(SupportSet o) const { return SupportSet(bits_ & ~o.bits_); }
  /// Complement relative to {0, ..., n-1}.
  constexpr SupportSet complement(int n) const { return full(n) - *this; }

  /// 0-based indices in ascending order.
  std::vector<int> indices() const;
  /// 1-based atom labels in ascending order.
  std::vector<int> atoms() const;
  /// "{1,3}" or "{}".
  std::string to_string() const;

  friend constexpr bool operator==(SupportSet, SupportSet) = default;
  /// Ascending bitmask order, the canonical report order.
  friend constexpr auto operator<=>(SupportSet a, SupportSet b) { return a.bits_ <=> b.bits_; }

 private:
  std::uint64_t bits_ = 0;
};

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

SupportSet support(const Vector& v);
bool is_disjoint(const Vector& f, const Vector& g);
/// f lies in the band generated by g.
bool band_contains(const Vector& g, const Vector& f);

/// Unit vector e_i for a 0-based index.
Vector unit_vector(Eigen::Index n, Eigen::Index index);

}  // namespace sbp
