#include "sbp/support.hpp"

namespace sbp {

SupportSet SupportSet::from_atoms(std::initializer_list<int> atoms) {
  return from_atoms(std::vector<int>(atoms));
}

SupportSet SupportSet::from_atoms(const std::vector<int>& atoms) {
  SupportSet s;
  for (int a : atoms) {
    if (a < 1 || a > kCapacity) throw std::out_of_range("atom label out of range");
    s.set(a - 1);
  }
  return s;
}

std::vector<int> SupportSet::indices() const {
  std::vector<int> out;
  for (std::uint64_t b = bits_; b != 0; b &= b - 1) out.push_back(std::countr_zero(b));
  return out;
}

std::vector<int> SupportSet::atoms() const {
  auto out = indices();
  for (auto& i : out) ++i;
  return out;
}

std::string SupportSet::to_string() const {
  std::string s = "{";
  bool first = true;
  for (int a : atoms()) {
    if (!first) s += ",";
    s += std::to_string(a);
    first = false;
  }
  return s + "}";
}

SupportSet support(const Vector& v) {
  if (v.size() > SupportSet::kCapacity) throw DimensionError("vector longer than 64 atoms");
  SupportSet s;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!is_zero(v(i))) s.set(static_cast<int>(i));
  }
  return s;
}

bool is_disjoint(const Vector& f, const Vector& g) {
  if (f.size() != g.size()) throw DimensionError("is_disjoint: dimension mismatch");
  return !support(f).intersects(support(g));
}

bool band_contains(const Vector& g, const Vector& f) {
  if (f.size() != g.size()) throw DimensionError("band_contains: dimension mismatch");
  return support(f).subset_of(support(g));
}

Vector unit_vector(Eigen::Index n, Eigen::Index index) {
  Vector e = Vector::Zero(n);
  e(index) = 1;
  return e;
}

}  // namespace sbp
