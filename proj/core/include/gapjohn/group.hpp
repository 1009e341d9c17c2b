#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_set>
#include <vector>

#include "gapjohn/rational.hpp"

namespace gapjohn {

// Default size budget for enumerations.
inline constexpr std::size_t kDefaultCap = 4'000'000;

// An element of Z^r + Z/m_1 + ... + Z/m_s, stored as r + s integer
// coordinates.  Torsion coordinates are kept reduced into [0, m_i) by the
// owning AmbientGroup; a bare GroupElement carries no group reference.
struct GroupElement {
  std::vector<std::int64_t> coords;

  friend auto operator<=>(const GroupElement&, const GroupElement&) = default;
  friend bool operator==(const GroupElement&, const GroupElement&) = default;
};

struct ElementHash {
  std::size_t operator()(const GroupElement& e) const noexcept;
};

using ElementHashSet = std::unordered_set<GroupElement, ElementHash>;

// The group G = Z^r + Z/m_1 + ... + Z/m_s.  Moduli need not form a
// divisibility chain.
class AmbientGroup {
 public:
  AmbientGroup() = default;
  AmbientGroup(int free_rank, std::vector<std::int64_t> moduli);

  static AmbientGroup integers(int rank = 1) { return AmbientGroup(rank, {}); }
  static AmbientGroup cyclic(std::int64_t modulus) { return AmbientGroup(0, {modulus}); }

  int free_rank() const { return free_rank_; }
  const std::vector<std::int64_t>& moduli() const { return moduli_; }
  std::size_t arity() const { return static_cast<std::size_t>(free_rank_) + moduli_.size(); }
  bool torsion_free() const { return moduli_.empty(); }
  bool finite() const { return free_rank_ == 0; }
  // |G|; only meaningful for finite groups.
  Integer order() const;

  GroupElement zero() const;
  // Builds an element, reducing torsion coordinates.  Throws
  // PreconditionError on a coordinate-count mismatch.
  GroupElement element(std::vector<std::int64_t> coords) const;
  GroupElement element(std::initializer_list<std::int64_t> coords) const {
    return element(std::vector<std::int64_t>(coords));
  }
  bool is_member(const GroupElement& e) const;

  GroupElement add(const GroupElement& a, const GroupElement& b) const;
  GroupElement subtract(const GroupElement& a, const GroupElement& b) const;
  GroupElement negate(const GroupElement& a) const;
  // n*a with the conventions 0a = 0 and (-n)a = -(na).
  GroupElement scale(std::int64_t n, const GroupElement& a) const;
  void add_in_place(GroupElement& acc, const GroupElement& b) const;
  // acc += n*b
  void add_scaled_in_place(GroupElement& acc, std::int64_t n, const GroupElement& b) const;

  // Order of a torsion element, or 0 when the element has infinite order.
  std::int64_t element_order(const GroupElement& a) const;

  friend bool operator==(const AmbientGroup&, const AmbientGroup&) = default;

 private:
  int free_rank_ = 0;
  std::vector<std::int64_t> moduli_;
};

// Throws PreconditionError unless both groups coincide.
void require_same_group(const AmbientGroup& a, const AmbientGroup& b, const char* what);

// A finite subset of a group in canonical (lexicographic) order without
// duplicates.
class FiniteSet {
 public:
  FiniteSet() = default;
  explicit FiniteSet(AmbientGroup group) : group_(std::move(group)) {}
  FiniteSet(AmbientGroup group, std::vector<GroupElement> elements);
  FiniteSet(AmbientGroup group, const ElementHashSet& elements);

  const AmbientGroup& group() const { return group_; }
  const std::vector<GroupElement>& elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  bool empty() const { return elements_.empty(); }
  auto begin() const { return elements_.begin(); }
  auto end() const { return elements_.end(); }
  const GroupElement& operator[](std::size_t i) const { return elements_[i]; }

  bool contains(const GroupElement& e) const;
  bool is_subset_of(const FiniteSet& other) const;

  friend bool operator==(const FiniteSet& a, const FiniteSet& b) {
    return a.group_ == b.group_ && a.elements_ == b.elements_;
  }

 private:
  AmbientGroup group_;
  std::vector<GroupElement> elements_;
};

// A finite subgroup H, cached as the full element list.
class FiniteSubgroup {
 public:
  FiniteSubgroup() = default;
  static FiniteSubgroup trivial(const AmbientGroup& group);

  const AmbientGroup& group() const { return elements_.group(); }
  const std::vector<GroupElement>& generators() const { return generators_; }
  const FiniteSet& elements() const { return elements_; }
  std::size_t order() const { return elements_.size(); }
  bool contains(const GroupElement& e) const { return elements_.contains(e); }
  bool contains(const FiniteSubgroup& other) const { return other.elements_.is_subset_of(elements_); }

  friend bool operator==(const FiniteSubgroup& a, const FiniteSubgroup& b) {
    return a.elements_ == b.elements_;
  }

 private:
  friend FiniteSubgroup subgroup_generated(const FiniteSet&, std::size_t);
  friend FiniteSubgroup subgroup_generated(const AmbientGroup&, std::span<const GroupElement>,
                                           std::size_t);
  std::vector<GroupElement> generators_;
  FiniteSet elements_;
};

// A + B.
FiniteSet sumset(const FiniteSet& a, const FiniteSet& b, std::size_t cap = kDefaultCap);
// A - B.
FiniteSet difference_set(const FiniteSet& a, const FiniteSet& b, std::size_t cap = kDefaultCap);
// lA by binary doubling; throws CapExceeded if any partial result is larger
// than cap.
FiniteSet iterated_sumset(const FiniteSet& a, std::int64_t l, std::size_t cap = kDefaultCap);
// n . A = {na : a in A}.
FiniteSet dilate_set(std::int64_t n, const FiniteSet& a);
FiniteSet translate(const FiniteSet& a, const GroupElement& x);
FiniteSet negate_set(const FiniteSet& a);
FiniteSet set_union(const FiniteSet& a, const FiniteSet& b);

// Closure of S u -S u {0} under addition.  Throws CapExceeded when the
// generated subgroup is infinite or larger than cap.
FiniteSubgroup subgroup_generated(const FiniteSet& generators, std::size_t cap = kDefaultCap);
FiniteSubgroup subgroup_generated(const AmbientGroup& group, std::span<const GroupElement> generators,
                                  std::size_t cap = kDefaultCap);

}  // namespace gapjohn
