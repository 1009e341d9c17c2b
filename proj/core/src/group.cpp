#include "gapjohn/group.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "gapjohn/errors.hpp"

namespace gapjohn {

namespace {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("group coordinate overflow in addition");
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("group coordinate overflow in scaling");
  return r;
}

std::int64_t reduce_mod(std::int64_t x, std::int64_t m) {
  std::int64_t r = x % m;
  return r < 0 ? r + m : r;
}

}  // namespace

std::size_t ElementHash::operator()(const GroupElement& e) const noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ e.coords.size();
  for (std::int64_t c : e.coords) {
    std::uint64_t x = static_cast<std::uint64_t>(c) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    h ^= x;
  }
  return static_cast<std::size_t>(h);
}

AmbientGroup::AmbientGroup(int free_rank, std::vector<std::int64_t> moduli)
    : free_rank_(free_rank), moduli_(std::move(moduli)) {
  if (free_rank_ < 0) throw PreconditionError("free rank must be non-negative");
  for (std::int64_t m : moduli_) {
    if (m < 2) throw PreconditionError("torsion moduli must be at least 2");
  }
}

Integer AmbientGroup::order() const {
  if (!finite()) throw PreconditionError("order() of an infinite group");
  Integer n = 1;
  for (std::int64_t m : moduli_) n *= static_cast<long>(m);
  return n;
}

GroupElement AmbientGroup::zero() const { return GroupElement{std::vector<std::int64_t>(arity(), 0)}; }

GroupElement AmbientGroup::element(std::vector<std::int64_t> coords) const {
  if (coords.size() != arity()) {
    throw PreconditionError("element has " + std::to_string(coords.size()) + " coordinates, group expects " +
                            std::to_string(arity()));
  }
  for (std::size_t i = 0; i < moduli_.size(); ++i) {
    auto& c = coords[free_rank_ + i];
    c = reduce_mod(c, moduli_[i]);
  }
  return GroupElement{std::move(coords)};
}

bool AmbientGroup::is_member(const GroupElement& e) const {
  if (e.coords.size() != arity()) return false;
  for (std::size_t i = 0; i < moduli_.size(); ++i) {
    auto c = e.coords[free_rank_ + i];
    if (c < 0 || c >= moduli_[i]) return false;
  }
  return true;
}

void AmbientGroup::add_in_place(GroupElement& acc, const GroupElement& b) const {
  const auto r = static_cast<std::size_t>(free_rank_);
  for (std::size_t i = 0; i < r; ++i) acc.coords[i] = checked_add(acc.coords[i], b.coords[i]);
  for (std::size_t i = 0; i < moduli_.size(); ++i) {
    std::int64_t s = acc.coords[r + i] + b.coords[r + i];
    if (s >= moduli_[i]) s -= moduli_[i];
    acc.coords[r + i] = s;
  }
}

void AmbientGroup::add_scaled_in_place(GroupElement& acc, std::int64_t n, const GroupElement& b) const {
  const auto r = static_cast<std::size_t>(free_rank_);
  for (std::size_t i = 0; i < r; ++i) {
    acc.coords[i] = checked_add(acc.coords[i], checked_mul(n, b.coords[i]));
  }
  for (std::size_t i = 0; i < moduli_.size(); ++i) {
    const std::int64_t m = moduli_[i];
    auto prod = static_cast<__int128>(reduce_mod(n, m)) * b.coords[r + i];
    acc.coords[r + i] = static_cast<std::int64_t>((acc.coords[r + i] + prod) % m);
  }
}

GroupElement AmbientGroup::add(const GroupElement& a, const GroupElement& b) const {
  GroupElement r = a;
  add_in_place(r, b);
  return r;
}

GroupElement AmbientGroup::negate(const GroupElement& a) const {
  GroupElement r = a;
  const auto fr = static_cast<std::size_t>(free_rank_);
  for (std::size_t i = 0; i < fr; ++i) r.coords[i] = checked_mul(-1, r.coords[i]);
  for (std::size_t i = 0; i < moduli_.size(); ++i) {
    auto& c = r.coords[fr + i];
    c = c == 0 ? 0 : moduli_[i] - c;
  }
  return r;
}

GroupElement AmbientGroup::subtract(const GroupElement& a, const GroupElement& b) const {
  return add(a, negate(b));
}

GroupElement AmbientGroup::scale(std::int64_t n, const GroupElement& a) const {
  GroupElement r = zero();
  add_scaled_in_place(r, n, a);
  return r;
}

std::int64_t AmbientGroup::element_order(const GroupElement& a) const {
  for (int i = 0; i < free_rank_; ++i) {
    if (a.coords[i] != 0) return 0;
  }
  std::int64_t order = 1;
  for (std::size_t i = 0; i < moduli_.size(); ++i) {
    const std::int64_t m = moduli_[i];
    const std::int64_t c = a.coords[free_rank_ + i];
    const std::int64_t component = m / std::gcd(m, c);
    order = std::lcm(order, component);
  }
  return order;
}

void require_same_group(const AmbientGroup& a, const AmbientGroup& b, const char* what) {
  if (!(a == b)) throw PreconditionError(std::string("group mismatch in ") + what);
}

FiniteSet::FiniteSet(AmbientGroup group, std::vector<GroupElement> elements) : group_(std::move(group)) {
  for (auto& e : elements) e = group_.element(std::move(e.coords));
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  elements_ = std::move(elements);
}

FiniteSet::FiniteSet(AmbientGroup group, const ElementHashSet& elements)
    : group_(std::move(group)), elements_(elements.begin(), elements.end()) {
  std::sort(elements_.begin(), elements_.end());
}

bool FiniteSet::contains(const GroupElement& e) const {
  return std::binary_search(elements_.begin(), elements_.end(), e);
}

bool FiniteSet::is_subset_of(const FiniteSet& other) const {
  return std::includes(other.elements_.begin(), other.elements_.end(), elements_.begin(), elements_.end());
}

FiniteSubgroup FiniteSubgroup::trivial(const AmbientGroup& group) {
  FiniteSubgroup h;
  h.elements_ = FiniteSet(group, std::vector<GroupElement>{group.zero()});
  return h;
}

FiniteSet sumset(const FiniteSet& a, const FiniteSet& b, std::size_t cap) {
  require_same_group(a.group(), b.group(), "sumset");
  const AmbientGroup& g = a.group();
  ElementHashSet out;
  out.reserve(std::min(cap, a.size() * b.size()) + 1);
  for (const auto& x : a) {
    for (const auto& y : b) {
      out.insert(g.add(x, y));
    }
    if (out.size() > cap) throw CapExceeded("sumset exceeds cap of " + std::to_string(cap));
  }
  return FiniteSet(g, out);
}

FiniteSet difference_set(const FiniteSet& a, const FiniteSet& b, std::size_t cap) {
  return sumset(a, negate_set(b), cap);
}

FiniteSet iterated_sumset(const FiniteSet& a, std::int64_t l, std::size_t cap) {
  if (l < 1) throw PreconditionError("iterated sumset requires l >= 1");
  if (a.empty()) throw PreconditionError("iterated sumset of an empty set");
  if (a.size() > cap) throw CapExceeded("iterated sumset input exceeds cap");
  FiniteSet power = a;
  FiniteSet result;
  bool have_result = false;
  for (std::int64_t rest = l;;) {
    if (rest & 1) {
      result = have_result ? sumset(result, power, cap) : power;
      have_result = true;
    }
    rest >>= 1;
    if (rest == 0) break;
    power = sumset(power, power, cap);
  }
  return result;
}

FiniteSet dilate_set(std::int64_t n, const FiniteSet& a) {
  std::vector<GroupElement> out;
  out.reserve(a.size());
  for (const auto& x : a) out.push_back(a.group().scale(n, x));
  return FiniteSet(a.group(), std::move(out));
}

FiniteSet translate(const FiniteSet& a, const GroupElement& x) {
  std::vector<GroupElement> out;
  out.reserve(a.size());
  for (const auto& y : a) out.push_back(a.group().add(y, x));
  return FiniteSet(a.group(), std::move(out));
}

FiniteSet negate_set(const FiniteSet& a) { return dilate_set(-1, a); }

FiniteSet set_union(const FiniteSet& a, const FiniteSet& b) {
  require_same_group(a.group(), b.group(), "set_union");
  std::vector<GroupElement> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return FiniteSet(a.group(), std::move(out));
}

FiniteSubgroup subgroup_generated(const AmbientGroup& group, std::span<const GroupElement> generators,
                                  std::size_t cap) {
  std::vector<GroupElement> gens;
  for (const auto& g : generators) {
    if (!group.is_member(g)) throw PreconditionError("subgroup generator is not a group element");
    if (group.element_order(g) == 0) {
      throw CapExceeded("generated subgroup is infinite (generator of infinite order)");
    }
    if (g != group.zero()) gens.push_back(g);
  }
  std::sort(gens.begin(), gens.end());
  gens.erase(std::unique(gens.begin(), gens.end()), gens.end());

  ElementHashSet seen{group.zero()};
  std::vector<GroupElement> frontier{group.zero()};
  while (!frontier.empty()) {
    std::vector<GroupElement> next;
    for (const auto& e : frontier) {
      for (const auto& g : gens) {
        GroupElement s = group.add(e, g);
        if (seen.insert(s).second) {
          if (seen.size() > cap) throw CapExceeded("generated subgroup exceeds cap");
          next.push_back(std::move(s));
        }
      }
    }
    frontier = std::move(next);
  }
  FiniteSubgroup h;
  h.generators_ = std::move(gens);
  h.elements_ = FiniteSet(group, seen);
  return h;
}

FiniteSubgroup subgroup_generated(const FiniteSet& generators, std::size_t cap) {
  return subgroup_generated(generators.group(), generators.elements(), cap);
}

}  // namespace gapjohn
