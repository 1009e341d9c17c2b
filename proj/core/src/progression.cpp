#include "gapjohn/progression.hpp"

#include <string>
#include <unordered_map>

#include "gapjohn/errors.hpp"

namespace gapjohn {

CosetProgression::CosetProgression(AmbientGroup group, Gap gap, FiniteSubgroup symmetry)
    : group_(std::move(group)), gap_(std::move(gap)), symmetry_(std::move(symmetry)) {
  if (gap_.dims.size() != gap_.steps.size()) throw PreconditionError("progression dims/steps length mismatch");
  for (auto& n : gap_.dims) {
    n.canonicalize();
    if (n <= 0) throw PreconditionError("progression dimensions must be positive");
  }
  for (auto& v : gap_.steps) {
    v = group_.element(std::move(v.coords));
  }
  if (!(symmetry_.group() == group_)) throw PreconditionError("symmetry group lives in another group");
}

CosetProgression::CosetProgression(AmbientGroup group, Gap gap)
    : CosetProgression(group, std::move(gap), FiniteSubgroup::trivial(group)) {}

CosetProgression CosetProgression::dilate(const Rational& t) const {
  if (t <= 0) throw PreconditionError("dilation factor must be positive");
  CosetProgression p = *this;
  for (auto& n : p.gap_.dims) n *= t;
  return p;
}

CosetProgression CosetProgression::floored() const {
  Gap g;
  for (std::size_t i = 0; i < rank(); ++i) {
    Integer f = floor(gap_.dims[i]);
    if (f == 0) continue;
    g.dims.emplace_back(f);
    g.steps.push_back(gap_.steps[i]);
  }
  return CosetProgression(group_, std::move(g), symmetry_);
}

std::vector<std::int64_t> CosetProgression::box(const Rational& t) const {
  std::vector<std::int64_t> b;
  b.reserve(rank());
  for (const auto& n : gap_.dims) b.push_back(floor_to_int64(n * t));
  return b;
}

Integer CosetProgression::formal_size(const Rational& t) const {
  Integer s = static_cast<unsigned long>(symmetry_.order());
  for (const auto& n : gap_.dims) s *= 2 * floor(n * t) + 1;
  return s;
}

GroupElement CosetProgression::evaluate(const std::vector<std::int64_t>& coeffs, const GroupElement& h) const {
  if (coeffs.size() != rank()) throw PreconditionError("coefficient tuple has wrong length");
  GroupElement x = h;
  for (std::size_t i = 0; i < rank(); ++i) group_.add_scaled_in_place(x, coeffs[i], gap_.steps[i]);
  return x;
}

namespace {

// Visits every coefficient tuple of the box in lexicographic order, passing
// the running value sum n_i v_i.  Stops when visit returns false.
template <typename F>
void for_each_term(const CosetProgression& p, const std::vector<std::int64_t>& box, F&& visit) {
  const AmbientGroup& g = p.group();
  const std::size_t d = box.size();
  std::vector<std::int64_t> n(d);
  GroupElement value = g.zero();
  for (std::size_t i = 0; i < d; ++i) {
    n[i] = -box[i];
    g.add_scaled_in_place(value, n[i], p.steps()[i]);
  }
  while (true) {
    if (!visit(n, value)) return;
    std::size_t i = d;
    while (i > 0 && n[i - 1] == box[i - 1]) {
      g.add_scaled_in_place(value, -2 * box[i - 1], p.steps()[i - 1]);
      n[i - 1] = -box[i - 1];
      --i;
    }
    if (i == 0) return;
    ++n[i - 1];
    g.add_in_place(value, p.steps()[i - 1]);
  }
}

}  // namespace

FiniteSet image(const CosetProgression& p, const Rational& t, std::size_t cap) {
  if (t <= 0) throw PreconditionError("image requires t > 0");
  const AmbientGroup& g = p.group();
  const auto box = p.box(t);
  // One step at a time: every partial sum set is a subset of the image, so
  // improper progressions cost far less than their coefficient box.
  ElementHashSet current(p.symmetry().elements().begin(), p.symmetry().elements().end());
  for (std::size_t k = 0; k < box.size(); ++k) {
    const std::int64_t m = box[k];
    if (m == 0) continue;
    const GroupElement& v = p.steps()[k];
    ElementHashSet next;
    next.reserve(current.size() * 3);
    for (const auto& x : current) {
      GroupElement y = x;
      g.add_scaled_in_place(y, -m, v);
      for (std::int64_t n = -m; n <= m; ++n) {
        next.insert(y);
        g.add_in_place(y, v);
      }
      if (next.size() > cap) throw CapExceeded("progression image exceeds cap of " + std::to_string(cap));
    }
    current = std::move(next);
  }
  return FiniteSet(g, current);
}

PropernessResult is_proper(const CosetProgression& p, const Rational& t, std::size_t cap) {
  if (t <= 0) throw PreconditionError("is_proper requires t > 0");
  const AmbientGroup& g = p.group();
  const auto& hs = p.symmetry().elements();
  std::unordered_map<GroupElement, ProgressionTerm, ElementHash> seen;
  PropernessResult res;
  for_each_term(p, p.box(t), [&](const std::vector<std::int64_t>& n, const GroupElement& v) {
    for (const auto& h : hs) {
      GroupElement x = g.add(v, h);
      auto [it, inserted] = seen.try_emplace(x, ProgressionTerm{n, h});
      if (!inserted) {
        res.proper = false;
        res.witness = CollisionWitness{ProgressionTerm{n, h}, it->second, std::move(x)};
        return false;
      }
    }
    if (seen.size() > cap) throw CapExceeded("properness scan exceeds cap of " + std::to_string(cap));
    return true;
  });
  return res;
}

}  // namespace gapjohn
