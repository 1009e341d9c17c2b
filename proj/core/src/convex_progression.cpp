#include "gapjohn/convex_progression.hpp"

#include <string>
#include <unordered_map>

#include "gapjohn/errors.hpp"

namespace gapjohn {

ConvexCosetProgression::ConvexCosetProgression(AmbientGroup group, SymmetricPolytope body, Lattice lattice,
                                               std::vector<GroupElement> basis_images, FiniteSubgroup symmetry)
    : group_(std::move(group)),
      body_(std::move(body)),
      lattice_(std::move(lattice)),
      images_(std::move(basis_images)),
      symmetry_(std::move(symmetry)) {
  if (lattice_.dim() != body_.dim() || images_.size() != body_.dim()) {
    throw PreconditionError("convex progression: body, lattice and hom dimensions disagree");
  }
  for (auto& v : images_) v = group_.element(std::move(v.coords));
  if (!(symmetry_.group() == group_)) throw PreconditionError("symmetry group lives in another group");
}

ConvexCosetProgression ConvexCosetProgression::dilate(const Rational& t) const {
  ConvexCosetProgression p = *this;
  if (rank() > 0) p.body_ = body_.dilate(t);
  return p;
}

ConvexCosetProgression ConvexCosetProgression::standardized() const {
  if (rank() == 0) return *this;
  return ConvexCosetProgression(group_, body_.transform(lattice_.inverse_basis()), Lattice::standard(rank()),
                                images_, symmetry_);
}

GroupElement ConvexCosetProgression::phi(const std::vector<std::int64_t>& coeffs) const {
  if (coeffs.size() != rank()) throw PreconditionError("phi: coefficient tuple has wrong length");
  GroupElement x = group_.zero();
  for (std::size_t i = 0; i < coeffs.size(); ++i) group_.add_scaled_in_place(x, coeffs[i], images_[i]);
  return x;
}

namespace {

// Visits phi(c) + h over (tB n Gamma) x H in lexicographic coefficient order.
template <typename F>
void for_each_term(const ConvexCosetProgression& p, const Rational& t, F&& visit) {
  if (t <= 0) throw PreconditionError("dilation factor must be positive");
  const AmbientGroup& g = p.group();
  const SymmetricPolytope body = p.rank() == 0 ? p.body() : p.body().dilate(t);
  for_each_point(body, p.lattice(), [&](const std::vector<std::int64_t>& c) {
    const GroupElement v = p.phi(c);
    for (const auto& h : p.symmetry().elements()) {
      if (!visit(c, h, g.add(v, h))) return false;
    }
    return true;
  });
}

}  // namespace

FiniteSet image(const ConvexCosetProgression& p, const Rational& t, std::size_t cap) {
  ElementHashSet out;
  std::size_t terms = 0;
  for_each_term(p, t, [&](const std::vector<std::int64_t>&, const GroupElement&, GroupElement x) {
    out.insert(std::move(x));
    if (++terms > cap) throw CapExceeded("convex progression exceeds cap of " + std::to_string(cap));
    return true;
  });
  return FiniteSet(p.group(), out);
}

ConvexPropernessResult is_proper(const ConvexCosetProgression& p, const Rational& t, std::size_t cap) {
  std::unordered_map<GroupElement, ConvexTerm, ElementHash> seen;
  ConvexPropernessResult res;
  for_each_term(p, t, [&](const std::vector<std::int64_t>& c, const GroupElement& h, GroupElement x) {
    auto [it, inserted] = seen.try_emplace(x, ConvexTerm{c, h});
    if (!inserted) {
      res.proper = false;
      res.witness = ConvexCollision{ConvexTerm{c, h}, it->second, std::move(x)};
      return false;
    }
    if (seen.size() > cap) throw CapExceeded("properness scan exceeds cap of " + std::to_string(cap));
    return true;
  });
  return res;
}

ConvexCosetProgression to_convex(const CosetProgression& p) {
  return ConvexCosetProgression(p.group(), SymmetricPolytope::box(p.dims()), Lattice::standard(p.rank()),
                                p.steps(), p.symmetry());
}

}  // namespace gapjohn
