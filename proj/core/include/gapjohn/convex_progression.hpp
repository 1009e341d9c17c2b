#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "gapjohn/group.hpp"
#include "gapjohn/lattice.hpp"
#include "gapjohn/polytope.hpp"
#include "gapjohn/progression.hpp"

namespace gapjohn {

// phi(B n Gamma) + H, where phi is given by the images of Gamma's basis
// vectors.  Lattice points are handled through their basis coefficients.
class ConvexCosetProgression {
 public:
  ConvexCosetProgression() = default;
  ConvexCosetProgression(AmbientGroup group, SymmetricPolytope body, Lattice lattice,
                         std::vector<GroupElement> basis_images, FiniteSubgroup symmetry);

  const AmbientGroup& group() const { return group_; }
  const SymmetricPolytope& body() const { return body_; }
  const Lattice& lattice() const { return lattice_; }
  const std::vector<GroupElement>& basis_images() const { return images_; }
  const FiniteSubgroup& symmetry() const { return symmetry_; }
  std::size_t rank() const { return body_.dim(); }

  ConvexCosetProgression dilate(const Rational& t) const;
  // Same progression with Gamma = Z^d (body pulled back to coefficients).
  ConvexCosetProgression standardized() const;

  // phi of the lattice point with the given basis coefficients.
  GroupElement phi(const std::vector<std::int64_t>& coeffs) const;

 private:
  AmbientGroup group_;
  SymmetricPolytope body_;
  Lattice lattice_;
  std::vector<GroupElement> images_;
  FiniteSubgroup symmetry_;
};

struct ConvexTerm {
  std::vector<std::int64_t> coeffs;  // lattice basis coefficients
  GroupElement h;
};

struct ConvexCollision {
  ConvexTerm first;
  ConvexTerm second;
  GroupElement value;
};

struct ConvexPropernessResult {
  bool proper = true;
  std::optional<ConvexCollision> witness;
};

FiniteSet image(const ConvexCosetProgression& p, const Rational& t = 1, std::size_t cap = kDefaultCap);
// First collision in lexicographic coefficient order, then canonical order
// of H.
ConvexPropernessResult is_proper(const ConvexCosetProgression& p, const Rational& t = 1,
                                 std::size_t cap = kDefaultCap);

// Box body prod [-N_i, N_i], Gamma = Z^d, phi(e_i) = v_i.
ConvexCosetProgression to_convex(const CosetProgression& p);

}  // namespace gapjohn
