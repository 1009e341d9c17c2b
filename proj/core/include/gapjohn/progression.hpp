#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "gapjohn/group.hpp"
#include "gapjohn/rational.hpp"

namespace gapjohn {

// Dimensions N and steps v of a generalized arithmetic progression.
struct Gap {
  std::vector<Rational> dims;
  std::vector<GroupElement> steps;

  std::size_t rank() const { return dims.size(); }
  friend bool operator==(const Gap&, const Gap&) = default;
};

// h + n_1 v_1 + ... + n_d v_d with |n_i| <= N_i and h in H.
class CosetProgression {
 public:
  CosetProgression() = default;
  // Throws PreconditionError for non-positive dimensions, length mismatches
  // or steps / subgroup living in another group.
  CosetProgression(AmbientGroup group, Gap gap, FiniteSubgroup symmetry);
  // Progression with trivial symmetry group.
  CosetProgression(AmbientGroup group, Gap gap);

  const AmbientGroup& group() const { return group_; }
  const Gap& gap() const { return gap_; }
  const std::vector<Rational>& dims() const { return gap_.dims; }
  const std::vector<GroupElement>& steps() const { return gap_.steps; }
  const FiniteSubgroup& symmetry() const { return symmetry_; }
  std::size_t rank() const { return gap_.rank(); }

  // P_t: every dimension multiplied by t > 0.
  CosetProgression dilate(const Rational& t) const;
  // Dimensions replaced by floor(N_i); zero dimensions are dropped.
  CosetProgression floored() const;
  // floor(t N_i) for each i.
  std::vector<std::int64_t> box(const Rational& t = 1) const;
  // |H| * prod (2 floor(t N_i) + 1), the size of a proper P_t.
  Integer formal_size(const Rational& t = 1) const;

  // h + sum n_i v_i.
  GroupElement evaluate(const std::vector<std::int64_t>& coeffs, const GroupElement& h) const;

  friend bool operator==(const CosetProgression& a, const CosetProgression& b) {
    return a.group_ == b.group_ && a.gap_ == b.gap_ && a.symmetry_ == b.symmetry_;
  }

 private:
  AmbientGroup group_;
  Gap gap_;
  FiniteSubgroup symmetry_;
};

struct ProgressionTerm {
  std::vector<std::int64_t> coeffs;
  GroupElement h;

  friend bool operator==(const ProgressionTerm&, const ProgressionTerm&) = default;
};

struct CollisionWitness {
  // The later term in scan order first, then the earlier one it collides with.
  ProgressionTerm first;
  ProgressionTerm second;
  GroupElement value;
};

struct PropernessResult {
  bool proper = true;
  std::optional<CollisionWitness> witness;
};

// Image(P_t).  Throws CapExceeded when the formal size exceeds cap.
FiniteSet image(const CosetProgression& p, const Rational& t = 1, std::size_t cap = kDefaultCap);
// Exhaustive hash-based collision scan in lexicographic coefficient order,
// then canonical order of H.
PropernessResult is_proper(const CosetProgression& p, const Rational& t = 1, std::size_t cap = kDefaultCap);

}  // namespace gapjohn
