#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "gapjohn/convex_progression.hpp"
#include "gapjohn/progression.hpp"

namespace gapjohn {

// target <= union of (x + covering set) over the listed translates x.
struct CoveringCertificate {
  std::vector<GroupElement> translates;
  // Which set was translated, e.g. "Image(P)" or "Image(Q_2)".
  std::string covering_set;
  Rational bound;
  std::size_t count = 0;
  bool within_bound = false;
  // Doubling cover: size(P) <= size(P_t) <= (4t+1)^d size(P).
  std::optional<bool> size_inequality_holds;
  // Ruzsa cover: count * size(Q) / ((t+t'+1)^d size(P)).
  std::optional<Rational> run_constant;
  std::size_t target_size = 0;
  std::size_t tile_size = 0;
};

// Greedy cover in canonical order: the least uncovered x receives the
// translate x - min(tile).
std::vector<GroupElement> greedy_cover(const FiniteSet& target, const FiniteSet& tile);

// First element of target missing from the union of translates, if any.
std::optional<GroupElement> first_uncovered(const FiniteSet& target, const std::vector<GroupElement>& translates,
                                            const FiniteSet& tile);

// Image(P_t) covered by translates of Image(P); bound (4t+1)^rank.  Requires t >= 1.
CoveringCertificate doubling_cover(const CosetProgression& p, const Rational& t, std::size_t cap = kDefaultCap);
CoveringCertificate doubling_cover(const ConvexCosetProgression& p, const Rational& t,
                                   std::size_t cap = kDefaultCap);

// Image(P_{t'}) covered by translates of Image(Q_2) based at a maximal
// family of points whose Q-translates are pairwise disjoint.  Throws
// PreconditionError unless Image(Q) <= Image(P_t).
CoveringCertificate ruzsa_cover(const CosetProgression& p, const CosetProgression& q, const Rational& t,
                                const Rational& t_prime, std::size_t cap = kDefaultCap);

}  // namespace gapjohn
