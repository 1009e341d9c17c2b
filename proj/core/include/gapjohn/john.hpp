#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gapjohn/convex_progression.hpp"
#include "gapjohn/lattice.hpp"
#include "gapjohn/polytope.hpp"
#include "gapjohn/progression.hpp"

namespace gapjohn {

// Factors of a sandwich inner <= target <= outer, with the dilations at which
// the claimed inclusions were checked by enumeration.  Dilations whose sets
// did not fit under the verification cap are listed as skipped.
struct InclusionCert {
  Rational inner_factor = 1;
  Rational outer_factor = 1;
  // Least factor (dyadic search, capped by outer_factor) at which the outer
  // inclusion was confirmed directly.
  std::optional<Rational> verified_outer_factor;
  std::vector<Rational> checked_dilations;
  std::vector<Rational> skipped_dilations;
  std::string method = "exact-enumeration";
};

struct VerifyOptions {
  bool enabled = true;
  std::size_t cap = kDefaultCap;
};

struct DiscreteJohnResult {
  // Infinitely proper GAP in Z^d, the group of lattice coordinates.
  CosetProgression gap;
  // The same steps as vectors of R^d.
  std::vector<RationalVector> steps;
  std::optional<Ellipsoid> ellipsoid;
  std::optional<ReducedBasisReport> reduction;
  // (t / lambda) B n Gamma <= Image(P_t) <= t B n Gamma for every t > 0.
  Rational lambda = 1;
  InclusionCert cert;
  std::optional<std::size_t> body_points;  // |B n Gamma|
  // Size bounds with C = 16: |B n Gamma| <= (16d)^{7d/2} size(P), size(P) <= |B n Gamma|.
  std::optional<bool> size_bounds_hold;
  // |B n Gamma| <= 3^d d! vol(B) / (2^d covol); only meaningful when
  // B n Gamma spans R^d and d is within the volume limit.
  std::optional<bool> point_count_holds;
  bool lambda_within_bound = true;  // lambda <= (16d)^{3d/2}
};

DiscreteJohnResult discrete_john(const SymmetricPolytope& body, const Lattice& lattice,
                                 const std::vector<Rational>& check_dilations = {1, 2, 4},
                                 VerifyOptions verify = {});

struct RankReductionTrace {
  std::size_t rank_before = 0;
  // Collision in P_{1/2}, in lattice coordinates.
  ConvexCollision witness;
  std::vector<std::int64_t> y;
  Integer n;
  std::vector<std::int64_t> y_primitive;
  // Least k >= 1 with k phi(y') in H.
  std::int64_t torsion_order = 1;
  // Unimodular W with W e_d = y'; the normalizing transform is W^{-1}.
  RationalMatrix change;
  RationalMatrix normalizing;
  SymmetricPolytope projected_body;
  FiniteSubgroup symmetry_after;
  std::vector<Rational> verified_dilations;
  std::vector<Rational> skipped_dilations;
};

// One rank reduction step.  Throws PreconditionError if P is 1/2-proper.
std::pair<ConvexCosetProgression, RankReductionTrace> rank_reduce(const ConvexCosetProgression& p,
                                                                  std::size_t cap = kDefaultCap,
                                                                  VerifyOptions verify = {});

struct ConvJohnResult {
  ConvexCosetProgression q;
  std::vector<RankReductionTrace> ledger;
  Rational t;
  // Image(P_s) <= Image(Q_{outer s}) for s > 0, Image(Q_{inner s}) <= Image(P_s) for s >= 1.
  Rational outer_factor;
  Rational inner_factor;
  InclusionCert cert;
};

// Requires t > 1/2 or t = 1/2.
ConvJohnResult conv_john(const ConvexCosetProgression& p, const Rational& t, std::size_t cap = kDefaultCap,
                         VerifyOptions verify = {});

struct GapJohnResult {
  CosetProgression q;
  std::size_t rank_before = 0;
  std::size_t reductions = 0;
  Rational discrete_lambda = 1;
  // Image(Q) <= Image(P) <= Image(Q_lambda).
  Rational lambda = 1;
  InclusionCert cert;
  std::optional<std::size_t> size_p;
  std::optional<std::size_t> size_q;
  // size(P) <= t^d 2^{d^2 + 16 d (1 + log2 d)} size(Q).
  std::optional<bool> size_bound_holds;
  bool lambda_within_bound = true;  // lambda <= (16d)^{3d/2} t
};

// t-proper Q with Image(Q) <= Image(P) <= Image(Q_lambda).  Requires t >= 1.
GapJohnResult gap_john(const CosetProgression& p, const Rational& t, std::size_t cap = kDefaultCap,
                       VerifyOptions verify = {});

struct GapJohnOuterResult {
  CosetProgression q;
  // Image(P) <= Image(Q) <= Image(P_{lambda t}).
  Rational lambda = 1;
  int attempts = 0;
  InclusionCert cert;
  std::optional<std::size_t> size_p;
  std::optional<std::size_t> size_q;
  // size(Q) <= (16d)^{3d^2/2} t^d size(P).
  std::optional<bool> size_bound_holds;
};

inline constexpr int kDefaultRetryLimit = 16;

// Adaptive search over lambda = 1, 2, 4, ... running gap_john on P_{lambda t}
// until Image(P) <= Image(Q).  Throws CapExceeded after retry_limit failures.
GapJohnOuterResult gap_john_outer(const CosetProgression& p, const Rational& t, std::size_t cap = kDefaultCap,
                                  int retry_limit = kDefaultRetryLimit, VerifyOptions verify = {});

// Least factor mu among 1, 2, 4, ..., bound (bound included) such that
// inner <= Image(outer_{mu}); nullopt if even bound fails.
std::optional<Rational> least_covering_dilation(const FiniteSet& inner, const CosetProgression& outer,
                                                const Rational& bound, std::size_t cap);

}  // namespace gapjohn
